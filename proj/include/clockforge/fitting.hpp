#pragma once

#include <utility>
#include <vector>

#include "clockforge/common.hpp"

namespace clockforge::fit {

struct PowerLawFit {
  double exponent = 0;   // slope of log(value) vs log(size)
  double intercept = 0;  // log(value) at log(size) = 0
  double r_squared = 0;
};

// Least-squares fit of value = exp(intercept) * size^exponent on log-log data.
// Throws domain_error unless all points are strictly positive and there are
// at least 3 of them.
PowerLawFit fit_exponent(const std::vector<std::pair<double, double>>& points);

}  // namespace clockforge::fit
