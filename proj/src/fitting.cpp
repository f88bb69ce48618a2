#include "clockforge/fitting.hpp"

#include <cmath>

namespace clockforge::fit {

PowerLawFit fit_exponent(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw domain_error("fit_exponent: need at least 3 points");
  const auto n = static_cast<double>(points.size());

  double sx = 0, sy = 0;
  for (const auto& [size, value] : points) {
    if (!(size > 0) || !(value > 0))
      throw domain_error("fit_exponent: sizes and values must be positive");
    sx += std::log(size);
    sy += std::log(value);
  }
  const double mx = sx / n, my = sy / n;

  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [size, value] : points) {
    const double dx = std::log(size) - mx;
    const double dy = std::log(value) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0) throw domain_error("fit_exponent: all sizes equal");

  PowerLawFit f;
  f.exponent = sxy / sxx;
  f.intercept = my - f.exponent * mx;
  f.r_squared = (syy == 0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

}  // namespace clockforge::fit
