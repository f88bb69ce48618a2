#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "clockforge/common.hpp"
#include "clockforge/sparse_op.hpp"

namespace clockforge::eigs {

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // one column per value
};

// Lowest k eigenpairs of the dense symmetric matrix.
EigenPairs lowest_dense(const Eigen::MatrixXd& m, int k);

// Lowest k Ritz pairs of a symmetric operator given by its matvec, via
// Lanczos iteration with full reorthogonalization; deterministic start
// vector, residual tolerance on each requested pair.
EigenPairs lowest_lanczos(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& matvec,
    std::int64_t dimension, int k, double tol = 1e-10);

// Dense up to `dense_cap`, Lanczos above.
EigenPairs lowest(const spins::LabeledSparseOperator& op, int k,
                  double tol = 1e-10, std::int64_t dense_cap = 4096);

}  // namespace clockforge::eigs
