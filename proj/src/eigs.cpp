#include "clockforge/eigs.hpp"

#include <cmath>

namespace clockforge::eigs {

EigenPairs lowest_dense(const Eigen::MatrixXd& m, int k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success)
    throw convergence_failure("lowest_dense: eigensolver failed");
  k = std::min<int>(k, static_cast<int>(m.rows()));
  EigenPairs out;
  out.values = solver.eigenvalues().head(k);
  out.vectors = solver.eigenvectors().leftCols(k);
  return out;
}

EigenPairs lowest_lanczos(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& matvec,
    std::int64_t dimension, int k, double tol) {
  if (k < 1 || k > dimension)
    throw domain_error("lowest_lanczos: bad pair count");

  // Deterministic, generically non-orthogonal start vector.
  Eigen::VectorXd v0(dimension);
  for (std::int64_t i = 0; i < dimension; ++i)
    v0[i] = 1.0 + 0.25 * std::sin(0.7 * double(i) + 0.3);
  v0.normalize();

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha, beta;  // beta[j] couples v_j and v_{j+1}
  basis.push_back(v0);

  const int max_iter = static_cast<int>(
      std::min<std::int64_t>(dimension, std::max(2 * k + 40, 120)));
  EigenPairs out;
  for (int grow = max_iter;; grow = std::min<std::int64_t>(2 * grow, dimension)) {
    while (static_cast<int>(basis.size()) < grow) {
      const Eigen::VectorXd& v = basis.back();
      Eigen::VectorXd w = matvec(v);
      const double a = v.dot(w);
      alpha.push_back(a);
      w -= a * v;
      if (basis.size() >= 2) w -= beta.back() * basis[basis.size() - 2];
      // Full reorthogonalization, twice for safety.
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& u : basis) w -= u.dot(w) * u;
      const double b = w.norm();
      if (b < 1e-14) {
        // Invariant subspace found; restart direction orthogonal to it.
        Eigen::VectorXd r(dimension);
        for (std::int64_t i = 0; i < dimension; ++i)
          r[i] = std::cos(1.3 * double(i) + 0.1 * double(basis.size()));
        for (int pass = 0; pass < 2; ++pass)
          for (const auto& u : basis) r -= u.dot(r) * u;
        const double rn = r.norm();
        if (rn < 1e-12) break;  // space exhausted
        beta.push_back(0.0);
        basis.push_back(r / rn);
        continue;
      }
      beta.push_back(b);
      basis.push_back(w / b);
    }

    const int m = static_cast<int>(alpha.size());
    if (m < k) throw convergence_failure("lowest_lanczos: space exhausted");
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ts(t);
    if (ts.info() != Eigen::Success)
      throw convergence_failure("lowest_lanczos: tridiagonal solve failed");

    // Residual estimate |beta_m * s_{m,i}| per Ritz pair.
    const double blast =
        (static_cast<int>(beta.size()) >= m) ? beta[m - 1] : 0.0;
    bool converged = true;
    for (int i = 0; i < k; ++i)
      if (std::abs(blast * ts.eigenvectors()(m - 1, i)) > tol) {
        converged = false;
        break;
      }
    if (converged || m >= dimension) {
      out.values = ts.eigenvalues().head(k);
      out.vectors = Eigen::MatrixXd::Zero(dimension, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < m; ++j)
          out.vectors.col(i) += ts.eigenvectors()(j, i) * basis[j];
      for (int i = 0; i < k; ++i) out.vectors.col(i).normalize();
      return out;
    }
    if (grow >= dimension)
      throw convergence_failure("lowest_lanczos: no convergence");
  }
}

EigenPairs lowest(const spins::LabeledSparseOperator& op, int k, double tol,
                  std::int64_t dense_cap) {
  if (op.dimension <= dense_cap) return lowest_dense(spins::to_dense(op), k);
  return lowest_lanczos(
      [&op](const Eigen::VectorXd& x) { return spins::apply(op, x); },
      op.dimension, k, tol);
}

}  // namespace clockforge::eigs
