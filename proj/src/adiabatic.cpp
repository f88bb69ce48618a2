#include "clockforge/adiabatic.hpp"

#include <cmath>

#include "clockforge/walk.hpp"

namespace clockforge::adiabatic {

namespace {

Eigen::MatrixXd ends_term(int n) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
  h(0, 0) = -1.0;
  h(n, n) = 1.0;
  return h;
}

Eigen::MatrixXd prop_term(int n) {
  return 2.0 * Eigen::MatrixXd::Identity(n + 1, n + 1) +
         walk::build_walk_matrix({n, 1.0, 1.0});
}

}  // namespace

void validate(const ScheduleSpec& spec) {
  if (spec.n_links < 1) throw domain_error("ScheduleSpec: N must be >= 1");
  if (!(spec.t1 > 0) || !(spec.t2 > 0))
    throw domain_error("ScheduleSpec: durations must be positive");
  if (!spec.s_table.empty()) {
    if (spec.s_table.front() != std::pair<double, double>{0.0, 0.0} ||
        spec.s_table.back() != std::pair<double, double>{1.0, 1.0})
      throw domain_error("ScheduleSpec: s table must run from (0,0) to (1,1)");
    for (size_t i = 1; i < spec.s_table.size(); ++i)
      if (spec.s_table[i].first < spec.s_table[i - 1].first ||
          spec.s_table[i].second < spec.s_table[i - 1].second)
        throw domain_error("ScheduleSpec: s table must be monotone");
  }
}

double schedule_s(const ScheduleSpec& spec, double t) {
  const double u = (t - spec.t1) / spec.t2;
  if (spec.s_table.empty()) return std::clamp(u, 0.0, 1.0);
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  for (size_t i = 1; i < spec.s_table.size(); ++i) {
    const auto [u0, s0] = spec.s_table[i - 1];
    const auto [u1, s1] = spec.s_table[i];
    if (u <= u1) {
      if (u1 == u0) return s1;
      return s0 + (s1 - s0) * (u - u0) / (u1 - u0);
    }
  }
  return 1;
}

Eigen::MatrixXd reduced_hamiltonian(const ScheduleSpec& spec, double t) {
  validate(spec);
  const int n = spec.n_links;
  const double total = 2 * spec.t1 + spec.t2;
  if (t < -1e-12 || t > total + 1e-12)
    throw range_error("reduced_hamiltonian: t outside the schedule");
  const Eigen::MatrixXd ends = ends_term(n);
  const Eigen::MatrixXd prop = prop_term(n);
  if (t <= spec.t1) return ends + (t / spec.t1) * prop;
  if (t <= spec.t1 + spec.t2)
    return (1.0 - 2.0 * schedule_s(spec, t)) * ends + prop;
  return -ends + ((total - t) / spec.t1) * prop;
}

std::vector<GapPoint> gap_profile(const ScheduleSpec& spec, int grid_points) {
  validate(spec);
  if (grid_points < 3) throw domain_error("gap_profile: need >= 3 points");
  const double total = 2 * spec.t1 + spec.t2;
  std::vector<GapPoint> out;
  out.reserve(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    const double t = total * i / (grid_points - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(
        reduced_hamiltonian(spec, t), Eigen::EigenvaluesOnly);
    out.push_back({t, s.eigenvalues()[1] - s.eigenvalues()[0],
                   s.eigenvalues()[0]});
  }
  return out;
}

double integrate_schedule(const ScheduleSpec& spec, double rel_tol) {
  validate(spec);
  if (!(rel_tol > 0)) throw domain_error("integrate_schedule: bad tolerance");
  const int n = spec.n_links;
  const double total = 2 * spec.t1 + spec.t2;

  auto rhs = [&](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    return std::complex<double>(0, -1) * (reduced_hamiltonian(spec, t) * y);
  };

  // Dormand-Prince 5(4) with standard coefficients.
  static const double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1, 1};
  static const double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
       -5103.0 / 18656},
      {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double b5[7] = {35.0 / 384,      0, 500.0 / 1113, 125.0 / 192,
                               -2187.0 / 6784, 11.0 / 84, 0};
  static const double b4[7] = {5179.0 / 57600,    0,           7571.0 / 16695,
                               393.0 / 640,       -92097.0 / 339200,
                               187.0 / 2100,      1.0 / 40};

  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n + 1);
  y[0] = 1.0;
  double t = 0;
  double h = std::min(0.01, total / 16);
  const double h_min = 1e-12 * total;
  const double abs_tol = 1e-12;

  std::vector<Eigen::VectorXcd> k(7);
  while (t < total) {
    h = std::min(h, total - t);
    for (int i = 0; i < 7; ++i) {
      Eigen::VectorXcd yi = y;
      for (int j = 0; j < i; ++j) yi += h * a[i][j] * k[j];
      k[i] = rhs(t + c[i] * h, yi);
    }
    Eigen::VectorXcd y5 = y, y4 = y;
    for (int i = 0; i < 7; ++i) {
      y5 += h * b5[i] * k[i];
      y4 += h * b4[i] * k[i];
    }
    const double err = (y5 - y4).norm();
    // Error-per-unit-time control keeps the accumulated drift near rel_tol;
    // the floor stops the control from chasing roundoff at section corners.
    const double scale = std::max(y.norm(), y5.norm());
    const double tol = std::max((abs_tol + rel_tol * scale) * (h / total),
                                64 * 2.3e-16 * scale);
    if (err <= tol) {
      t += h;
      y = y5;
    }
    const double factor =
        (err > 0) ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (h < h_min)
      throw integrator_tolerance("integrate_schedule: step size collapsed");
  }
  if (std::abs(y.norm() - 1.0) > 1e-8)
    throw integrator_tolerance("integrate_schedule: norm drifted");
  return std::norm(y[n]);
}

}  // namespace clockforge::adiabatic
