#include "clockforge/walk.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace clockforge::walk {

namespace {

constexpr double kPi = std::numbers::pi;

void validate(const WalkSpec& spec) {
  if (spec.n_links < 1) throw domain_error("WalkSpec: N must be >= 1");
  if (!std::isfinite(spec.left_loop) || !std::isfinite(spec.right_loop))
    throw domain_error("WalkSpec: loop strengths must be finite");
}

// Continuous phase form of the goniometric quantization condition:
//   Phi(p) = 2 arg(R - e^{-ip}) + 2 arg(L - e^{-ip}) - 2 N p,
// with roots at Phi == 0 (mod 2pi).  atan2 supplies the branch-tracked
// arctan(sin p / (R - cos p)).
double phase_function(const WalkSpec& spec, double p) {
  const double s = std::sin(p), c = std::cos(p);
  return 2.0 * std::atan2(s, spec.right_loop - c) +
         2.0 * std::atan2(s, spec.left_loop - c) - 2.0 * spec.n_links * p;
}

// sin(Phi/2) vanishes exactly when Phi == 0 (mod 2pi).
double phase_residual(const WalkSpec& spec, double p) {
  return std::sin(0.5 * phase_function(spec, p));
}

// Hyperbolic quantization residual in the overflow-free form
//   h(y) = (R-y)(L-y) - y^{-2N} (R-1/y)(L-1/y),   y = e^q > 1,
// equivalent to the log-scaled comparison of the two sides of the condition
// (y^{2N} would overflow for N > 300).
double hyper_residual(const WalkSpec& spec, double y) {
  const double L = spec.left_loop, R = spec.right_loop;
  const double damp = std::exp(-2.0 * spec.n_links * std::log(y));
  return (R - y) * (L - y) - damp * (R - 1.0 / y) * (L - 1.0 / y);
}

// For L == R == C the condition factors as (C-y) = sign * y^{-N} (C-1/y);
// each factor has a simple, well-conditioned root even when the pair split
// is exponentially small.
double hyper_residual_factored(double C, int n_links, double y, int sign) {
  const double damp = std::exp(-double(n_links) * std::log(y));
  return (C - y) - sign * damp * (C - 1.0 / y);
}

// det(H + 2 I) for the walk matrix; zero iff -2 is an exact eigenvalue
// (the linear-mode boundary between goniometric and hyperbolic branches).
double boundary_det(const WalkSpec& spec) {
  const double l = 1.0 - spec.left_loop, r = 1.0 - spec.right_loop;
  return l + r + spec.n_links * l * r;
}

double boundary_det_tol(const WalkSpec& spec) {
  const double l = 1.0 - spec.left_loop, r = 1.0 - spec.right_loop;
  return 1e-12 * (1.0 + std::abs(l) + std::abs(r) +
                  std::abs(spec.n_links * l * r));
}

WalkSpec flipped(const WalkSpec& spec) {
  return {spec.n_links, -spec.left_loop, -spec.right_loop};
}

// Sturm count of eigenvalues strictly below `shift` via the LDL^T recurrence
// on the tridiagonal walk matrix.  Exact zeros are nudged positive, so an
// eigenvalue exactly at `shift` is not counted.
int sturm_count_below(const WalkSpec& spec, double shift) {
  const int n = spec.n_links;
  int count = 0;
  double d = -spec.left_loop - shift;
  if (d == 0) d = 1e-300;
  if (d < 0) ++count;
  for (int k = 1; k <= n; ++k) {
    const double diag = (k == n) ? -spec.right_loop : 0.0;
    d = (diag - shift) - 1.0 / d;
    if (d == 0) d = 1e-300;
    if (d < 0) ++count;
  }
  return count;
}

struct ExpectedCounts {
  int strict_bottom = 0;         // eigenvalues < -2
  int strict_top = 0;            // eigenvalues > +2
  bool boundary_bottom = false;  // eigenvalue exactly -2 (not the L=R=1 case)
  bool boundary_top = false;     // eigenvalue exactly +2 (not the L=R=-1 case)
  int interior = 0;              // goniometric roots with p in (0,pi)
};

ExpectedCounts expected_counts(const WalkSpec& spec) {
  ExpectedCounts e;
  const bool uniform_case = std::abs(spec.left_loop - 1) < 1e-14 &&
                            std::abs(spec.right_loop - 1) < 1e-14;
  const bool alternating_case = std::abs(spec.left_loop + 1) < 1e-14 &&
                                std::abs(spec.right_loop + 1) < 1e-14;
  e.boundary_bottom =
      !uniform_case && std::abs(boundary_det(spec)) <= boundary_det_tol(spec);
  const WalkSpec f = flipped(spec);
  e.boundary_top =
      !alternating_case && std::abs(boundary_det(f)) <= boundary_det_tol(f);
  // Count strictly outside the band at a shift slightly beyond +-2, so that
  // exact boundary eigenvalues (whose Sturm pivot rounds to noise) are never
  // double-booked against the flags above.
  e.strict_bottom = sturm_count_below(spec, -2.0 - 1e-11);
  e.strict_top = spec.n_links + 1 - sturm_count_below(spec, 2.0 + 1e-11);
  e.interior = spec.n_links + 1 - e.strict_bottom - e.strict_top -
               (e.boundary_bottom ? 1 : 0) - (e.boundary_top ? 1 : 0) -
               (uniform_case ? 1 : 0) - (alternating_case ? 1 : 0);
  return e;
}

double bisect(const std::function<double(double)>& f, double a, double b,
              double fa, double xtol) {
  for (int it = 0; it < 200 && (b - a) > xtol * (1.0 + std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

GoniometricMode make_goniometric(const WalkSpec& spec, double p) {
  GoniometricMode m;
  m.momentum = p;
  m.energy = -2.0 * std::cos(p);
  const int n = spec.n_links;
  if (p == 0.0 || p == kPi) {
    // Uniform / alternating special state; the two plane waves coincide.
    const double amp = 0.5 / std::sqrt(double(n + 1));
    m.amplitude_a = m.amplitude_b = amp;
    return m;
  }
  // psi_x = sin(p(x+1)) - L sin(px)  <=>  a = (L - e^{-ip})/2i,  b = conj(a).
  double norm2 = 0;
  for (int x = 0; x <= n; ++x) {
    const double v = std::sin(p * (x + 1)) - spec.left_loop * std::sin(p * x);
    norm2 += v * v;
  }
  const double norm = std::sqrt(norm2);
  const std::complex<double> i2(0.0, 2.0);
  m.amplitude_a =
      (spec.left_loop - std::exp(std::complex<double>(0, -p))) / i2 / norm;
  m.amplitude_b = std::conj(m.amplitude_a);
  return m;
}

// Scale-managed hyperbolic eigenvector for a bottom-branch root y > 1.
Eigen::VectorXd hyperbolic_vector_bottom(const WalkSpec& spec, double y) {
  const int n = spec.n_links;
  const double q = std::log(y);
  const double L = spec.left_loop, R = spec.right_loop;
  Eigen::VectorXd v(n + 1);
  if (std::abs(L - R) <= 1e-10 * (1.0 + std::abs(L))) {
    // Symmetric pair: psi_x = e^{-qx} + s e^{-q(N-x)}, s = +1 for the root
    // above C (symmetric, lower energy), -1 for the root below C.
    const double C = 0.5 * (L + R);
    const double s = (y >= C) ? 1.0 : -1.0;
    for (int x = 0; x <= n; ++x)
      v[x] = std::exp(-q * x) + s * std::exp(-q * (n - x));
  } else if (std::abs(y - R) <= std::abs(y - L)) {
    // Localized at the right end; closed form anchored at the left row.
    const double A = 0.5 * (y - L), B = 0.5 * (L - 1.0 / y);
    for (int x = 0; x <= n; ++x)
      v[x] = A * std::exp(-q * (n - x)) + B * std::exp(-q * (x + n));
  } else {
    // Localized at the left end; mirror image anchored at the right row.
    const double A = 0.5 * (y - R), B = 0.5 * (R - 1.0 / y);
    for (int x = 0; x <= n; ++x)
      v[x] = A * std::exp(-q * x) + B * std::exp(-q * (2 * n - x));
  }
  v.normalize();
  if (v[0] < 0 || (v[0] == 0 && v[n] < 0)) v = -v;
  return v;
}

HyperbolicMode make_hyperbolic(const WalkSpec& spec, double y, bool top) {
  HyperbolicMode m;
  m.top = top;
  m.rate = std::log(y);
  m.energy = (top ? 1.0 : -1.0) * (y + 1.0 / y);
  const WalkSpec base = top ? flipped(spec) : spec;
  const Eigen::VectorXd v = hyperbolic_vector_bottom(base, y);
  // Read c, d of psi_x = c e^{-qx} + d e^{qx} from the first two amplitudes
  // (d underflows to 0 for large qN, which is the honest double limit).
  const double eq = y, emq = 1.0 / y;
  if (eq - emq > 1e-12) {
    const double d = (v[1] - v[0] * emq) / (eq - emq);
    m.amplitude_d = d;
    m.amplitude_c = v[0] - d;
  } else {
    m.amplitude_c = m.amplitude_d = 0.5 * v[0];
  }
  return m;
}

// Boundary mode at E = -2 (or +2): the linear solution psi_x = 1 + (1-L)x,
// with an alternating sign on the top branch.
Eigen::VectorXd boundary_vector(const WalkSpec& spec, bool top) {
  const int n = spec.n_links;
  const double L = top ? -spec.left_loop : spec.left_loop;
  Eigen::VectorXd v(n + 1);
  for (int x = 0; x <= n; ++x) {
    double a = 1.0 + (1.0 - L) * x;
    if (top && (x % 2)) a = -a;
    v[x] = a;
  }
  v.normalize();
  if (v[0] < 0) v = -v;
  return v;
}

HyperbolicMode make_boundary(bool top) {
  HyperbolicMode m;
  m.top = top;
  m.rate = 0.0;
  m.energy = top ? 2.0 : -2.0;
  return m;
}

std::vector<double> goniometric_scan(const WalkSpec& spec, int grid_points,
                                     double xtol) {
  std::vector<double> points;
  points.reserve(grid_points + 96);
  const double h = kPi / (grid_points + 1);
  // Geometric clusters catch roots that slip below the uniform grid near the
  // band edges (a momentum -> 0 as the boundary determinant vanishes).  The
  // depth is floored at ~1e-5: below that the phase signal (~p^3 when the
  // slope degenerates) drowns in rounding noise (~eps*p), and a root that
  // small is within 1e-10 of the band edge, i.e. boundary-mode territory.
  for (int j = 46; j >= 1; --j) {
    const double p = h * std::ldexp(1.0, -j);
    if (p >= 1e-5) points.push_back(p);
  }
  for (int i = 1; i <= grid_points; ++i) points.push_back(i * h);
  for (int j = 1; j <= 46; ++j) {
    const double w = h * std::ldexp(1.0, -j);
    if (w >= 1e-5) points.push_back(kPi - w);
  }
  std::sort(points.begin(), points.end());

  auto f = [&](double p) { return phase_residual(spec, p); };
  std::vector<double> roots;
  bool have_prev = false;
  double prev_p = 0, prev_g = 0;
  for (double p : points) {
    const double g = f(p);
    if (g == 0) {
      roots.push_back(p);
      have_prev = false;
      continue;
    }
    if (have_prev && (g > 0) != (prev_g > 0))
      roots.push_back(bisect(f, prev_p, p, prev_g, xtol));
    prev_p = p;
    prev_g = g;
    have_prev = true;
  }
  return roots;
}

std::vector<double> hyperbolic_scan(const WalkSpec& spec, int grid_points,
                                    double xtol) {
  const double L = spec.left_loop, R = spec.right_loop;
  const double ymax = std::max({std::abs(L), std::abs(R), 1.0}) + 1.2;
  std::vector<double> points;
  // Same rounding-noise floor near y=1 as in the momentum scan: h(1) = 0
  // identically, and a root closer than ~1e-6 to 1 sits within 1e-12 of the
  // band edge.
  const double y0 = 1.0 + 1e-6;
  for (int j = 48; j >= 1; --j) {
    const double w = (ymax - 1.0) * std::ldexp(1.0, -j);
    if (w >= 1e-6) points.push_back(1.0 + w);
  }
  for (int i = 1; i <= grid_points; ++i)
    points.push_back(1.0 + (ymax - 1.0) * i / double(grid_points));
  for (double s : {L, R}) {
    if (s <= 1.0 + 1e-6 || s >= ymax) continue;
    for (int j = 1; j <= 48; ++j) {
      const double w = (s - 1.0) * std::ldexp(1.0, -j);
      points.push_back(s - w);
      points.push_back(s + w);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto f = [&](double y) { return hyper_residual(spec, y); };
  std::vector<double> roots;
  bool have_prev = false;
  double prev_y = 0, prev_g = 0;
  for (double y : points) {
    if (y <= y0) continue;
    const double g = f(y);
    if (g == 0) {
      roots.push_back(y);
      have_prev = false;
      continue;
    }
    if (have_prev && (g > 0) != (prev_g > 0))
      roots.push_back(bisect(f, prev_y, y, prev_g, xtol));
    prev_y = y;
    prev_g = g;
    have_prev = true;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return b - a < 1e-11; }),
              roots.end());
  return roots;
}

// Factored roots for the symmetric L == R == C > 1 case.
std::vector<double> hyperbolic_roots_symmetric(double C, int n, int expected,
                                               double xtol) {
  std::vector<double> roots;
  {
    // Root above C from (C-y) + y^{-N}(C-1/y) = 0; always present for C > 1.
    auto f = [&](double y) { return hyper_residual_factored(C, n, y, -1); };
    const double fa = f(C);
    if (fa <= 0)
      roots.push_back(C);  // split below double resolution
    else
      roots.push_back(bisect(f, C, C + 1.2, fa, xtol));
  }
  if (expected >= 2) {
    // Root below C from (C-y) - y^{-N}(C-1/y) = 0.  The residual rises from
    // 0 at y=1 before turning negative, so scan inward for a positive value.
    auto f = [&](double y) { return hyper_residual_factored(C, n, y, +1); };
    double lo = 0, flo = 0;
    for (int j = 1; j <= 50; ++j) {
      const double y = 1.0 + (C - 1.0) * std::ldexp(1.0, -j);
      const double fy = f(y);
      if (fy > 0) {
        lo = y;
        flo = fy;
        break;
      }
    }
    if (lo == 0)
      roots.push_back(C);  // unresolvable split
    else
      roots.push_back(bisect(f, lo, C, flo, xtol));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> solve_hyperbolic_y(const WalkSpec& spec, int expected,
                                       double tol, bool allow_closed_form) {
  if (expected == 0) return {};
  const double L = spec.left_loop, R = spec.right_loop;
  const double xtol = std::min(tol, 1e-13);

  // Exact closed form for the biased walk L*R = 1 with one loop above 1.
  if (allow_closed_form &&
      std::abs(L * R - 1.0) <= 1e-12 * (1.0 + L * L + R * R) &&
      std::max(L, R) > 1.0)
    return {std::max(L, R)};

  if (std::abs(L - R) <= 1e-10 * (1.0 + std::abs(L)) && L > 1.0)
    return hyperbolic_roots_symmetric(0.5 * (L + R), spec.n_links, expected,
                                      xtol);

  for (int grid = 2048; grid <= 2048 * 64; grid *= 8) {
    auto roots = hyperbolic_scan(spec, grid, xtol);
    if (static_cast<int>(roots.size()) == expected) return roots;
  }
  throw bracketing_failure(
      "solve_hyperbolic_rates: could not isolate the expected sign changes; "
      "tolerance too coarse");
}

std::vector<double> solve_goniometric_p(const WalkSpec& spec, int expected,
                                        double tol) {
  const double xtol = std::min(tol, 1e-12);
  for (int grid = 8 * (spec.n_links + 1); grid <= 512 * (spec.n_links + 1);
       grid *= 4) {
    auto roots = goniometric_scan(spec, grid, xtol);
    if (static_cast<int>(roots.size()) == expected) return roots;
  }
  throw bracketing_failure(
      "solve_goniometric_momenta: could not isolate the expected sign "
      "changes; tolerance too coarse");
}

struct ClosedForm {
  bool matched = false;
  std::vector<double> momenta;           // interior p roots
  bool uniform_mode = false;             // p = 0
  bool alternating_mode = false;         // p = pi
  std::vector<double> hyperbolic_y;      // bottom branch
  std::vector<double> hyperbolic_y_top;  // top branch (of the flipped spec)
};

ClosedForm closed_form(const WalkSpec& spec) {
  ClosedForm cf;
  const int n = spec.n_links;
  const double L = spec.left_loop, R = spec.right_loop;
  auto near = [](double a, double b, double tol) {
    return std::abs(a - b) < tol;
  };
  // Near-degenerate loops at +-1 switch to the closed form; the quantization
  // condition is numerically singular there.
  if (near(L, 1, 1e-9) && near(R, 1, 1e-9)) {
    cf.matched = true;
    cf.uniform_mode = true;
    for (int k = 1; k <= n; ++k) cf.momenta.push_back(k * kPi / (n + 1));
  } else if (near(L, -1, 1e-9) && near(R, -1, 1e-9)) {
    cf.matched = true;
    cf.alternating_mode = true;
    for (int k = 1; k <= n; ++k) cf.momenta.push_back(k * kPi / (n + 1));
  } else if ((near(L, 1, 1e-12) && near(R, 0, 1e-12)) ||
             (near(L, 0, 1e-12) && near(R, 1, 1e-12))) {
    cf.matched = true;
    for (int k = 0; k <= n; ++k)
      cf.momenta.push_back((2 * k + 1) * kPi / (2 * n + 3));
  } else if (near(L, 0, 1e-12) && near(R, 0, 1e-12)) {
    cf.matched = true;
    for (int k = 1; k <= n + 1; ++k) cf.momenta.push_back(k * kPi / (n + 2));
  } else if (std::abs(L * R - 1.0) <= 1e-12 * (1.0 + L * L + R * R) &&
             std::max(std::abs(L), std::abs(R)) > 1.0 + 1e-9) {
    cf.matched = true;
    for (int k = 1; k <= n; ++k) cf.momenta.push_back(k * kPi / (n + 1));
    if (L > 0)
      cf.hyperbolic_y.push_back(std::max(L, R));
    else
      cf.hyperbolic_y_top.push_back(std::max(-L, -R));
  }
  return cf;
}

}  // namespace

Eigen::MatrixXd build_walk_matrix(const WalkSpec& spec) {
  validate(spec);
  const int n = spec.n_links;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  m(0, 0) = -spec.left_loop;
  m(n, n) = -spec.right_loop;
  for (int x = 0; x < n; ++x) {
    m(x, x + 1) = -1.0;
    m(x + 1, x) = -1.0;
  }
  return m;
}

std::vector<GoniometricMode> solve_goniometric_momenta(const WalkSpec& spec,
                                                       double tol) {
  validate(spec);
  if (!(tol > 0)) throw domain_error("tol must be positive");
  const ExpectedCounts counts = expected_counts(spec);
  const ClosedForm cf = closed_form(spec);

  std::vector<GoniometricMode> modes;
  if (cf.matched) {
    if (cf.uniform_mode) modes.push_back(make_goniometric(spec, 0.0));
    for (double p : cf.momenta) modes.push_back(make_goniometric(spec, p));
    if (cf.alternating_mode) modes.push_back(make_goniometric(spec, kPi));
  } else {
    for (double p : solve_goniometric_p(spec, counts.interior, tol))
      modes.push_back(make_goniometric(spec, p));
  }
  return modes;
}

std::vector<HyperbolicMode> solve_hyperbolic_rates(const WalkSpec& spec,
                                                   double tol) {
  validate(spec);
  if (!(tol > 0)) throw domain_error("tol must be positive");
  const ExpectedCounts counts = expected_counts(spec);
  std::vector<HyperbolicMode> modes;
  for (double y : solve_hyperbolic_y(spec, counts.strict_bottom, tol, true))
    modes.push_back(make_hyperbolic(spec, y, false));
  std::stable_sort(modes.begin(), modes.end(),
                   [](const HyperbolicMode& a, const HyperbolicMode& b) {
                     return a.energy < b.energy;
                   });
  return modes;
}

SpectralReport analytic_spectrum(const WalkSpec& spec, double tol) {
  validate(spec);
  if (!(tol > 0)) throw domain_error("tol must be positive");
  const ExpectedCounts counts = expected_counts(spec);
  const ClosedForm cf = closed_form(spec);

  std::vector<Mode> modes;
  if (cf.matched) {
    if (cf.uniform_mode) modes.emplace_back(make_goniometric(spec, 0.0));
    for (double p : cf.momenta) modes.emplace_back(make_goniometric(spec, p));
    if (cf.alternating_mode) modes.emplace_back(make_goniometric(spec, kPi));
    for (double y : cf.hyperbolic_y)
      modes.emplace_back(make_hyperbolic(spec, y, false));
    for (double y : cf.hyperbolic_y_top)
      modes.emplace_back(make_hyperbolic(spec, y, true));
    if (counts.boundary_bottom) modes.emplace_back(make_boundary(false));
    if (counts.boundary_top) modes.emplace_back(make_boundary(true));

    // Cross-check the closed form against the generic root finder.
    std::vector<double> check;
    for (double p : solve_goniometric_p(spec, counts.interior, tol))
      check.push_back(-2.0 * std::cos(p));
    for (double y : solve_hyperbolic_y(spec, counts.strict_bottom, tol, false))
      check.push_back(-(y + 1.0 / y));
    for (double y :
         solve_hyperbolic_y(flipped(spec), counts.strict_top, tol, false))
      check.push_back(y + 1.0 / y);
    if (counts.boundary_bottom) check.push_back(-2.0);
    if (counts.boundary_top) check.push_back(2.0);
    if (cf.uniform_mode) check.push_back(-2.0);
    if (cf.alternating_mode) check.push_back(2.0);
    std::vector<double> closed;
    for (const Mode& m : modes) closed.push_back(mode_energy(m));
    std::sort(check.begin(), check.end());
    std::sort(closed.begin(), closed.end());
    if (check.size() != closed.size())
      throw convergence_failure(
          "analytic_spectrum: closed-form mode count disagrees with scan");
    for (size_t i = 0; i < closed.size(); ++i)
      if (std::abs(closed[i] - check[i]) > 1e-9)
        throw convergence_failure(
            "analytic_spectrum: closed form disagrees with root finder");
  } else {
    for (double p : solve_goniometric_p(spec, counts.interior, tol))
      modes.emplace_back(make_goniometric(spec, p));
    for (double y : solve_hyperbolic_y(spec, counts.strict_bottom, tol, true))
      modes.emplace_back(make_hyperbolic(spec, y, false));
    for (double y :
         solve_hyperbolic_y(flipped(spec), counts.strict_top, tol, true))
      modes.emplace_back(make_hyperbolic(spec, y, true));
    if (counts.boundary_bottom) modes.emplace_back(make_boundary(false));
    if (counts.boundary_top) modes.emplace_back(make_boundary(true));
  }

  std::stable_sort(
      modes.begin(), modes.end(),
      [](const Mode& a, const Mode& b) { return mode_energy(a) < mode_energy(b); });

  SpectralReport report;
  report.method = Method::analytic;
  report.modes = std::move(modes);
  report.eigenvalues.resize(static_cast<Eigen::Index>(report.modes.size()));
  for (size_t i = 0; i < report.modes.size(); ++i)
    report.eigenvalues[static_cast<Eigen::Index>(i)] =
        mode_energy(report.modes[i]);
  if (report.modes.size() != static_cast<size_t>(spec.n_links + 1))
    throw convergence_failure("analytic_spectrum: mode count mismatch");
  report.gap = report.eigenvalues[1] - report.eigenvalues[0];
  return report;
}

SpectralReport numeric_spectrum(const Eigen::MatrixXd& matrix) {
  const auto n = matrix.rows();
  if (n < 2 || matrix.cols() != n)
    throw domain_error("numeric_spectrum: matrix must be square, dim >= 2");
  const double scale = 1.0 + matrix.cwiseAbs().maxCoeff();
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw domain_error("numeric_spectrum: matrix not symmetric");

  bool tridiagonal = true;
  for (Eigen::Index i = 0; i < n && tridiagonal; ++i)
    for (Eigen::Index j = i + 2; j < n; ++j)
      if (matrix(i, j) != 0) {
        tridiagonal = false;
        break;
      }

  Eigen::VectorXd evals;
  if (tridiagonal) {
    Eigen::VectorXd diag = matrix.diagonal();
    Eigen::VectorXd sub(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i) sub[i] = matrix(i, i + 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw convergence_failure("numeric_spectrum: eigensolver failed");
    evals = solver.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        matrix, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw convergence_failure("numeric_spectrum: eigensolver failed");
    evals = solver.eigenvalues();
  }
  std::sort(evals.data(), evals.data() + evals.size());

  // Loop strengths off the corners drive boundary-mode classification.
  const double L = -matrix(0, 0), R = -matrix(n - 1, n - 1);
  const double btol = 1e-9;
  SpectralReport report;
  report.method = Method::numeric;
  report.eigenvalues = evals;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    const double E = evals[i];
    if (E < -2.0 - btol || (std::abs(E + 2.0) <= btol && std::max(L, R) > 1)) {
      HyperbolicMode m;
      m.top = false;
      m.energy = E;
      m.rate = (E < -2.0) ? std::acosh(-E / 2.0) : 0.0;
      report.modes.emplace_back(m);
    } else if (E > 2.0 + btol ||
               (std::abs(E - 2.0) <= btol && std::min(L, R) < -1)) {
      HyperbolicMode m;
      m.top = true;
      m.energy = E;
      m.rate = (E > 2.0) ? std::acosh(E / 2.0) : 0.0;
      report.modes.emplace_back(m);
    } else {
      GoniometricMode m;
      m.energy = E;
      m.momentum = std::acos(std::clamp(-E / 2.0, -1.0, 1.0));
      report.modes.emplace_back(m);
    }
  }
  report.gap = evals[1] - evals[0];
  return report;
}

double mode_energy(const Mode& mode) {
  return std::visit([](const auto& m) { return m.energy; }, mode);
}

Eigen::VectorXd mode_vector(const WalkSpec& spec, const Mode& mode) {
  validate(spec);
  const int n = spec.n_links;
  if (const auto* g = std::get_if<GoniometricMode>(&mode)) {
    Eigen::VectorXd v(n + 1);
    const double p = g->momentum;
    if (p == 0.0) {
      v.setOnes();
    } else if (p == kPi) {
      for (int x = 0; x <= n; ++x) v[x] = (x % 2) ? -1.0 : 1.0;
    } else {
      for (int x = 0; x <= n; ++x)
        v[x] = std::sin(p * (x + 1)) - spec.left_loop * std::sin(p * x);
    }
    v.normalize();
    if (v[0] < 0 || (v[0] == 0 && v[n] < 0)) v = -v;
    return v;
  }
  const auto& h = std::get<HyperbolicMode>(mode);
  if (h.rate == 0.0) return boundary_vector(spec, h.top);
  const WalkSpec base = h.top ? flipped(spec) : spec;
  Eigen::VectorXd v = hyperbolic_vector_bottom(base, std::exp(h.rate));
  if (h.top)
    for (int x = 1; x <= n; x += 2) v[x] = -v[x];
  return v;
}

double mode_residual(const WalkSpec& spec, const Mode& mode) {
  const Eigen::MatrixXd m = build_walk_matrix(spec);
  const Eigen::VectorXd v = mode_vector(spec, mode);
  return (m * v - mode_energy(mode) * v).norm();
}

std::pair<double, double> endpoint_amplitudes(const WalkSpec& spec,
                                              int mode_index, double tol) {
  const SpectralReport report = analytic_spectrum(spec, tol);
  if (mode_index < 0 || mode_index >= static_cast<int>(report.modes.size()))
    throw index_error("endpoint_amplitudes: mode_index out of range");
  const Eigen::VectorXd v = mode_vector(spec, report.modes[mode_index]);
  return {v[0], v[spec.n_links]};
}

int hyperbolic_count(const SpectralReport& report) {
  int count = 0;
  for (const Mode& m : report.modes)
    if (const auto* h = std::get_if<HyperbolicMode>(&m); h && !h->top)
      ++count;
  return count;
}

int case_table_hyperbolic_count(const WalkSpec& spec) {
  const double lo = std::min(spec.left_loop, spec.right_loop);
  const double hi = std::max(spec.left_loop, spec.right_loop);
  if (lo > 1) return 2;
  if (hi > 1) return 1;
  return 0;
}

BiasedWalk biased_walk(int n_links, double bias) {
  if (n_links < 1) throw domain_error("biased_walk: N must be >= 1");
  if (!(bias > 1)) throw domain_error("biased_walk: bias must exceed 1");
  const int n = n_links;
  BiasedWalk w;
  w.matrix = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int x = 0; x < n; ++x) {
    w.matrix(x, x) += bias * bias;
    w.matrix(x + 1, x + 1) += 1.0;
    w.matrix(x, x + 1) += -bias;
    w.matrix(x + 1, x) += -bias;
  }
  w.ground_state.resize(n + 1);
  for (int x = 0; x <= n; ++x)
    w.ground_state[x] = std::exp(std::log(bias) * (x - n));
  w.ground_state.normalize();
  return w;
}

}  // namespace clockforge::walk
