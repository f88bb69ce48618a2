#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <variant>
#include <vector>

#include "clockforge/common.hpp"

namespace clockforge::walk {

// Quantum walk on a line with N links (N+1 sites) and endpoint self-loops of
// strength L (site 0) and R (site N):
//   H = -L|0><0| - R|N><N| - sum_x (|x><x+1| + |x+1><x|).
struct WalkSpec {
  int n_links;        // N >= 1
  double left_loop;   // L
  double right_loop;  // R
};

// Plane-wave eigenvector  psi_x = a e^{-ipx} + b e^{ipx},  E = -2 cos p.
struct GoniometricMode {
  double momentum = 0;  // p in [0, pi]
  std::complex<double> amplitude_a;
  std::complex<double> amplitude_b;
  double energy = 0;
};

// Exponential eigenvector  psi_x = c e^{-qx} + d e^{qx},  E = -2 cosh q,
// present only when an endpoint loop exceeds 1.  The mirrored branch with
// alternating signs (loops below -1) sits at the top of the spectrum with
// E = +2 cosh q; it carries top = true.
struct HyperbolicMode {
  double rate = 0;  // q >= 0
  double amplitude_c = 0;
  double amplitude_d = 0;
  double energy = 0;
  bool top = false;
};

using Mode = std::variant<GoniometricMode, HyperbolicMode>;

enum class Method { analytic, numeric };

struct SpectralReport {
  Eigen::VectorXd eigenvalues;  // sorted ascending, exactly N+1 entries
  std::vector<Mode> modes;      // aligned with eigenvalues
  double gap = 0;               // E1 - E0
  Method method = Method::analytic;
};

Eigen::MatrixXd build_walk_matrix(const WalkSpec& spec);

// Roots p in (0,pi) of the phase form of the quantization condition, plus the
// exact p=0 root iff L=R=1 and the p=pi root iff L=R=-1.
std::vector<GoniometricMode> solve_goniometric_momenta(const WalkSpec& spec,
                                                       double tol = 1e-10);

// Strict hyperbolic roots y = e^q > 1 of  y^{2N}(R-y)(L-y) = (R-1/y)(L-1/y),
// at the bottom of the spectrum.  Length 0, 1 or 2.
std::vector<HyperbolicMode> solve_hyperbolic_rates(const WalkSpec& spec,
                                                   double tol = 1e-10);

// Full analytic spectrum: goniometric + hyperbolic (bottom and top branches)
// merged and sorted.  Closed-form cases ((1,1), (-1,-1), (1,0), (0,0),
// (B,1/B)) short-circuit and are cross-checked against the root finder.
SpectralReport analytic_spectrum(const WalkSpec& spec, double tol = 1e-10);

// Independent oracle: dense/tridiagonal symmetric eigensolver on the matrix.
// Loop strengths are read off the matrix corners to classify boundary modes.
SpectralReport numeric_spectrum(const Eigen::MatrixXd& matrix);

// Normalized eigenvector of a mode, evaluated in a scale-managed way (no
// overflow for large q*N).
Eigen::VectorXd mode_vector(const WalkSpec& spec, const Mode& mode);

double mode_energy(const Mode& mode);

// ||H v - E v|| for a reported mode.
double mode_residual(const WalkSpec& spec, const Mode& mode);

// Normalized ground-or-excited eigenvector amplitudes at sites 0 and N.
std::pair<double, double> endpoint_amplitudes(const WalkSpec& spec,
                                              int mode_index,
                                              double tol = 1e-10);

// Count of bottom-branch hyperbolic modes in a report (the paper's case
// table: 2 if min(L,R) > 1, 1 if exactly one loop exceeds 1, else 0).
int hyperbolic_count(const SpectralReport& report);

// Paper's case-table prediction for the spec.
int case_table_hyperbolic_count(const WalkSpec& spec);

struct BiasedWalk {
  Eigen::MatrixXd matrix;         // sum_x (B|x> - |x+1>)(B<x| - <x+1|)
  Eigen::VectorXd ground_state;   // amplitudes proportional to B^x
};

// Clock biased towards the right end by B > 1; frustration-free with the
// exponential ground state.  Equals (1+B^2) I + B H^{(1/B,B)} exactly.
BiasedWalk biased_walk(int n_links, double bias);

}  // namespace clockforge::walk
