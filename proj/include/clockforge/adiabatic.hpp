#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "clockforge/common.hpp"

namespace clockforge::adiabatic {

// Symmetric three-way schedule in the reduced (N+1)-dimensional basis, where
// the clock-check and initialization terms vanish.  The ramps carry the
// propagation term from 0 to full strength over T1, the middle section flips
// the endpoint term via a monotone s(t) with s(T1)=0, s(T1+T2)=1.
struct ScheduleSpec {
  int n_links;       // N
  double t1 = 1.0;   // ramp duration
  double t2 = 1.0;   // middle duration
  // Optional custom monotone s over the middle section, as a piecewise-linear
  // table of (fraction of T2, s) pairs from (0,0) to (1,1); empty = linear.
  std::vector<std::pair<double, double>> s_table;
};

void validate(const ScheduleSpec& spec);

// Schedule parameter s(t) for t in the middle section.
double schedule_s(const ScheduleSpec& spec, double t);

// Section 1:  H_ends + (t/T1) H_prop
// Section 2:  (1-2s) H_ends + H_prop
// Section 3: -H_ends + ((2T1+T2-t)/T1) H_prop
// with H_ends = -|0><0| + |N><N| and H_prop = 2I + H^{(1,1)}.
Eigen::MatrixXd reduced_hamiltonian(const ScheduleSpec& spec, double t);

struct GapPoint {
  double t;
  double gap;
  double ground_energy;
};

std::vector<GapPoint> gap_profile(const ScheduleSpec& spec, int grid_points);

// Schroedinger integration from |0> over the whole schedule; returns the
// final |<N|psi>|^2.  Adaptive Dormand-Prince with the given relative
// tolerance; throws integrator_tolerance if step control collapses.
double integrate_schedule(const ScheduleSpec& spec, double rel_tol = 1e-9);

}  // namespace clockforge::adiabatic
