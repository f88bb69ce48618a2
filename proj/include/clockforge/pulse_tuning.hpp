#pragma once

#include <cstdint>
#include <vector>

#include "clockforge/sparse_op.hpp"

namespace clockforge::tuning {

// Tuned pulse clock on a chain of N qubits:
//   H~ = sum_x (|01>-|10>)(<01|-<10|) + V I - V sum_x |1><1|_x
//        + sum_x |11><11|_{x,x+1},
// whose unique zero-energy ground state is the uniform single-excitation
// superposition when V is small enough.
struct TuningSpec {
  int n_sites;  // N >= 3
  double v;     // > 0, default N^-3
};

void validate(const TuningSpec& spec);

spins::LabeledSparseOperator build_tuned(const TuningSpec& spec);

// Number of N-bit strings with z ones and no adjacent pair: C(N-z+1, z).
std::uint64_t count_no11(int n_sites, int z);

// Exact binomial (throws on overflow).
std::uint64_t binomial(int n, int k);

struct GeometricBound {
  double cos_theta = 0;        // sqrt(#no11 / #all)
  double sin2_half_theta = 0;  // (1 - cos theta)/2
  double lambda_a = 0;         // gap of the hopping Laplacian in the sector
  double lambda_b = 0;         // 1, or the 11-count floor when no11 = 0
  double bound = 0;            // min(lambda_a, lambda_b) * sin^2(theta/2)
};

// Geometric-lemma bound on the shifted sector minimum for z >= 2.
GeometricBound geometric_bound(int n_sites, int z);

// Exact lowest eigenvalue of the shifted sector operator A + B (hopping
// Laplacian plus 11 checks); V-independent.
double sector_shifted_minimum(int n_sites, int z);

// Second-lowest eigenvalue of the hopping Laplacian in the z sector.
double sector_walk_gap(int n_sites, int z);

struct SectorStudy {
  std::vector<double> sector_energy;  // E_z, z = 0..N
  double ground_energy = 0;           // lowest overall (the z=1 state)
  double ground_overlap = 0;          // with the uniform single excitation
  double gap = 0;                     // second-lowest energy overall
};

// Per-sector ground energies E_z = lambda_0(A+B)|_z - (z-1)V and the global
// gap of the tuned Hamiltonian.
SectorStudy sector_spectrum_study(int n_sites, double v);

// As above but reusing precomputed shifted minima (V-independent), so
// several V rules can share one sweep.
SectorStudy sector_spectrum_study(int n_sites, double v,
                                  const std::vector<double>& shifted_minima);

}  // namespace clockforge::tuning
