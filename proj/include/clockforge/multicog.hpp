#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clockforge/sparse_op.hpp"

namespace clockforge::multicog {

enum class Topology { line, cycle };

// One projector-style term on qutrit sites: (|bra>-|ket>)(<bra|-<ket|) for a
// transition, or |bra><bra| when bra == ket (a check).
struct Term {
  std::vector<int> sites;  // 1-based global qutrit sites
  std::vector<int> bra;
  std::vector<int> ket;
};

// Term lists, generated programmatically from the rewriting rules.
std::vector<Term> surfer_line_terms(int length);
std::vector<Term> surfer_cycle_terms(int length);
std::vector<Term> multicog_terms(int n_cogs, int length, Topology topology);

// Audit export, one line "1 : bra -> ket @ sites".
std::string term_audit(const std::vector<Term>& terms);

// Assembles the sum of the projector terms on 3^{n_sites} dimensions with
// trit-string labels.
spins::LabeledSparseOperator build_from_terms(int n_sites,
                                              const std::vector<Term>& terms);

// Qutrit surfer on a line of length L: checks plus right-riding dynamics.
spins::LabeledSparseOperator build_surfer_line(int length);

// Qutrit surfer on a cycle: both wall types plus the seam dynamics.
spins::LabeledSparseOperator build_surfer_cycle(int length);

// The cycle Hamiltonian split for the geometric lemma: the 22-collision
// checks alone, and everything else.
spins::LabeledSparseOperator build_surfer_cycle_22(int length);
spins::LabeledSparseOperator build_surfer_cycle_rest(int length);

// Basis indices of the legal single-surfer states in progression order
// (L states on the line, 2L around the cycle).
std::vector<std::int64_t> surfer_line_legal_indices(int length);
std::vector<std::int64_t> surfer_cycle_legal_indices(int length);

struct MulticogClock {
  spins::LabeledSparseOperator op;
  std::vector<Term> terms;
  std::int64_t n_steps;  // (2L)^C legal states
};

// C synchronized cogs of length L; the line topology stops the last cog
// after its second revolution, the cycle topology lets it wrap.
MulticogClock build_multicog(int n_cogs, int length, Topology topology);

// Legal composite states in odometer order (cog 1 fastest).
std::vector<std::int64_t> multicog_legal_indices(int n_cogs, int length);

// Number of '2' trits in a label.
long long label_surfer_count(const std::string& label);

// Exact count of k-subsets of the L-cycle with no two cyclically adjacent.
std::int64_t count_no22_on_cycle(int length, int k);

struct SectorBound {
  std::int64_t arrangements_all;   // C(L,k)
  std::int64_t arrangements_no22;  // exact enumeration
  double cos_theta;
  double sin2_half_theta;
  double lambda_ref_22;    // gap reference of the 22 checks in the sector
  double lambda_ref_rest;  // gap reference of the remaining terms
  double bound;            // min of the references times sin^2(theta/2)
  double sector_minimum;   // exact lowest eigenvalue in the sector
};

// Geometric-lemma bound on the k-surfer sector energy of the cycle, k odd.
SectorBound sector_angle_bound(int length, int k);

}  // namespace clockforge::multicog
