#pragma once

#include <string>
#include <vector>

#include "clockforge/sparse_op.hpp"

namespace clockforge::spins {

enum class ClockVariant { hopping, laplacian };

// Binary label of basis index i on a chain of `length` qubits, site 1 first
// (most significant bit first).
std::string qubit_label(std::int64_t index, int length);

// Number of 1 bits in a label.
long long label_popcount(const std::string& label);

// Number of occurrences of a two-character pattern in a label.
long long label_pattern_count(const std::string& label,
                              const std::string& pattern);

// Pulse clock: a single excitation hopping on a qubit chain.
//   hopping:   -sum_x (|01><10| + |10><01|)_{x,x+1}
//   laplacian:  sum_x (|01>-|10>)(<01|-<10|)_{x,x+1}
LabeledSparseOperator build_pulse_clock(int chain_length, ClockVariant variant);

// Basis indices of the single-excitation states, ordered by excitation
// position 1..chain_length.
std::vector<std::int64_t> single_excitation_indices(int chain_length);

// Domain-wall (unary) clock on a chain of N+2 qubits.
//   hopping:   -sum_{x=1}^{N} (|110><100| + |100><110|)_{x,x+1,x+2}
//   laplacian:  sum_{x=1}^{N} (|100>-|110>)(<100|-<110|)_{x,x+1,x+2}
// with_clock_check additionally adds
//   sum_{x=1}^{N+1} |01><01|_{x,x+1} + |0><0|_1 + |1><1|_{N+2}.
LabeledSparseOperator build_domain_wall_clock(int n_steps, ClockVariant variant,
                                              bool with_clock_check);

// The clock-check term alone (diagonal).
LabeledSparseOperator domain_wall_clock_check(int n_steps);

// Basis indices of the good single-domain-wall states |1..1 0..0> with
// x = 1..N+1 leading ones, in clock order.
std::vector<std::int64_t> domain_wall_good_indices(int n_steps);

}  // namespace clockforge::spins
