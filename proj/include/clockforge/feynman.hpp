#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "clockforge/common.hpp"

namespace clockforge::feynman {

// One gate of a circuit: a 2x2 or 4x4 unitary with its target qubit(s).
// Qubit 0 is the leftmost (most significant) data qubit.
struct Gate {
  Eigen::MatrixXcd matrix;
  std::vector<int> targets;
};

struct GateSequence {
  int data_qubits = 1;       // d <= 6
  std::vector<Gate> gates;   // N >= 1 entries
};

// Checks qubit count, target ranges and unitarity (U^dag U = I to 1e-12).
void validate(const GateSequence& circuit);

// JSON circuit format: {"qubits": d, "gates": [{"name"|"matrix", "targets"}]}
// with built-in named gates I, X, Y, Z, H, CNOT.  Matrix entries are [re, im]
// pairs in row-major order.
GateSequence circuit_from_json(const nlohmann::json& j);

// Full 2^d matrix of one gate.
Eigen::MatrixXcd gate_matrix(const Gate& gate, int data_qubits);

// Data-register state after the first t gates applied to |input bits>.
Eigen::VectorXcd partial_product_state(const GateSequence& circuit,
                                       const std::vector<int>& input_bits,
                                       int t);

// Feynman Hamiltonian sum_t (|t><t-1| (x) U_t + h.c.) on the joint
// clock (x) data space, with `padding` identity gates appended.  The joint
// index is clock * 2^d + data.
Eigen::MatrixXcd build_feynman(const GateSequence& circuit, int padding = 0);

// Propagation Hamiltonian built from projector terms and the Feynman
// Hamiltonian; positive semidefinite with history-state kernel.
Eigen::MatrixXcd build_prop(const GateSequence& circuit, int padding = 0);

// Uniform superposition over the N+1+A time steps with the correct partial
// products (the data register rides along unchanged for t >= N).
Eigen::VectorXcd history_state(const GateSequence& circuit,
                               const std::vector<int>& input_bits,
                               int padding = 0);

// Average over `samples` equally spaced times t in (0, t_max] of the
// probability of reading clock = N+A (summed over data), evolving
// |0>_clock (x) |input> under the Feynman Hamiltonian.
double cesaro_success(const GateSequence& circuit,
                      const std::vector<int>& input_bits, int padding,
                      double t_max, int samples);

// Exact infinite-time (Cesaro) limit via the eigenprojector sum
// sum_E || Pi_final P_E psi_0 ||^2, degeneracy-aware.
// done_from_n measures clock >= N instead of clock == N+A.
double cesaro_limit(const GateSequence& circuit,
                    const std::vector<int>& input_bits, int padding,
                    bool done_from_n = false);

}  // namespace clockforge::feynman
