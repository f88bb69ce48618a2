#pragma once

#include <Eigen/Dense>
#include <vector>

#include <json.hpp>

#include "clockforge/feynman.hpp"

namespace clockforge::kitaev {

// Toy verifier: circuit U on d data qubits, ancillas required |0> at the
// start, acceptance read off `out_index` at the end, soundness/completeness
// slack epsilon.
struct VerifierInstance {
  feynman::GateSequence circuit;
  std::vector<int> ancilla_indices;
  int out_index = 0;
  double epsilon = 0.0;
};

void validate(const VerifierInstance& instance);

// JSON format: {circuit, ancillas, out, epsilon}.
VerifierInstance instance_from_json(const nlohmann::json& j);

struct Projectors {
  Eigen::MatrixXcd p;  // I - |0..0><0..0| on the ancillas
  Eigen::MatrixXcd q;  // U^dag |0><0|_out U  (projects onto reject)
};

Projectors build_projectors(const VerifierInstance& instance);

// Jordan's lemma block for the pair (P,Q).  1D blocks are simultaneous
// eigenvectors with case tags per (P,Q) eigenvalues
// (0,0)->1, (0,1)->2, (1,0)->3, (1,1)->4.  2D blocks carry the ker-P vector
// |v>, its range-P partner |v_perp>, and p_v with <v|Q|v> = 1 - p_v; the
// phase of |v_perp> makes <v_perp|Q|v> = sqrt(p_v(1-p_v)) real nonnegative.
struct JordanBlock {
  int dim = 1;
  int one_d_case = 0;  // 1..4 when dim == 1
  double p_v = 0;
  Eigen::VectorXcd v;
  Eigen::VectorXcd v_perp;            // dim == 2 only
  bool degeneracy_warning = false;    // near-degenerate 2D pair demoted
};

std::vector<JordanBlock> jordan_decompose(const Eigen::MatrixXcd& p,
                                          const Eigen::MatrixXcd& q,
                                          double tol = 1e-9);

// Reassemble P and Q from the block list (test oracle support).
Projectors reassemble(const std::vector<JordanBlock>& blocks,
                      Eigen::Index dimension);

// Clock-extended Hamiltonian of one block:
//   1D: (N+1)-dim  2I + H^{(1,1)} plus endpoint projectors per case tag;
//   2D: 2(N+1)-dim pair of walks with the H_init projector on |v_perp>_0 and
//       the Q block (|v><v| minus the Pauli perturbation) on the clock-N pair.
Eigen::MatrixXd block_hamiltonian(const JordanBlock& block, int n_steps,
                                  bool allow_case1 = true);

// Exact maximum acceptance probability over properly initialized witnesses,
// with the optimizing witness state.
std::pair<double, Eigen::VectorXcd> max_acceptance(
    const VerifierInstance& instance);

// Minimum block ground energy for a verified no-instance.
double no_case_bound(const VerifierInstance& instance, int n_steps);

struct CrossCheckReport {
  std::vector<JordanBlock> blocks;
  Eigen::VectorXd full_spectrum;          // from the joint clock (x) data H
  Eigen::VectorXd block_spectrum;         // multiset union over blocks
  double max_spectrum_diff = 0;
  bool full_spectrum_match = false;       // at 1e-8
  double no_bound = 0;                    // min block ground energy
  double yes_bound = 0;                   // history-state Rayleigh quotient
  bool is_no_instance = false;
  bool is_yes_instance = false;
};

// Builds H_prop + H_init' + H_out on the abstract clock (x) data space,
// diagonalizes it, and checks that the block spectra reproduce it.
CrossCheckReport full_cross_check(const VerifierInstance& instance,
                                  int n_steps);

nlohmann::json report_to_json(const CrossCheckReport& report);

}  // namespace clockforge::kitaev
