#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "clockforge/sparse_op.hpp"

namespace clockforge::idling {

// Unary clock of N+1 top-row qubits extended by C extra unary qubits and C
// idling qubits; A = 2^{C+1} - 2 extra clock states, z = (A+1)/N.
struct IdlingSpec {
  int n_steps;  // N >= 1
  int n_extra;  // C >= 1
};

void validate(const IdlingSpec& spec);

std::int64_t amplification(const IdlingSpec& spec);  // A = 2^{C+1} - 2

enum class EdgeKind { unary, extra, idling };

struct LegalStateGraph {
  std::vector<std::string> vertices;  // labels "d|e|i"
  struct Edge {
    std::int64_t u;
    std::int64_t v;
    EdgeKind kind;
  };
  std::vector<Edge> edges;
  std::vector<int> degree;
};

// Exact legal-state vertex/edge sets in lexicographic label order, edge kinds
// tagged by the generating Hamiltonian term.
LegalStateGraph enumerate_legal_states(const IdlingSpec& spec);

enum class BuildMode { legal_graph, full_space };

// full_space: all four term groups on 2^{N+1+2C} qubits.
// legal_graph: the graph-Laplacian restriction on the legal states directly.
spins::LabeledSparseOperator build_idling_hamiltonian(const IdlingSpec& spec,
                                                      BuildMode mode);

struct Overlap {
  std::int64_t num;
  std::int64_t den;  // (1+A) / (N+1+A), reduced
};

// <psi| Pi_done |psi> for the amplified history state, exact rationals.
Overlap done_overlap(const IdlingSpec& spec);

// P = I - H|legal / (2(C+1)); row-stochastic, reversible, lazy.
Eigen::MatrixXd stochastic_matrix(const IdlingSpec& spec);

struct CanonicalPathReport {
  int max_path_length = 0;          // l
  std::int64_t max_edge_load = 0;   // over the exact tally
  double congestion = 0;            // rho
  double gap_lower_bound = 0;       // 2(C+1) / (rho l), a bound on gap(H|legal)
  double numeric_gap = 0;
};

// Constructs the explicit canonical path for every ordered pair, validating
// each step against the graph (path_invalid on any miss), tallies exact
// per-edge loads and evaluates the congestion bound.
CanonicalPathReport canonical_paths(const IdlingSpec& spec);

// Exact per-edge loads in graph edge order (test support).
std::vector<std::int64_t> edge_loads(const IdlingSpec& spec,
                                     const LegalStateGraph& graph);

struct GapCheck {
  double numeric_gap = 0;
  double analytic_lower_bound = 0;  // (z+1)/(8 z N^2)
};

GapCheck gap_check(const IdlingSpec& spec);

// Edge-list text export, one line "label_u label_v kind".
std::string graph_to_text(const LegalStateGraph& graph);

nlohmann::json report_to_json(const IdlingSpec& spec,
                              const CanonicalPathReport& report);

}  // namespace clockforge::idling
