#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>

#include "clockforge/fitting.hpp"
#include "clockforge/idling.hpp"

using namespace clockforge;
using namespace clockforge::idling;

namespace {

// Independent rule-application oracle: legal basis states of the full space
// are those with zero clock-check diagonal; edges are the off-diagonal
// entries of the full-space Hamiltonian between them.
struct FullSpaceView {
  std::vector<std::int64_t> legal;          // full-space indices, label order
  std::vector<std::string> labels;          // their labels
  Eigen::MatrixXd restricted;               // full H restricted to legal
};

FullSpaceView brute_force(const IdlingSpec& spec) {
  auto op = build_idling_hamiltonian(spec, BuildMode::full_space);
  auto graph = enumerate_legal_states(spec);
  std::map<std::string, std::int64_t> index_by_label;
  for (std::int64_t i = 0; i < op.dimension; ++i)
    index_by_label[op.labels[i]] = i;

  FullSpaceView view;
  for (const auto& label : graph.vertices) {
    view.labels.push_back(label);
    view.legal.push_back(index_by_label.at(label));
  }
  view.restricted = spins::restrict_to(op, view.legal).matrix;
  return view;
}

}  // namespace

TEST_CASE("legal state enumeration") {
  SUBCASE("N=4, C=3 has 19 vertices and max degree C+1") {
    auto g = enumerate_legal_states({4, 3});
    CHECK(g.vertices.size() == 19);
    CHECK(*std::max_element(g.degree.begin(), g.degree.end()) <= 4);
    CHECK(std::is_sorted(g.vertices.begin(), g.vertices.end()));
  }
  SUBCASE("N=2, C=1 vertex and edge census") {
    auto g = enumerate_legal_states({2, 1});
    CHECK(g.vertices.size() == 5);
    int unary = 0, extra = 0, idlers = 0;
    for (const auto& e : g.edges) {
      if (e.kind == EdgeKind::unary) ++unary;
      if (e.kind == EdgeKind::extra) ++extra;
      if (e.kind == EdgeKind::idling) ++idlers;
    }
    CHECK(unary == 2);
    CHECK(extra == 1);
    CHECK(idlers == 1);
  }
  SUBCASE("brute-force rule application reproduces the graph") {
    for (auto [n, c] : {std::pair<int, int>{2, 1}, {3, 2}, {4, 3}}) {
      IdlingSpec spec{n, c};
      auto g = enumerate_legal_states(spec);
      auto view = brute_force(spec);
      REQUIRE(view.labels == g.vertices);  // same states, same order

      // Same Laplacian: degree diagonal, -1 per rule-induced edge.
      auto legal =
          spins::to_dense(build_idling_hamiltonian(spec, BuildMode::legal_graph));
      CHECK((view.restricted - legal).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("full-space spectrum") {
  SUBCASE("unique zero mode is uniform over the 5 legal states (N=2, C=1)") {
    IdlingSpec spec{2, 1};
    auto op = build_idling_hamiltonian(spec, BuildMode::full_space);
    REQUIRE(op.dimension == 32);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(spins::to_dense(op));
    CHECK(std::abs(s.eigenvalues()[0]) < 1e-12);
    CHECK(s.eigenvalues()[1] > 1e-3);
    auto view = brute_force(spec);
    double overlap = 0;
    for (auto idx : view.legal) overlap += s.eigenvectors()(idx, 0);
    CHECK(std::abs(std::abs(overlap) / std::sqrt(5.0) - 1.0) < 1e-12);
  }
  SUBCASE("N=4, C=1 full space has 128 dimensions and a uniform kernel") {
    IdlingSpec spec{4, 1};
    auto op = build_idling_hamiltonian(spec, BuildMode::full_space);
    REQUIRE(op.dimension == 128);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(spins::to_dense(op));
    CHECK(std::abs(s.eigenvalues()[0]) < 1e-12);
    CHECK(s.eigenvalues()[1] > 1e-3);
  }
  SUBCASE("illegal states carry at least unit check energy") {
    IdlingSpec spec{2, 1};
    auto op = build_idling_hamiltonian(spec, BuildMode::full_space);
    auto dense = spins::to_dense(op);
    auto graph = enumerate_legal_states(spec);
    for (std::int64_t i = 0; i < op.dimension; ++i) {
      const bool legal = std::find(graph.vertices.begin(),
                                   graph.vertices.end(),
                                   op.labels[i]) != graph.vertices.end();
      if (!legal) CHECK(dense(i, i) >= 1.0);
    }
  }
  SUBCASE("interior unary vertex has graph degree 2") {
    auto legal = build_idling_hamiltonian({4, 3}, BuildMode::legal_graph);
    auto dense = spins::to_dense(legal);
    CHECK(dense(1, 1) == 2.0);  // second wall position on the line
    CHECK(dense(2, 2) == 2.0);
  }
  SUBCASE("frustration freeness on the legal graph") {
    auto legal = build_idling_hamiltonian({6, 3}, BuildMode::legal_graph);
    Eigen::VectorXd uniform =
        Eigen::VectorXd::Constant(legal.dimension,
                                  1.0 / std::sqrt(double(legal.dimension)));
    CHECK(spins::apply(legal, uniform).norm() < 1e-12);
  }
}

TEST_CASE("done overlap") {
  auto ov = done_overlap({4, 3});
  CHECK(ov.num == 15);
  CHECK(ov.den == 19);

  auto small = done_overlap({1, 1});
  CHECK(small.num == 3);
  CHECK(small.den == 4);

  for (int n = 4; n <= 64; ++n) {
    const int c = static_cast<int>(std::ceil(std::log2((n + 2) / 2.0)));
    auto o = done_overlap({n, std::max(1, c)});
    CHECK(2 * o.num >= o.den);  // overlap >= 1/2
  }
}

TEST_CASE("stochastic matrix") {
  IdlingSpec spec{4, 3};
  auto p = stochastic_matrix(spec);
  const double step = 1.0 / (2.0 * (spec.n_extra + 1));

  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    CHECK(std::abs(p.row(r).sum() - 1.0) < 1e-12);
    CHECK(p(r, r) >= 0.5);
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      if (r == c) continue;
      const bool zero = p(r, c) == 0.0;
      const bool hop = std::abs(p(r, c) - step) < 1e-15;
      CHECK((zero || hop));
    }
  }
  // Uniform distribution is a left fixed point; symmetry gives reversibility.
  Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(p.rows(), 1.0 / p.rows());
  CHECK((pi * p - pi).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((p - p.transpose()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("canonical paths at N=4, C=3") {
  IdlingSpec spec{4, 3};
  auto graph = enumerate_legal_states(spec);
  auto loads = edge_loads(spec, graph);
  auto report = canonical_paths(spec);

  CHECK(report.max_path_length == 4 + 2 * 3);  // N + 2C

  // Exact unary-edge load formula 2(a-1)(N+1+A-(a-1)).
  const std::int64_t dim = 19;
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    if (graph.edges[e].kind != EdgeKind::unary) continue;
    const std::int64_t a = graph.edges[e].v + 1;  // wall flips at position a
    CHECK(loads[e] == 2 * (a - 1) * (dim - (a - 1)));
  }
  // Loosened bound 4N(A+1) holds in the paper's regime A > N.
  const std::int64_t a_amp = amplification(spec);
  REQUIRE(a_amp > spec.n_steps);
  for (auto l : loads) CHECK(l <= 4 * spec.n_steps * (a_amp + 1));

  // The congestion bound really bounds the numeric gap.
  CHECK(report.gap_lower_bound <= report.numeric_gap);

  auto gc = gap_check(spec);
  CHECK(gc.numeric_gap >= gc.analytic_lower_bound);
  const double z = (double(a_amp) + 1.0) / spec.n_steps;
  CHECK(gc.analytic_lower_bound ==
        doctest::Approx((z + 1) / (8 * z * 16)).epsilon(1e-12));
}

TEST_CASE("canonical-path bound holds across specs") {
  for (auto [n, c] : {std::pair<int, int>{8, 2}, {16, 4}, {12, 1}, {6, 5}}) {
    auto report = canonical_paths({n, c});
    CHECK(report.gap_lower_bound <= report.numeric_gap);
    CHECK(report.max_path_length <= n + 2 * c);
  }
}

TEST_CASE("spectral relation between H|legal and P") {
  IdlingSpec spec{6, 2};
  auto p = stochastic_matrix(spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ps(p, Eigen::EigenvaluesOnly);
  const double lambda2 = ps.eigenvalues()[p.rows() - 2];
  auto gc = gap_check(spec);
  CHECK(std::abs(gc.numeric_gap -
                 2.0 * (spec.n_extra + 1) * (1.0 - lambda2)) < 1e-10);
}

TEST_CASE("gap scaling") {
  // The N^-2 law needs N large enough that the A extra states stop bending
  // the effective length (at N=8..64 with C=1 the slope is still -1.74).
  SUBCASE("C = ceil(log2 N)") {
    std::vector<std::pair<double, double>> pts;
    for (int n : {32, 64, 128, 256}) {
      const int c = static_cast<int>(std::ceil(std::log2(double(n))));
      pts.emplace_back(n, gap_check({n, c}).numeric_gap);
    }
    auto f = fit::fit_exponent(pts);
    CHECK(std::abs(f.exponent + 2.0) < 0.15);
  }
  SUBCASE("fixed C = 1") {
    std::vector<std::pair<double, double>> pts;
    for (int n : {32, 64, 128, 256})
      pts.emplace_back(n, gap_check({n, 1}).numeric_gap);
    auto f = fit::fit_exponent(pts);
    CHECK(std::abs(f.exponent + 2.0) < 0.15);
  }
}

TEST_CASE("graph export format") {
  auto g = enumerate_legal_states({2, 1});
  const std::string text = graph_to_text(g);
  CHECK(text.find("100|0|0 110|0|0 unary") != std::string::npos);
  CHECK(text.find("111|0|0 111|1|0 extra") != std::string::npos);
  CHECK(text.find("111|1|0 111|1|1 idling") != std::string::npos);
}

TEST_CASE("report json shape") {
  IdlingSpec spec{4, 3};
  auto j = report_to_json(spec, canonical_paths(spec));
  CHECK(j["n_states"] == 19);
  CHECK(j["overlap_num"] == 15);
  CHECK(j["overlap_den"] == 19);
  CHECK(j["l"] == 10);
  CHECK(j["bound"].get<double>() <= j["numeric_gap"].get<double>());
}

TEST_CASE("size guards") {
  CHECK_THROWS_AS(validate(IdlingSpec{1, 25}), size_error);
  CHECK_THROWS_AS(build_idling_hamiltonian({16, 4}, BuildMode::full_space),
                  size_error);
}
