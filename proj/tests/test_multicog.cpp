#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <numbers>

#include "clockforge/multicog.hpp"
#include "clockforge/walk.hpp"

using namespace clockforge;
using namespace clockforge::multicog;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd path_laplacian(int n_vertices) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_vertices, n_vertices);
  for (int i = 0; i + 1 < n_vertices; ++i) {
    m(i, i) += 1;
    m(i + 1, i + 1) += 1;
    m(i, i + 1) -= 1;
    m(i + 1, i) -= 1;
  }
  return m;
}

Eigen::MatrixXd cycle_laplacian(int n_vertices) {
  Eigen::MatrixXd m = path_laplacian(n_vertices);
  m(0, 0) += 1;
  m(n_vertices - 1, n_vertices - 1) += 1;
  m(0, n_vertices - 1) -= 1;
  m(n_vertices - 1, 0) -= 1;
  return m;
}

}  // namespace

TEST_CASE("surfer line") {
  SUBCASE("check terms alone have an L-dimensional kernel") {
    const int L = 3;
    std::vector<Term> checks;
    for (const auto& t : surfer_line_terms(L))
      if (t.bra == t.ket) checks.push_back(t);
    auto op = build_from_terms(L, checks);
    auto dense = spins::to_dense(op);
    int zeros = 0;
    for (int i = 0; i < 27; ++i)
      if (dense(i, i) == 0) ++zeros;
    CHECK(zeros == 3);
    for (auto idx : surfer_line_legal_indices(L)) CHECK(dense(idx, idx) == 0);
    CHECK(op.labels[surfer_line_legal_indices(L)[0]] == "200");
    CHECK(op.labels[surfer_line_legal_indices(L)[1]] == "120");
    CHECK(op.labels[surfer_line_legal_indices(L)[2]] == "112");
  }

  SUBCASE("legal restriction is the Laplacian walk on L sites") {
    const int L = 5;
    auto op = build_surfer_line(L);
    auto block = spins::restrict_to(op, surfer_line_legal_indices(L));
    CHECK((block.matrix - path_laplacian(L)).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(block.matrix);
    CHECK(s.eigenvalues()[1] - s.eigenvalues()[0] ==
          doctest::Approx(2 - 2 * std::cos(kPi / L)).epsilon(1e-12));
    // Bridged to the abstract walk spectrum.
    auto report = walk::analytic_spectrum({L - 1, 1.0, 1.0});
    CHECK(s.eigenvalues()[1] - s.eigenvalues()[0] ==
          doctest::Approx(report.gap).epsilon(1e-10));
  }

  SUBCASE("dead states carry endpoint energy") {
    auto op = build_surfer_line(4);
    auto dense = spins::to_dense(op);
    const std::int64_t all0 = 0, all1 = 1 * 27 + 1 * 9 + 1 * 3 + 1;
    CHECK(dense(all0, all0) >= 1.0);
    CHECK(dense(all1, all1) >= 1.0);
  }

  SUBCASE("unique uniform ground state") {
    const int L = 5;
    auto op = build_surfer_line(L);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(spins::to_dense(op));
    CHECK(s.eigenvalues()[0] > -1e-12);
    CHECK(std::abs(s.eigenvalues()[0]) < 1e-12);
    CHECK(s.eigenvalues()[1] > 1e-6);
    double overlap = 0;
    for (auto idx : surfer_line_legal_indices(L))
      overlap += s.eigenvectors()(idx, 0);
    CHECK(std::abs(std::abs(overlap) / std::sqrt(double(L)) - 1.0) < 1e-12);
  }
}

TEST_CASE("surfer cycle") {
  SUBCASE("legal restriction is the cycle Laplacian on 2L vertices") {
    const int L = 4;
    auto op = build_surfer_cycle(L);
    auto idx = surfer_cycle_legal_indices(L);
    REQUIRE(idx.size() == 8);
    auto block = spins::restrict_to(op, idx);
    CHECK((block.matrix - cycle_laplacian(8)).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(block.matrix);
    CHECK(s.eigenvalues()[1] - s.eigenvalues()[0] ==
          doctest::Approx(2 - 2 * std::cos(kPi / L)).epsilon(1e-12));
  }

  SUBCASE("unique uniform ground state over the 2L surfer states") {
    const int L = 4;
    auto op = build_surfer_cycle(L);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(spins::to_dense(op));
    CHECK(std::abs(s.eigenvalues()[0]) < 1e-12);
    CHECK(s.eigenvalues()[1] > 1e-6);
    double overlap = 0;
    for (auto idx : surfer_cycle_legal_indices(L))
      overlap += s.eigenvectors()(idx, 0);
    CHECK(std::abs(std::abs(overlap) / std::sqrt(8.0) - 1.0) < 1e-12);
  }

  SUBCASE("even-surfer sectors are gapped away from zero") {
    for (int L : {4, 5}) {
      auto op = build_surfer_cycle(L);
      auto sectors =
          spins::sector_decompose(op, label_surfer_count, "surfer_count");
      for (const auto& [k, idx] : sectors.sectors) {
        if (k % 2 != 0) continue;
        Eigen::MatrixXd block = spins::restrict_to(op, idx).matrix;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(
            block, Eigen::EigenvaluesOnly);
        CHECK(s.eigenvalues()[0] >= 0.1);
      }
    }
  }

  SUBCASE("operators are sums of projector-style PSD terms") {
    for (int L : {3, 4, 5}) {
      auto op = build_surfer_cycle(L);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(spins::to_dense(op),
                                                       Eigen::EigenvaluesOnly);
      CHECK(s.eigenvalues()[0] > -1e-12);
    }
  }
}

TEST_CASE("sector angle bound") {
  SUBCASE("L=5, k=3 has no non-adjacent arrangement") {
    auto b = sector_angle_bound(5, 3);
    CHECK(b.arrangements_all == 10);
    CHECK(b.arrangements_no22 == 0);
    CHECK(b.cos_theta == 0.0);
    CHECK(b.sin2_half_theta == 0.5);
    CHECK(b.sector_minimum > 0.0);
    CHECK(b.sector_minimum >= b.bound);
  }
  SUBCASE("sin^2(theta/2) >= 1/(4(L-1)) for odd k >= 3") {
    for (int L = 4; L <= 8; ++L) {
      for (int k = 3; k <= L; k += 2) {
        auto b = sector_angle_bound(L, k);
        CHECK(b.sin2_half_theta >= 1.0 / (4.0 * (L - 1)));
        CHECK(b.sector_minimum >= b.bound);
      }
    }
  }
  SUBCASE("even k is rejected") {
    CHECK_THROWS_AS(sector_angle_bound(5, 2), domain_error);
    CHECK_THROWS_AS(sector_angle_bound(5, 1), domain_error);
  }
}

TEST_CASE("multicog clock") {
  SUBCASE("C=2, L=3 yields 36 legal states on a line") {
    auto clock = build_multicog(2, 3, Topology::line);
    CHECK(clock.n_steps == 36);
    auto idx = multicog_legal_indices(2, 3);
    REQUIRE(idx.size() == 36);
    auto block = spins::restrict_to(clock.op, idx);
    CHECK((block.matrix - path_laplacian(36)).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(block.matrix);
    CHECK(s.eigenvalues()[1] ==
          doctest::Approx(2 - 2 * std::cos(kPi / 36)).epsilon(1e-10));
    auto report = walk::analytic_spectrum({35, 1.0, 1.0});
    CHECK(s.eigenvalues()[1] - s.eigenvalues()[0] ==
          doctest::Approx(report.gap).epsilon(1e-10));
  }

  SUBCASE("cycle mode closes the composite walk") {
    auto clock = build_multicog(2, 3, Topology::cycle);
    auto idx = multicog_legal_indices(2, 3);
    auto block = spins::restrict_to(clock.op, idx);
    CHECK((block.matrix - cycle_laplacian(36)).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(block.matrix);
    CHECK(s.eigenvalues()[1] ==
          doctest::Approx(2 - 2 * std::cos(2 * kPi / 36)).epsilon(1e-10));
  }

  SUBCASE("unique uniform kernel in the full space") {
    for (auto topo : {Topology::line, Topology::cycle}) {
      auto clock = build_multicog(2, 3, topo);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(
          spins::to_dense(clock.op));
      CHECK(std::abs(s.eigenvalues()[0]) < 1e-12);
      CHECK(s.eigenvalues()[1] > 1e-8);
      double overlap = 0;
      for (auto idx : multicog_legal_indices(2, 3))
        overlap += s.eigenvectors()(idx, 0);
      CHECK(std::abs(std::abs(overlap) / 6.0 - 1.0) < 1e-11);
    }
  }

  SUBCASE("C=1 cycle reduces to the single surfer cycle") {
    auto clock = build_multicog(1, 4, Topology::cycle);
    auto plain = build_surfer_cycle(4);
    CHECK((spins::to_dense(clock.op) - spins::to_dense(plain))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }

  SUBCASE("first cog appears in about 2LC interaction terms") {
    // Transitions only: the checks are static and the paper counts the
    // moves (2L-1 per synchronization level plus the final wrap).
    for (auto [c, l] :
         {std::pair<int, int>{2, 3}, {2, 4}, {2, 5}, {3, 3}}) {
      auto terms = multicog_terms(c, l, Topology::cycle);
      int count = 0;
      for (const auto& t : terms) {
        if (t.bra == t.ket) continue;
        for (int s : t.sites)
          if (s >= 1 && s <= l) {
            ++count;
            break;
          }
      }
      CHECK(count == (2 * l - 1) * c + 1);
      CHECK(std::abs(count - 2 * l * c) <= 2 * c);
    }
  }

  SUBCASE("term audit format") {
    auto terms = surfer_line_terms(3);
    const std::string audit = term_audit(terms);
    CHECK(audit.find("1 : 20 -> 12 @ 1 2") != std::string::npos);
    CHECK(audit.find("1 : 0 -> 0 @ 1") != std::string::npos);
  }
}

TEST_CASE("size caps") {
  CHECK_THROWS_AS(build_surfer_line(14), size_error);
  CHECK_THROWS_AS(build_multicog(3, 5, Topology::line), size_error);
}
