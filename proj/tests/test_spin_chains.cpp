#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <numbers>

#include "clockforge/eigs.hpp"
#include "clockforge/spin_chains.hpp"
#include "clockforge/walk.hpp"

using namespace clockforge;
using namespace clockforge::spins;

namespace {

// Independent Pauli-tensor oracle for the spin-chain forms.
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXd two_site_term(int length, int x, const Eigen::MatrixXd& pair) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  int site = 1;
  while (site <= length) {
    if (site == x) {
      out = kron(out, pair);
      site += 2;
    } else {
      out = kron(out, Eigen::MatrixXd::Identity(2, 2));
      site += 1;
    }
  }
  return out;
}

Eigen::MatrixXd xx_plus_yy() {
  // X(x)X + Y(x)Y is real: 2 on the |01><10| swap block.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(1, 2) = m(2, 1) = 2.0;
  return m;
}

Eigen::MatrixXd zz() {
  Eigen::Vector4d d(1, -1, -1, 1);
  return d.asDiagonal();
}

}  // namespace

TEST_CASE("pulse clock transcription and labels") {
  auto op = build_pulse_clock(2, ClockVariant::hopping);
  REQUIRE(op.dimension == 4);
  REQUIRE(op.entries.size() == 1);
  CHECK(op.entries[0].row == 1);  // |01>
  CHECK(op.entries[0].col == 2);  // |10>
  CHECK(op.entries[0].value == -1.0);
  CHECK(op.labels[1] == "01");
  CHECK(op.labels[2] == "10");
}

TEST_CASE("pulse laplacian restricted to one excitation is the line Laplacian") {
  auto op = build_pulse_clock(3, ClockVariant::laplacian);
  auto block = restrict_to(op, single_excitation_indices(3));
  Eigen::MatrixXd expect(3, 3);
  expect << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK((block.matrix - expect).cwiseAbs().maxCoeff() == 0.0);
  CHECK(block.labels[0] == "100");
  CHECK(block.labels[2] == "001");

  // Equivalently 2I + H^{(1,1)} of the abstract walk.
  Eigen::MatrixXd shifted = 2.0 * Eigen::MatrixXd::Identity(3, 3) +
                            walk::build_walk_matrix({2, 1.0, 1.0});
  CHECK((block.matrix - shifted).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pulse hopping equals the abstract walk on the 1-excitation sector") {
  for (int n = 1; n <= 10; ++n) {
    auto op = build_pulse_clock(n + 1, ClockVariant::hopping);
    auto block = restrict_to(op, single_excitation_indices(n + 1));
    auto expect = walk::build_walk_matrix({n, 0.0, 0.0});
    CHECK((block.matrix - expect).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("Pauli-form identities for the pulse operators") {
  for (int len : {2, 3, 6}) {
    const Eigen::Index dim = 1 << len;
    Eigen::MatrixXd xy_sum = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd zz_sum = Eigen::MatrixXd::Zero(dim, dim);
    for (int x = 1; x < len; ++x) {
      xy_sum += two_site_term(len, x, xx_plus_yy());
      zz_sum += two_site_term(len, x, zz());
    }
    auto hop = to_dense(build_pulse_clock(len, ClockVariant::hopping));
    CHECK((hop + 0.5 * xy_sum).cwiseAbs().maxCoeff() < 1e-14);

    auto lap = to_dense(build_pulse_clock(len, ClockVariant::laplacian));
    Eigen::MatrixXd heis =
        0.5 * (len - 1) * Eigen::MatrixXd::Identity(dim, dim) -
        0.5 * (xy_sum + zz_sum);
    CHECK((lap - heis).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("domain-wall clock") {
  SUBCASE("N=1 good-subspace restriction") {
    auto op = build_domain_wall_clock(1, ClockVariant::laplacian, false);
    auto good = domain_wall_good_indices(1);
    REQUIRE(good.size() == 2);
    CHECK(op.labels[good[0]] == "100");
    CHECK(op.labels[good[1]] == "110");
    auto block = restrict_to(op, good);
    Eigen::MatrixXd expect(2, 2);
    expect << 1, -1, -1, 1;
    CHECK((block.matrix - expect).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("illegal states are detected by the clock check") {
    auto check = domain_wall_clock_check(4);
    // |011000> has a bad start; its Rayleigh quotient is the diagonal.
    std::int64_t idx = 0b011000;
    double diag = 0;
    for (const auto& e : check.entries)
      if (e.row == idx && e.col == idx) diag = e.value;
    CHECK(diag >= 1.0);

    // Every state outside the good subspace is caught.
    auto good = domain_wall_good_indices(4);
    std::vector<bool> is_good(check.dimension, false);
    for (auto g : good) is_good[g] = true;
    Eigen::MatrixXd dense = to_dense(check);
    for (std::int64_t i = 0; i < check.dimension; ++i) {
      if (is_good[i])
        CHECK(dense(i, i) == 0.0);
      else
        CHECK(dense(i, i) >= 1.0);
    }
  }

  SUBCASE("laplacian + check is frustration free with the uniform kernel") {
    auto op = build_domain_wall_clock(6, ClockVariant::laplacian, true);
    auto good = domain_wall_good_indices(6);
    REQUIRE(good.size() == 7);
    Eigen::VectorXd uniform = Eigen::VectorXd::Zero(op.dimension);
    for (auto g : good) uniform[g] = 1.0 / std::sqrt(7.0);
    CHECK(apply(op, uniform).norm() < 1e-12);

    auto pairs = eigs::lowest_dense(to_dense(op), 2);
    CHECK(std::abs(pairs.values[0]) < 1e-12);
    // First excitation lives in the good subspace: the Laplacian-walk gap.
    CHECK(pairs.values[1] ==
          doctest::Approx(2 - 2 * std::cos(std::numbers::pi / 7))
              .epsilon(1e-10));
    CHECK(std::abs(uniform.dot(pairs.vectors.col(0))) > 1.0 - 1e-12);
  }

  SUBCASE("good-subspace restriction equals the Laplacian walk") {
    for (int n : {2, 3, 6}) {
      auto op = build_domain_wall_clock(n, ClockVariant::laplacian, false);
      auto block = restrict_to(op, domain_wall_good_indices(n));
      Eigen::MatrixXd expect =
          2.0 * Eigen::MatrixXd::Identity(n + 1, n + 1) +
          walk::build_walk_matrix({n, 1.0, 1.0});
      CHECK((block.matrix - expect).cwiseAbs().maxCoeff() == 0.0);

      auto hop = build_domain_wall_clock(n, ClockVariant::hopping, false);
      auto hop_block = restrict_to(hop, domain_wall_good_indices(n));
      CHECK((hop_block.matrix - walk::build_walk_matrix({n, 0.0, 0.0}))
                .cwiseAbs()
                .maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("sector decomposition") {
  SUBCASE("pulse clock splits by excitation count") {
    auto op = build_pulse_clock(4, ClockVariant::laplacian);
    auto d = sector_decompose(op, label_popcount, "excitation_count");
    REQUIRE(d.sectors.size() == 5);
    const std::vector<size_t> sizes = {1, 4, 6, 4, 1};
    int z = 0;
    for (const auto& [key, idx] : d.sectors) {
      CHECK(key == z);
      CHECK(idx.size() == sizes[z]);
      ++z;
    }
  }

  SUBCASE("domain-wall clock conserves the 01-pattern count") {
    auto op = build_domain_wall_clock(3, ClockVariant::laplacian, true);
    auto d = sector_decompose(
        op, [](const std::string& s) { return label_pattern_count(s, "01"); },
        "domain_wall_count");
    std::size_t total = 0;
    for (const auto& [key, idx] : d.sectors) total += idx.size();
    CHECK(total == static_cast<std::size_t>(op.dimension));
  }

  SUBCASE("an X term is flagged as not conserved") {
    OperatorBuilder b(2, {"0", "1"});
    b.add(0, 1, 1.0);
    auto op = b.finish();
    CHECK_THROWS_AS(sector_decompose(op, label_popcount, "excitation_count"),
                    not_conserved);
  }
}

TEST_CASE("restrict") {
  auto op = build_pulse_clock(5, ClockVariant::laplacian);
  SUBCASE("singleton picks the diagonal") {
    auto block = restrict_to(op, {single_excitation_indices(5)[1]});
    REQUIRE(block.matrix.rows() == 1);
    CHECK(block.matrix(0, 0) == 2.0);
  }
  SUBCASE("1-excitation block matches the endpoint-projector form") {
    auto block = restrict_to(op, single_excitation_indices(5));
    Eigen::MatrixXd expect = 2.0 * Eigen::MatrixXd::Identity(5, 5) +
                             walk::build_walk_matrix({4, 1.0, 1.0});
    CHECK((block.matrix - expect).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("index errors") {
    CHECK_THROWS_AS(restrict_to(op, {Eigen::Index(1) << 40}), index_error);
    CHECK_THROWS_AS(restrict_to(op, {1, 1}), index_error);
  }
}

TEST_CASE("json round trip") {
  auto op = build_pulse_clock(3, ClockVariant::laplacian);
  auto j = to_json(op);
  auto back = operator_from_json(j);
  CHECK(back.dimension == op.dimension);
  CHECK(back.labels == op.labels);
  REQUIRE(back.entries.size() == op.entries.size());
  for (size_t i = 0; i < op.entries.size(); ++i) {
    CHECK(back.entries[i].row == op.entries[i].row);
    CHECK(back.entries[i].col == op.entries[i].col);
    CHECK(back.entries[i].value == op.entries[i].value);
  }
}

TEST_CASE("size cap") {
  CHECK_THROWS_AS(build_pulse_clock(25, ClockVariant::hopping), size_error);
}
