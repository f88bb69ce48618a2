#include "clockforge/pulse_tuning.hpp"
#include <array>
#include <limits>

#include <cmath>
#include <numbers>

#include "clockforge/eigs.hpp"
#include "clockforge/spin_chains.hpp"

namespace clockforge::tuning {

namespace {

// Basis of the z-excitation sector as bit masks in increasing numeric order
// (colex combination rank); site x corresponds to bit N - x.
std::vector<std::uint32_t> sector_masks(int n, int z) {
  std::vector<std::uint32_t> masks;
  masks.reserve(binomial(n, z));
  if (z == 0) {
    masks.push_back(0);
    return masks;
  }
  std::uint32_t m = (1u << z) - 1;
  const std::uint32_t limit = 1u << n;
  while (m < limit) {
    masks.push_back(m);
    // Gosper's hack: next mask with the same popcount.
    const std::uint32_t c = m & -m;
    const std::uint32_t r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
    if (r >= limit) break;
  }
  return masks;
}

const std::uint64_t* binomial_row(int n) {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, 33>, 33> t{};
    for (int i = 0; i < 33; ++i) {
      t[i][0] = 1;
      for (int j = 1; j <= i; ++j)
        t[i][j] = t[i - 1][j - 1] + (j <= i - 1 ? t[i - 1][j] : 0);
    }
    return t;
  }();
  return table[n].data();
}

// Colex rank of a mask among same-popcount masks: sum_i C(p_i, i).
std::int64_t mask_rank(std::uint32_t mask) {
  std::int64_t rank = 0;
  int i = 1;
  while (mask) {
    const int p = __builtin_ctz(mask);
    rank += static_cast<std::int64_t>(binomial_row(p)[i]);
    mask &= mask - 1;
    ++i;
  }
  return rank;
}

int adjacent_pairs(std::uint32_t mask) {
  return __builtin_popcount(mask & (mask >> 1));
}

// Matvec of A (hopping Laplacian) and/or B (11 checks) in the sector basis.
Eigen::VectorXd sector_apply(int n, const std::vector<std::uint32_t>& masks,
                             const Eigen::VectorXd& x, bool with_a,
                             bool with_b) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  for (std::int64_t r = 0; r < x.size(); ++r) {
    const std::uint32_t m = masks[r];
    double diag = 0;
    if (with_b) diag += adjacent_pairs(m);
    if (with_a) {
      for (int b = 0; b + 1 < n; ++b) {
        const std::uint32_t pair = 3u << b;
        const std::uint32_t bits = m & pair;
        if (bits == 0 || bits == pair) continue;
        diag += 1.0;
        const std::uint32_t flipped = m ^ pair;
        y[mask_rank(flipped)] -= x[r];
      }
    }
    y[r] += diag * x[r];
  }
  return y;
}

eigs::EigenPairs sector_lowest(int n, const std::vector<std::uint32_t>& masks,
                               bool with_a, bool with_b, int k, double tol) {
  const auto dim = static_cast<std::int64_t>(masks.size());
  auto matvec = [&](const Eigen::VectorXd& x) {
    return sector_apply(n, masks, x, with_a, with_b);
  };
  if (dim <= 3000) {
    Eigen::MatrixXd dense(dim, dim);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    for (std::int64_t c = 0; c < dim; ++c) {
      e.setZero();
      e[c] = 1;
      dense.col(c) = matvec(e);
    }
    return eigs::lowest_dense(dense, k);
  }
  return eigs::lowest_lanczos(matvec, dim, k, tol);
}

}  // namespace

void validate(const TuningSpec& spec) {
  if (spec.n_sites < 3) throw domain_error("TuningSpec: N must be >= 3");
  if (!(spec.v > 0)) throw domain_error("TuningSpec: V must be positive");
}

spins::LabeledSparseOperator build_tuned(const TuningSpec& spec) {
  validate(spec);
  const int n = spec.n_sites;
  const std::int64_t dim = std::int64_t{1} << n;
  require_dimension(dim, "build_tuned");

  std::vector<std::string> labels(dim);
  for (std::int64_t i = 0; i < dim; ++i)
    labels[i] = spins::qubit_label(i, n);
  spins::OperatorBuilder b(dim, std::move(labels));
  for (std::int64_t i = 0; i < dim; ++i) {
    const auto m = static_cast<std::uint32_t>(i);
    double diag = spec.v * (1.0 - __builtin_popcount(m));
    diag += adjacent_pairs(m);
    for (int bit = 0; bit + 1 < n; ++bit) {
      const std::uint32_t pair = 3u << bit;
      const std::uint32_t bits = m & pair;
      if (bits == 0 || bits == pair) continue;
      diag += 1.0;
      const std::int64_t j = static_cast<std::int64_t>(m ^ pair);
      if (i < j) b.add(i, j, -1.0);
    }
    if (diag != 0) b.add(i, i, diag);
  }
  return b.finish();
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t b = 1;
  for (int i = 0; i < k; ++i) {
    const std::uint64_t next = b * (n - i);
    if (next / (n - i) != b) throw domain_error("binomial: overflow");
    b = next / (i + 1);
  }
  return b;
}

std::uint64_t count_no11(int n_sites, int z) {
  if (z < 0 || z > n_sites) throw domain_error("count_no11: z out of range");
  if (2 * z > n_sites + 1) return 0;
  return binomial(n_sites - z + 1, z);
}

GeometricBound geometric_bound(int n_sites, int z) {
  if (z < 2 || z > n_sites)
    throw domain_error("geometric_bound: z must be in 2..N");
  GeometricBound out;
  const double all = double(binomial(n_sites, z));
  const double no11 = double(count_no11(n_sites, z));
  out.cos_theta = std::sqrt(no11 / all);
  out.sin2_half_theta = 0.5 * (1.0 - out.cos_theta);
  if (out.sin2_half_theta < z / (4.0 * n_sites) - 1e-15)
    throw convergence_failure(
        "geometric_bound: sin^2(theta/2) fell below z/(4N)");
  // A single-state sector (z = N) has no walk excitation; the hopping term
  // vanishes there and only the 11 checks constrain.
  out.lambda_a = (binomial(n_sites, z) < 2)
                     ? std::numeric_limits<double>::infinity()
                     : sector_walk_gap(n_sites, z);
  out.lambda_b = (no11 > 0) ? 1.0 : double(2 * z - n_sites - 1);
  out.bound = std::min(out.lambda_a, out.lambda_b) * out.sin2_half_theta;
  return out;
}

double sector_shifted_minimum(int n_sites, int z) {
  const auto masks = sector_masks(n_sites, z);
  if (masks.size() == 1) return adjacent_pairs(masks[0]);
  return sector_lowest(n_sites, masks, true, true, 1, 1e-9).values[0];
}

double sector_walk_gap(int n_sites, int z) {
  const auto masks = sector_masks(n_sites, z);
  if (masks.size() < 2)
    throw domain_error("sector_walk_gap: sector has no excited state");
  return sector_lowest(n_sites, masks, true, false, 2, 1e-9).values[1];
}

SectorStudy sector_spectrum_study(int n_sites, double v) {
  std::vector<double> shifted(n_sites + 1);
  for (int z = 0; z <= n_sites; ++z)
    shifted[z] = sector_shifted_minimum(n_sites, z);
  return sector_spectrum_study(n_sites, v, shifted);
}

SectorStudy sector_spectrum_study(int n_sites, double v,
                                  const std::vector<double>& shifted_minima) {
  validate({n_sites, v});
  if (static_cast<int>(shifted_minima.size()) != n_sites + 1)
    throw domain_error("sector_spectrum_study: need N+1 shifted minima");

  SectorStudy study;
  study.sector_energy.resize(n_sites + 1);
  for (int z = 0; z <= n_sites; ++z)
    study.sector_energy[z] = shifted_minima[z] - (z - 1) * v;

  study.ground_energy = study.sector_energy[1];

  // Global gap: the z=0 state at V, the first excited walk mode inside z=1,
  // and the other sector minima.
  double gap = std::min(v, sector_walk_gap(n_sites, 1));
  for (int z = 2; z <= n_sites; ++z)
    gap = std::min(gap, study.sector_energy[z]);
  study.gap = gap;

  const auto masks = sector_masks(n_sites, 1);
  const auto pair = sector_lowest(n_sites, masks, true, false, 1, 1e-11);
  double overlap = 0;
  for (Eigen::Index i = 0; i < pair.vectors.rows(); ++i)
    overlap += pair.vectors(i, 0);
  study.ground_overlap = std::abs(overlap) / std::sqrt(double(n_sites));
  return study;
}

}  // namespace clockforge::tuning
