#include "clockforge/spin_chains.hpp"

namespace clockforge::spins {

namespace {

// Site x (1-based, leftmost first) lives at bit (length - x).
inline int site_bit(std::int64_t index, int length, int x) {
  return static_cast<int>((index >> (length - x)) & 1);
}

inline std::int64_t flip_site(std::int64_t index, int length, int x) {
  return index ^ (std::int64_t{1} << (length - x));
}

std::vector<std::string> all_labels(int length) {
  const std::int64_t dim = std::int64_t{1} << length;
  std::vector<std::string> labels(dim);
  for (std::int64_t i = 0; i < dim; ++i) labels[i] = qubit_label(i, length);
  return labels;
}

}  // namespace

std::string qubit_label(std::int64_t index, int length) {
  std::string s(length, '0');
  for (int x = 1; x <= length; ++x)
    if (site_bit(index, length, x)) s[x - 1] = '1';
  return s;
}

long long label_popcount(const std::string& label) {
  long long n = 0;
  for (char c : label) n += (c == '1');
  return n;
}

long long label_pattern_count(const std::string& label,
                              const std::string& pattern) {
  if (pattern.size() != 2) throw domain_error("pattern must have length 2");
  long long n = 0;
  for (size_t i = 0; i + 1 < label.size(); ++i)
    n += (label[i] == pattern[0] && label[i + 1] == pattern[1]);
  return n;
}

LabeledSparseOperator build_pulse_clock(int chain_length,
                                        ClockVariant variant) {
  if (chain_length < 2)
    throw domain_error("build_pulse_clock: chain_length must be >= 2");
  const std::int64_t dim = std::int64_t{1} << chain_length;
  require_dimension(dim, "build_pulse_clock");
  OperatorBuilder b(dim, all_labels(chain_length));
  for (std::int64_t i = 0; i < dim; ++i) {
    for (int x = 1; x < chain_length; ++x) {
      const int bx = site_bit(i, chain_length, x);
      const int by = site_bit(i, chain_length, x + 1);
      if (bx == by) continue;
      const std::int64_t j =
          flip_site(flip_site(i, chain_length, x), chain_length, x + 1);
      if (variant == ClockVariant::laplacian) b.add(i, i, 1.0);
      if (i < j) b.add(i, j, -1.0);
    }
  }
  return b.finish();
}

std::vector<std::int64_t> single_excitation_indices(int chain_length) {
  std::vector<std::int64_t> idx;
  idx.reserve(chain_length);
  for (int x = 1; x <= chain_length; ++x)
    idx.push_back(std::int64_t{1} << (chain_length - x));
  return idx;
}

LabeledSparseOperator build_domain_wall_clock(int n_steps, ClockVariant variant,
                                              bool with_clock_check) {
  if (n_steps < 1) throw domain_error("build_domain_wall_clock: N must be >= 1");
  const int length = n_steps + 2;
  const std::int64_t dim = std::int64_t{1} << length;
  require_dimension(dim, "build_domain_wall_clock");
  OperatorBuilder b(dim, all_labels(length));
  for (std::int64_t i = 0; i < dim; ++i) {
    for (int x = 1; x <= n_steps; ++x) {
      // Pattern 1?0 on (x, x+1, x+2); the middle bit flips.
      if (site_bit(i, length, x) != 1) continue;
      if (site_bit(i, length, x + 2) != 0) continue;
      const std::int64_t j = flip_site(i, length, x + 1);
      if (variant == ClockVariant::laplacian) b.add(i, i, 1.0);
      if (i < j) b.add(i, j, -1.0);
    }
    if (with_clock_check) {
      double check = 0;
      for (int x = 1; x <= n_steps + 1; ++x)
        check += (site_bit(i, length, x) == 0 &&
                  site_bit(i, length, x + 1) == 1);
      check += (site_bit(i, length, 1) == 0);
      check += (site_bit(i, length, length) == 1);
      b.add(i, i, check);
    }
  }
  return b.finish();
}

LabeledSparseOperator domain_wall_clock_check(int n_steps) {
  if (n_steps < 1) throw domain_error("domain_wall_clock_check: N must be >= 1");
  const int length = n_steps + 2;
  const std::int64_t dim = std::int64_t{1} << length;
  require_dimension(dim, "domain_wall_clock_check");
  OperatorBuilder b(dim, all_labels(length));
  for (std::int64_t i = 0; i < dim; ++i) {
    double check = 0;
    for (int x = 1; x <= n_steps + 1; ++x)
      check +=
          (site_bit(i, length, x) == 0 && site_bit(i, length, x + 1) == 1);
    check += (site_bit(i, length, 1) == 0);
    check += (site_bit(i, length, length) == 1);
    b.add(i, i, check);
  }
  return b.finish();
}

std::vector<std::int64_t> domain_wall_good_indices(int n_steps) {
  const int length = n_steps + 2;
  std::vector<std::int64_t> idx;
  idx.reserve(n_steps + 1);
  for (int ones = 1; ones <= n_steps + 1; ++ones) {
    const std::int64_t block = (std::int64_t{1} << ones) - 1;
    idx.push_back(block << (length - ones));
  }
  return idx;
}

}  // namespace clockforge::spins
