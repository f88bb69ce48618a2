#include "clockforge/multicog.hpp"

#include <algorithm>
#include <cmath>

#include "clockforge/eigs.hpp"

namespace clockforge::multicog {

namespace {

constexpr std::int64_t kMaxTritDim = 1594323;  // 3^13

std::int64_t pow3(int n) {
  std::int64_t p = 1;
  while (n-- > 0) p *= 3;
  return p;
}

int trit(std::int64_t index, int n_sites, int site) {
  return static_cast<int>((index / pow3(n_sites - site)) % 3);
}

std::int64_t set_trit(std::int64_t index, int n_sites, int site, int value) {
  const std::int64_t place = pow3(n_sites - site);
  const int old = trit(index, n_sites, site);
  return index + (value - old) * place;
}

std::string trit_label(std::int64_t index, int n_sites) {
  std::string s(n_sites, '0');
  for (int x = 1; x <= n_sites; ++x) s[x - 1] = char('0' + trit(index, n_sites, x));
  return s;
}

void check_dim(int n_sites) {
  if (n_sites < 2) throw domain_error("qutrit chain needs >= 2 sites");
  if (pow3(n_sites) > kMaxTritDim)
    throw size_error("qutrit operator exceeds the 3^13 full-space cap");
}

// Per-cog legal configuration at progression position p in 0..2L-1: the
// first revolution rides 1..1 2 0..0, the second 0..0 2 1..1.
std::vector<int> cog_state(int length, int p) {
  std::vector<int> trits(length, 0);
  if (p < length) {
    for (int x = 0; x < p; ++x) trits[x] = 1;
    trits[p] = 2;
  } else {
    const int t = p - length;
    for (int x = t + 1; x < length; ++x) trits[x] = 1;
    trits[t] = 2;
  }
  return trits;
}

}  // namespace

std::vector<Term> surfer_line_terms(int length) {
  std::vector<Term> terms;
  terms.push_back({{1}, {0}, {0}});
  terms.push_back({{length}, {1}, {1}});
  for (int i = 1; i < length; ++i) {
    for (auto pat : {std::pair<int, int>{0, 1}, {1, 0}, {2, 1}, {0, 2}, {2, 2}})
      terms.push_back({{i, i + 1}, {pat.first, pat.second},
                       {pat.first, pat.second}});
    terms.push_back({{i, i + 1}, {2, 0}, {1, 2}});
  }
  return terms;
}

std::vector<Term> surfer_cycle_terms(int length) {
  std::vector<Term> terms;
  for (auto pat : {std::pair<int, int>{0, 0}, {1, 1}, {2, 2}})
    terms.push_back({{length, 1}, {pat.first, pat.second},
                     {pat.first, pat.second}});
  for (int i = 1; i < length; ++i) {
    for (auto pat : {std::pair<int, int>{0, 1}, {1, 0}, {2, 2}})
      terms.push_back({{i, i + 1}, {pat.first, pat.second},
                       {pat.first, pat.second}});
    terms.push_back({{i, i + 1}, {1, 2}, {2, 0}});
    terms.push_back({{i, i + 1}, {0, 2}, {2, 1}});
  }
  terms.push_back({{length, 1}, {1, 2}, {2, 1}});
  terms.push_back({{length, 1}, {0, 2}, {2, 0}});
  return terms;
}

std::vector<Term> multicog_terms(int n_cogs, int length, Topology topology) {
  if (n_cogs < 1) throw domain_error("multicog needs >= 1 cog");
  std::vector<Term> terms;
  auto site = [length](int cog, int x) { return cog * length + x; };

  // Checks on every cog: proper walls plus the non-equal seam.
  for (int cog = 0; cog < n_cogs; ++cog) {
    for (auto pat : {std::pair<int, int>{0, 0}, {1, 1}, {2, 2}})
      terms.push_back({{site(cog, length), site(cog, 1)},
                       {pat.first, pat.second},
                       {pat.first, pat.second}});
    for (int i = 1; i < length; ++i)
      for (auto pat : {std::pair<int, int>{0, 1}, {1, 0}, {2, 2}})
        terms.push_back({{site(cog, i), site(cog, i + 1)},
                         {pat.first, pat.second},
                         {pat.first, pat.second}});
  }

  // Free dynamics of the first cog, except its end-of-second-revolution
  // wrap: that one only fires inside a synchronization term.
  for (int i = 1; i < length; ++i) {
    terms.push_back({{site(0, i), site(0, i + 1)}, {2, 0}, {1, 2}});
    terms.push_back({{site(0, i), site(0, i + 1)}, {2, 1}, {0, 2}});
  }
  terms.push_back({{site(0, length), site(0, 1)}, {2, 1}, {1, 2}});

  // Synchronized advances: cog j moves one step exactly when every earlier
  // cog sits at its wrap moment, and they all wrap together.
  for (int j = 1; j < n_cogs; ++j) {
    std::vector<int> gate_sites;
    std::vector<int> gate_bra, gate_ket;
    for (int k = 0; k < j; ++k) {
      gate_sites.push_back(site(k, length));
      gate_sites.push_back(site(k, 1));
      gate_bra.push_back(2);
      gate_bra.push_back(0);
      gate_ket.push_back(0);
      gate_ket.push_back(2);
    }
    auto gated = [&](std::vector<int> extra_sites, std::vector<int> bra2,
                     std::vector<int> ket2) {
      Term t;
      t.sites = gate_sites;
      t.bra = gate_bra;
      t.ket = gate_ket;
      t.sites.insert(t.sites.end(), extra_sites.begin(), extra_sites.end());
      t.bra.insert(t.bra.end(), bra2.begin(), bra2.end());
      t.ket.insert(t.ket.end(), ket2.begin(), ket2.end());
      terms.push_back(std::move(t));
    };
    for (int i = 1; i < length; ++i) {
      gated({site(j, i), site(j, i + 1)}, {2, 0}, {1, 2});
      gated({site(j, i), site(j, i + 1)}, {2, 1}, {0, 2});
    }
    gated({site(j, length), site(j, 1)}, {2, 1}, {1, 2});
  }
  if (topology == Topology::cycle) {
    Term wrap;
    for (int k = 0; k < n_cogs; ++k) {
      wrap.sites.push_back(site(k, length));
      wrap.sites.push_back(site(k, 1));
      wrap.bra.push_back(2);
      wrap.bra.push_back(0);
      wrap.ket.push_back(0);
      wrap.ket.push_back(2);
    }
    terms.push_back(std::move(wrap));
  }
  return terms;
}

std::string term_audit(const std::vector<Term>& terms) {
  std::string out;
  for (const auto& t : terms) {
    out += "1 : ";
    for (int v : t.bra) out += char('0' + v);
    out += " -> ";
    for (int v : t.ket) out += char('0' + v);
    out += " @";
    for (int s : t.sites) {
      out += ' ';
      out += std::to_string(s);
    }
    out += '\n';
  }
  return out;
}

spins::LabeledSparseOperator build_from_terms(int n_sites,
                                              const std::vector<Term>& terms) {
  check_dim(n_sites);
  const std::int64_t dim = pow3(n_sites);
  std::vector<std::string> labels(dim);
  for (std::int64_t i = 0; i < dim; ++i) labels[i] = trit_label(i, n_sites);
  spins::OperatorBuilder b(dim, std::move(labels));

  for (std::int64_t i = 0; i < dim; ++i) {
    for (const auto& t : terms) {
      bool is_bra = true, is_ket = true;
      for (std::size_t k = 0; k < t.sites.size(); ++k) {
        const int v = trit(i, n_sites, t.sites[k]);
        is_bra = is_bra && (v == t.bra[k]);
        is_ket = is_ket && (v == t.ket[k]);
      }
      if (t.bra == t.ket) {
        if (is_bra) b.add(i, i, 1.0);
        continue;
      }
      if (is_bra) {
        b.add(i, i, 1.0);
        std::int64_t j = i;
        for (std::size_t k = 0; k < t.sites.size(); ++k)
          j = set_trit(j, n_sites, t.sites[k], t.ket[k]);
        b.add(std::min(i, j), std::max(i, j), -1.0);
      } else if (is_ket) {
        b.add(i, i, 1.0);
      }
    }
  }
  return b.finish();
}

spins::LabeledSparseOperator build_surfer_line(int length) {
  return build_from_terms(length, surfer_line_terms(length));
}

spins::LabeledSparseOperator build_surfer_cycle(int length) {
  return build_from_terms(length, surfer_cycle_terms(length));
}

spins::LabeledSparseOperator build_surfer_cycle_22(int length) {
  std::vector<Term> terms;
  terms.push_back({{length, 1}, {2, 2}, {2, 2}});
  for (int i = 1; i < length; ++i) terms.push_back({{i, i + 1}, {2, 2}, {2, 2}});
  return build_from_terms(length, terms);
}

spins::LabeledSparseOperator build_surfer_cycle_rest(int length) {
  std::vector<Term> terms;
  for (const auto& t : surfer_cycle_terms(length))
    if (!(t.bra == t.ket && t.bra == std::vector<int>{2, 2}))
      terms.push_back(t);
  return build_from_terms(length, terms);
}

std::vector<std::int64_t> surfer_line_legal_indices(int length) {
  std::vector<std::int64_t> out;
  for (int t = 1; t <= length; ++t) {
    std::int64_t idx = 0;
    for (int x = 1; x <= length; ++x) {
      const int v = (x < t) ? 1 : (x == t ? 2 : 0);
      idx = idx * 3 + v;
    }
    out.push_back(idx);
  }
  return out;
}

std::vector<std::int64_t> surfer_cycle_legal_indices(int length) {
  std::vector<std::int64_t> out;
  for (int p = 0; p < 2 * length; ++p) {
    const auto trits = cog_state(length, p);
    std::int64_t idx = 0;
    for (int v : trits) idx = idx * 3 + v;
    out.push_back(idx);
  }
  return out;
}

MulticogClock build_multicog(int n_cogs, int length, Topology topology) {
  if (length < 3) throw domain_error("multicog cogs need length >= 3");
  check_dim(n_cogs * length);
  MulticogClock clock;
  clock.terms = multicog_terms(n_cogs, length, topology);
  clock.op = build_from_terms(n_cogs * length, clock.terms);
  clock.n_steps = 1;
  for (int k = 0; k < n_cogs; ++k) clock.n_steps *= 2 * length;
  return clock;
}

std::vector<std::int64_t> multicog_legal_indices(int n_cogs, int length) {
  const int sites = n_cogs * length;
  std::int64_t total = 1;
  for (int k = 0; k < n_cogs; ++k) total *= 2 * length;
  std::vector<std::int64_t> out;
  out.reserve(total);
  for (std::int64_t pos = 0; pos < total; ++pos) {
    std::int64_t rem = pos, idx = 0;
    std::vector<int> comp(sites, 0);
    for (int cog = 0; cog < n_cogs; ++cog) {
      const int p = static_cast<int>(rem % (2 * length));
      rem /= 2 * length;
      const auto trits = cog_state(length, p);
      for (int x = 0; x < length; ++x) comp[cog * length + x] = trits[x];
    }
    for (int v : comp) idx = idx * 3 + v;
    out.push_back(idx);
  }
  return out;
}

long long label_surfer_count(const std::string& label) {
  long long n = 0;
  for (char ch : label) n += (ch == '2');
  return n;
}

std::int64_t count_no22_on_cycle(int length, int k) {
  std::int64_t count = 0;
  for (std::int64_t mask = 0; mask < (std::int64_t{1} << length); ++mask) {
    if (__builtin_popcountll(mask) != k) continue;
    bool ok = true;
    for (int i = 0; i < length && ok; ++i)
      if ((mask >> i & 1) && (mask >> ((i + 1) % length) & 1)) ok = false;
    if (ok) ++count;
  }
  return count;
}

SectorBound sector_angle_bound(int length, int k) {
  if (k % 2 == 0 || k <= 1 || k > length)
    throw domain_error("sector_angle_bound: k must be odd with 1 < k <= L");
  check_dim(length);

  SectorBound out;
  out.arrangements_all = 1;
  for (int i = 0; i < k; ++i)
    out.arrangements_all = out.arrangements_all * (length - i) / (i + 1);
  out.arrangements_no22 = count_no22_on_cycle(length, k);
  out.cos_theta =
      std::sqrt(double(out.arrangements_no22) / double(out.arrangements_all));
  out.sin2_half_theta = 0.5 * (1.0 - out.cos_theta);

  const auto full = build_surfer_cycle(length);
  const auto check22 = build_surfer_cycle_22(length);
  const auto rest = build_surfer_cycle_rest(length);
  const auto sectors =
      spins::sector_decompose(full, label_surfer_count, "surfer_count");
  const auto& idx = sectors.sectors.at(k);

  auto gap_reference = [&](const spins::LabeledSparseOperator& op) {
    const Eigen::MatrixXd block = spins::restrict_to(op, idx).matrix;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(block,
                                                     Eigen::EigenvaluesOnly);
    const double lo = s.eigenvalues()[0];
    if (lo > 1e-10) return lo;  // no kernel in the sector
    for (Eigen::Index i = 1; i < s.eigenvalues().size(); ++i)
      if (s.eigenvalues()[i] > 1e-10) return s.eigenvalues()[i];
    // The restriction vanishes (e.g. all-surfer sector under the dynamics):
    // it imposes no constraint, the other term carries the bound.
    return std::numeric_limits<double>::infinity();
  };
  out.lambda_ref_22 = gap_reference(check22);
  out.lambda_ref_rest = gap_reference(rest);
  out.bound = std::min(out.lambda_ref_22, out.lambda_ref_rest) *
              out.sin2_half_theta;

  const Eigen::MatrixXd sector_full = spins::restrict_to(full, idx).matrix;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(sector_full,
                                                   Eigen::EigenvaluesOnly);
  out.sector_minimum = s.eigenvalues()[0];
  return out;
}

}  // namespace clockforge::multicog
