#include "clockforge/idling.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "clockforge/eigs.hpp"

namespace clockforge::idling {

namespace {

// Legal state: wall position m in 1..N+1+C on the top row, plus the free
// idling bits i_1..i_r with r = max(0, m-(N+1)).
struct Vertex {
  int m;
  std::uint32_t idle;  // bit (j-1) holds i_j
};

int free_idlers(const IdlingSpec& spec, int m) {
  return std::max(0, m - (spec.n_steps + 1));
}

std::string vertex_label(const IdlingSpec& spec, const Vertex& v) {
  const int n = spec.n_steps, c = spec.n_extra;
  std::string s;
  s.reserve(n + 1 + 2 * c + 2);
  for (int x = 1; x <= n + 1; ++x) s += (x <= v.m) ? '1' : '0';
  s += '|';
  for (int j = 1; j <= c; ++j) s += (n + 1 + j <= v.m) ? '1' : '0';
  s += '|';
  for (int j = 1; j <= c; ++j) s += ((v.idle >> (j - 1)) & 1) ? '1' : '0';
  return s;
}

std::vector<Vertex> legal_vertices(const IdlingSpec& spec) {
  std::vector<Vertex> out;
  const int n = spec.n_steps, c = spec.n_extra;
  for (int m = 1; m <= n + 1; ++m) out.push_back({m, 0});
  for (int r = 1; r <= c; ++r) {
    // Lexicographic on the idling string: i_1 is the most significant.
    for (std::uint32_t v = 0; v < (1u << r); ++v) {
      std::uint32_t bits = 0;
      for (int j = 1; j <= r; ++j)
        if ((v >> (r - j)) & 1) bits |= 1u << (j - 1);
      out.push_back({n + 1 + r, bits});
    }
  }
  return out;
}

struct Layout {
  int n, c;
  int top_sites() const { return n + 1 + c; }
  int qubits() const { return top_sites() + c; }
  int top(std::int64_t idx, int x) const {
    return static_cast<int>((idx >> (qubits() - x)) & 1);
  }
  int idle(std::int64_t idx, int j) const {
    return static_cast<int>((idx >> (c - j)) & 1);
  }
  std::int64_t flip_top(std::int64_t idx, int x) const {
    return idx ^ (std::int64_t{1} << (qubits() - x));
  }
  std::int64_t flip_idle(std::int64_t idx, int j) const {
    return idx ^ (std::int64_t{1} << (c - j));
  }
  std::string label(std::int64_t idx) const {
    std::string s;
    s.reserve(qubits() + 2);
    for (int x = 1; x <= n + 1; ++x) s += top(idx, x) ? '1' : '0';
    s += '|';
    for (int x = n + 2; x <= top_sites(); ++x) s += top(idx, x) ? '1' : '0';
    s += '|';
    for (int j = 1; j <= c; ++j) s += idle(idx, j) ? '1' : '0';
    return s;
  }
};

const char* kind_name(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::unary: return "unary";
    case EdgeKind::extra: return "extra";
    default: return "idling";
  }
}

// The canonical path as an explicit vertex sequence (ids in graph order),
// for s < t in the lexicographic vertex order.
std::vector<std::int64_t> canonical_path(
    const IdlingSpec& spec, const std::vector<Vertex>& verts,
    const std::map<std::string, std::int64_t>& id_of, std::int64_t s,
    std::int64_t t) {
  const int n = spec.n_steps, c = spec.n_extra;
  std::vector<std::int64_t> path{s};
  Vertex cur = verts[s];
  const Vertex target = verts[t];
  auto push = [&](const Vertex& v) {
    path.push_back(id_of.at(vertex_label(spec, v)));
  };

  // Unary segment: walk the wall towards the target (or towards the bridge
  // state 1..1|0..0|0..0 when the target sits in the idling part).
  const int unary_goal = std::min(target.m, n + 1);
  while (cur.m < unary_goal) {
    ++cur.m;
    push(cur);
  }
  // Repair extra and idling strings left to right.  With s < t the extra
  // string only ever grows, so every wall move here is upward.
  for (int k = 1; k <= c; ++k) {
    const bool ek_cur = (n + 1 + k) <= cur.m;
    const bool ek_t = (n + 1 + k) <= target.m;
    if (ek_cur != ek_t) {
      cur.m += ek_t ? 1 : -1;
      push(cur);
    }
    const std::uint32_t mask = 1u << (k - 1);
    if ((cur.idle & mask) != (target.idle & mask)) {
      cur.idle ^= mask;
      push(cur);
    }
  }
  return path;
}

struct PathTally {
  std::vector<std::int64_t> load;  // per graph edge, both orientations
  int max_length = 0;
};

PathTally tally_paths(const IdlingSpec& spec, const LegalStateGraph& graph) {
  const auto verts = legal_vertices(spec);
  const std::int64_t dim = static_cast<std::int64_t>(verts.size());
  if (dim * dim > 100000000)
    throw size_error("canonical_paths: too many state pairs");

  std::map<std::string, std::int64_t> id_of;
  for (std::int64_t i = 0; i < dim; ++i) id_of[graph.vertices[i]] = i;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> edge_index;
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    auto [u, v, kind] = graph.edges[e];
    if (u > v) std::swap(u, v);
    edge_index[{u, v}] = static_cast<std::int64_t>(e);
  }

  PathTally tally;
  tally.load.assign(graph.edges.size(), 0);
  for (std::int64_t s = 0; s < dim; ++s) {
    for (std::int64_t t = s + 1; t < dim; ++t) {
      const auto path = canonical_path(spec, verts, id_of, s, t);
      tally.max_length =
          std::max<int>(tally.max_length, static_cast<int>(path.size()) - 1);
      for (std::size_t step = 0; step + 1 < path.size(); ++step) {
        std::int64_t u = path[step], v = path[step + 1];
        if (u > v) std::swap(u, v);
        const auto it = edge_index.find({u, v});
        if (it == edge_index.end())
          throw path_invalid("canonical path (" + graph.vertices[s] + " -> " +
                             graph.vertices[t] + ") step " +
                             std::to_string(step) + " is not a graph edge");
        tally.load[it->second] += 2;  // both orientations use the same path
      }
    }
  }
  return tally;
}

}  // namespace

void validate(const IdlingSpec& spec) {
  if (spec.n_steps < 1) throw domain_error("IdlingSpec: N must be >= 1");
  if (spec.n_extra < 1 || spec.n_extra > 30)
    throw domain_error("IdlingSpec: C must be in 1..30");
  const std::int64_t states =
      spec.n_steps + 1 + amplification(spec);
  if (states > 1000000)
    throw size_error("IdlingSpec: legal state count exceeds 10^6");
}

std::int64_t amplification(const IdlingSpec& spec) {
  return (std::int64_t{1} << (spec.n_extra + 1)) - 2;
}

LegalStateGraph enumerate_legal_states(const IdlingSpec& spec) {
  validate(spec);
  const int n = spec.n_steps, c = spec.n_extra;
  const auto verts = legal_vertices(spec);

  LegalStateGraph g;
  g.vertices.reserve(verts.size());
  std::map<std::string, std::int64_t> id_of;
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(verts.size()); ++i) {
    g.vertices.push_back(vertex_label(spec, verts[i]));
    id_of[g.vertices.back()] = i;
  }

  auto add_edge = [&](const Vertex& a, const Vertex& b, EdgeKind kind) {
    g.edges.push_back({id_of.at(vertex_label(spec, a)),
                       id_of.at(vertex_label(spec, b)), kind});
  };
  for (const auto& v : verts) {
    // Unary wall moves m -> m+1 for m <= N (3-local domain-wall terms).
    if (v.m <= n) add_edge(v, {v.m + 1, v.idle}, EdgeKind::unary);
    // Extra-qubit flip e_j with j = m-N, gated on i_j = 0.
    if (v.m >= n + 1 && v.m <= n + c) {
      const int j = v.m - n;
      if (((v.idle >> (j - 1)) & 1) == 0)
        add_edge(v, {v.m + 1, v.idle}, EdgeKind::extra);
    }
    // Idling flips i_j (from 0 to 1) wherever the extra qubit above is on.
    for (int j = 1; j <= free_idlers(spec, v.m); ++j)
      if (((v.idle >> (j - 1)) & 1) == 0)
        add_edge(v, {v.m, v.idle | (1u << (j - 1))}, EdgeKind::idling);
  }

  g.degree.assign(verts.size(), 0);
  for (const auto& e : g.edges) {
    ++g.degree[e.u];
    ++g.degree[e.v];
  }
  return g;
}

spins::LabeledSparseOperator build_idling_hamiltonian(const IdlingSpec& spec,
                                                      BuildMode mode) {
  validate(spec);
  const int n = spec.n_steps, c = spec.n_extra;

  if (mode == BuildMode::legal_graph) {
    const LegalStateGraph g = enumerate_legal_states(spec);
    spins::OperatorBuilder b(g.vertices.size(), g.vertices);
    for (const auto& e : g.edges) {
      b.add(e.u, e.u, 1.0);
      b.add(e.v, e.v, 1.0);
      b.add(e.u, e.v, -1.0);
    }
    return b.finish();
  }

  const Layout lay{n, c};
  if (lay.qubits() > 20)
    throw size_error("build_idling_hamiltonian: full space needs > 20 qubits");
  const std::int64_t dim = std::int64_t{1} << lay.qubits();
  require_dimension(dim, "build_idling_hamiltonian");

  std::vector<std::string> labels(dim);
  for (std::int64_t i = 0; i < dim; ++i) labels[i] = lay.label(i);
  spins::OperatorBuilder b(dim, std::move(labels));

  const int top = lay.top_sites();
  for (std::int64_t i = 0; i < dim; ++i) {
    // Clock check: wall form on the top row, idlers only under live extras.
    double check = 0;
    check += (lay.top(i, 1) == 0);
    for (int k = 1; k < top; ++k)
      check += (lay.top(i, k) == 0 && lay.top(i, k + 1) == 1);
    for (int j = 1; j <= c; ++j)
      check += (lay.top(i, n + 1 + j) == 0 && lay.idle(i, j) == 1);
    if (check != 0) b.add(i, i, check);

    // Domain-wall moves on the original clock (3-local Laplacian terms).
    for (int j = 1; j <= n; ++j) {
      if (lay.top(i, j) != 1 || lay.top(i, j + 2) != 0) continue;
      b.add(i, i, 1.0);
      const std::int64_t k = lay.flip_top(i, j + 1);
      if (i < k) b.add(i, k, -1.0);
    }
    // Extra-qubit moves, gated on the matching idler being off.
    for (int j = 1; j < c; ++j) {
      if (lay.idle(i, j) != 0) continue;
      if (lay.top(i, n + j) != 1 || lay.top(i, n + j + 2) != 0) continue;
      b.add(i, i, 1.0);
      const std::int64_t k = lay.flip_top(i, n + j + 1);
      if (i < k) b.add(i, k, -1.0);
    }
    if (lay.idle(i, c) == 0 && lay.top(i, n + c) == 1) {
      b.add(i, i, 1.0);
      const std::int64_t k = lay.flip_top(i, n + 1 + c);
      if (i < k) b.add(i, k, -1.0);
    }
    // Freewheeling idler flips under a live extra qubit.
    for (int j = 1; j <= c; ++j) {
      if (lay.top(i, n + 1 + j) != 1) continue;
      b.add(i, i, 1.0);
      const std::int64_t k = lay.flip_idle(i, j);
      if (i < k) b.add(i, k, -1.0);
    }
  }
  return b.finish();
}

Overlap done_overlap(const IdlingSpec& spec) {
  validate(spec);
  const std::int64_t a = amplification(spec);
  std::int64_t num = 1 + a;
  std::int64_t den = spec.n_steps + 1 + a;
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

Eigen::MatrixXd stochastic_matrix(const IdlingSpec& spec) {
  const auto h = build_idling_hamiltonian(spec, BuildMode::legal_graph);
  const double scale = 1.0 / (2.0 * (spec.n_extra + 1));
  return Eigen::MatrixXd::Identity(h.dimension, h.dimension) -
         scale * spins::to_dense(h);
}

std::vector<std::int64_t> edge_loads(const IdlingSpec& spec,
                                     const LegalStateGraph& graph) {
  validate(spec);
  return tally_paths(spec, graph).load;
}

CanonicalPathReport canonical_paths(const IdlingSpec& spec) {
  validate(spec);
  const LegalStateGraph graph = enumerate_legal_states(spec);
  const PathTally tally = tally_paths(spec, graph);
  const std::int64_t dim = static_cast<std::int64_t>(graph.vertices.size());

  CanonicalPathReport report;
  report.max_path_length = tally.max_length;
  report.max_edge_load =
      *std::max_element(tally.load.begin(), tally.load.end());
  const double scale = 2.0 * (spec.n_extra + 1);
  report.congestion = scale * double(report.max_edge_load) / double(dim);
  report.gap_lower_bound =
      scale / (report.congestion * report.max_path_length);
  report.numeric_gap = gap_check(spec).numeric_gap;
  return report;
}

GapCheck gap_check(const IdlingSpec& spec) {
  const auto h = build_idling_hamiltonian(spec, BuildMode::legal_graph);
  GapCheck out;
  const auto pairs = eigs::lowest(h, 2, 1e-10, 10000);
  out.numeric_gap = pairs.values[1];
  const double a = double(amplification(spec));
  const double z = (a + 1.0) / spec.n_steps;
  out.analytic_lower_bound =
      (z + 1.0) / (8.0 * z * spec.n_steps * spec.n_steps);
  return out;
}

std::string graph_to_text(const LegalStateGraph& graph) {
  std::string out;
  for (const auto& e : graph.edges) {
    out += graph.vertices[e.u];
    out += ' ';
    out += graph.vertices[e.v];
    out += ' ';
    out += kind_name(e.kind);
    out += '\n';
  }
  return out;
}

nlohmann::json report_to_json(const IdlingSpec& spec,
                              const CanonicalPathReport& report) {
  const Overlap ov = done_overlap(spec);
  nlohmann::json j;
  j["n_states"] = spec.n_steps + 1 + amplification(spec);
  j["overlap_num"] = ov.num;
  j["overlap_den"] = ov.den;
  j["l"] = report.max_path_length;
  j["rho"] = report.congestion;
  j["bound"] = report.gap_lower_bound;
  j["numeric_gap"] = report.numeric_gap;
  return j;
}

}  // namespace clockforge::idling
