#include "clockforge/feynman.hpp"

#include <cmath>

namespace clockforge::feynman {

namespace {

using Complex = std::complex<double>;

Eigen::MatrixXcd named_gate(const std::string& name) {
  Eigen::MatrixXcd m;
  const Complex i(0, 1);
  if (name == "I") {
    m = Eigen::MatrixXcd::Identity(2, 2);
  } else if (name == "X") {
    m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 1) = m(1, 0) = 1;
  } else if (name == "Y") {
    m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 1) = -i;
    m(1, 0) = i;
  } else if (name == "Z") {
    m = Eigen::MatrixXcd::Identity(2, 2);
    m(1, 1) = -1;
  } else if (name == "H") {
    m.resize(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
  } else if (name == "CNOT") {
    m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = m(1, 1) = 1;
    m(2, 3) = m(3, 2) = 1;
  } else {
    throw domain_error("unknown gate name: " + name);
  }
  return m;
}

int gate_qubits(const Gate& g) {
  if (g.matrix.rows() == 2 && g.matrix.cols() == 2) return 1;
  if (g.matrix.rows() == 4 && g.matrix.cols() == 4) return 2;
  throw domain_error("gate matrices must be 2x2 or 4x4");
}

// Applies the gate to a data-register vector in place.
void apply_gate(const Gate& g, int d, Eigen::VectorXcd& state, bool adjoint) {
  const int nq = gate_qubits(g);
  Eigen::MatrixXcd u = g.matrix;
  if (adjoint) u = g.matrix.adjoint();
  const std::int64_t dim = std::int64_t{1} << d;
  if (nq == 1) {
    const int bit = d - 1 - g.targets[0];
    const std::int64_t mask = std::int64_t{1} << bit;
    for (std::int64_t b = 0; b < dim; ++b) {
      if (b & mask) continue;
      const Complex a0 = state[b], a1 = state[b | mask];
      state[b] = u(0, 0) * a0 + u(0, 1) * a1;
      state[b | mask] = u(1, 0) * a0 + u(1, 1) * a1;
    }
  } else {
    const int bit0 = d - 1 - g.targets[0];  // first target = high gate bit
    const int bit1 = d - 1 - g.targets[1];
    const std::int64_t m0 = std::int64_t{1} << bit0;
    const std::int64_t m1 = std::int64_t{1} << bit1;
    for (std::int64_t b = 0; b < dim; ++b) {
      if ((b & m0) || (b & m1)) continue;
      std::int64_t idx[4] = {b, b | m1, b | m0, b | m0 | m1};
      Complex a[4];
      for (int k = 0; k < 4; ++k) a[k] = state[idx[k]];
      for (int r = 0; r < 4; ++r) {
        Complex s = 0;
        for (int c = 0; c < 4; ++c) s += u(r, c) * a[c];
        state[idx[r]] = s;
      }
    }
  }
}

struct Eigensystem {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

Eigensystem diagonalize(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw convergence_failure("feynman: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

void validate(const GateSequence& circuit) {
  if (circuit.data_qubits < 1 || circuit.data_qubits > 6)
    throw domain_error("GateSequence: data_qubits must be in 1..6");
  if (circuit.gates.empty())
    throw domain_error("GateSequence: at least one gate required");
  for (const auto& g : circuit.gates) {
    const int nq = gate_qubits(g);
    if (static_cast<int>(g.targets.size()) != nq)
      throw domain_error("GateSequence: target count does not match gate size");
    for (int t : g.targets)
      if (t < 0 || t >= circuit.data_qubits)
        throw domain_error("GateSequence: target out of range");
    if (nq == 2 && g.targets[0] == g.targets[1])
      throw domain_error("GateSequence: two-qubit gate needs distinct targets");
    const Eigen::MatrixXcd err =
        g.matrix.adjoint() * g.matrix -
        Eigen::MatrixXcd::Identity(g.matrix.rows(), g.matrix.cols());
    if (err.cwiseAbs().maxCoeff() > 1e-12)
      throw domain_error("GateSequence: gate is not unitary to 1e-12");
  }
}

GateSequence circuit_from_json(const nlohmann::json& j) {
  GateSequence c;
  c.data_qubits = j.at("qubits").get<int>();
  for (const auto& gj : j.at("gates")) {
    Gate g;
    g.targets = gj.at("targets").get<std::vector<int>>();
    if (gj.contains("name")) {
      g.matrix = named_gate(gj.at("name").get<std::string>());
    } else {
      const auto& rows = gj.at("matrix");
      const auto n = rows.size();
      g.matrix.resize(n, n);
      for (size_t r = 0; r < n; ++r) {
        if (rows[r].size() != n)
          throw domain_error("circuit_from_json: matrix must be square");
        for (size_t col = 0; col < n; ++col) {
          const auto& cell = rows[r][col];
          g.matrix(r, col) =
              Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
      }
    }
    c.gates.push_back(std::move(g));
  }
  validate(c);
  return c;
}

Eigen::MatrixXcd gate_matrix(const Gate& gate, int data_qubits) {
  const std::int64_t dim = std::int64_t{1} << data_qubits;
  Eigen::MatrixXcd u(dim, dim);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
  for (std::int64_t c = 0; c < dim; ++c) {
    e.setZero();
    e[c] = 1;
    apply_gate(gate, data_qubits, e, false);
    u.col(c) = e;
  }
  return u;
}

Eigen::VectorXcd partial_product_state(const GateSequence& circuit,
                                       const std::vector<int>& input_bits,
                                       int t) {
  validate(circuit);
  const int d = circuit.data_qubits;
  if (static_cast<int>(input_bits.size()) != d)
    throw domain_error("input length must equal data_qubits");
  if (t < 0 || t > static_cast<int>(circuit.gates.size()))
    throw index_error("partial_product_state: t out of range");
  std::int64_t idx = 0;
  for (int q = 0; q < d; ++q) {
    if (input_bits[q] != 0 && input_bits[q] != 1)
      throw domain_error("input bits must be 0/1");
    idx = (idx << 1) | input_bits[q];
  }
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(std::int64_t{1} << d);
  state[idx] = 1;
  for (int k = 0; k < t; ++k) apply_gate(circuit.gates[k], d, state, false);
  return state;
}

Eigen::MatrixXcd build_feynman(const GateSequence& circuit, int padding) {
  validate(circuit);
  if (padding < 0) throw domain_error("padding must be >= 0");
  const int d = circuit.data_qubits;
  const int n = static_cast<int>(circuit.gates.size());
  const int steps = n + padding;
  const std::int64_t ddim = std::int64_t{1} << d;
  const std::int64_t dim = (steps + 1) * ddim;
  require_dimension(dim, "build_feynman");

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(ddim, ddim);
  for (int t = 1; t <= steps; ++t) {
    const Eigen::MatrixXcd u =
        (t <= n) ? gate_matrix(circuit.gates[t - 1], d) : id;
    h.block(t * ddim, (t - 1) * ddim, ddim, ddim) += u;
    h.block((t - 1) * ddim, t * ddim, ddim, ddim) += u.adjoint();
  }
  return h;
}

Eigen::MatrixXcd build_prop(const GateSequence& circuit, int padding) {
  validate(circuit);
  if (padding < 0) throw domain_error("padding must be >= 0");
  const int d = circuit.data_qubits;
  const int n = static_cast<int>(circuit.gates.size());
  const int steps = n + padding;
  const std::int64_t ddim = std::int64_t{1} << d;
  const std::int64_t dim = (steps + 1) * ddim;
  require_dimension(dim, "build_prop");

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(ddim, ddim);
  for (int t = 1; t <= steps; ++t) {
    const Eigen::MatrixXcd u =
        (t <= n) ? gate_matrix(circuit.gates[t - 1], d) : id;
    h.block((t - 1) * ddim, (t - 1) * ddim, ddim, ddim) += id;
    h.block(t * ddim, t * ddim, ddim, ddim) += id;
    h.block(t * ddim, (t - 1) * ddim, ddim, ddim) -= u;
    h.block((t - 1) * ddim, t * ddim, ddim, ddim) -= u.adjoint();
  }
  return h;
}

Eigen::VectorXcd history_state(const GateSequence& circuit,
                               const std::vector<int>& input_bits,
                               int padding) {
  validate(circuit);
  if (padding < 0) throw domain_error("padding must be >= 0");
  const int d = circuit.data_qubits;
  const int n = static_cast<int>(circuit.gates.size());
  const int steps = n + padding;
  const std::int64_t ddim = std::int64_t{1} << d;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero((steps + 1) * ddim);
  Eigen::VectorXcd phi = partial_product_state(circuit, input_bits, 0);
  const double amp = 1.0 / std::sqrt(double(steps + 1));
  psi.segment(0, ddim) = amp * phi;
  for (int t = 1; t <= steps; ++t) {
    if (t <= n) apply_gate(circuit.gates[t - 1], d, phi, false);
    psi.segment(t * ddim, ddim) = amp * phi;
  }
  return psi;
}

double cesaro_success(const GateSequence& circuit,
                      const std::vector<int>& input_bits, int padding,
                      double t_max, int samples) {
  if (!(t_max > 0)) throw domain_error("cesaro_success: t_max must be > 0");
  if (samples < 1) throw domain_error("cesaro_success: samples must be >= 1");
  const Eigen::MatrixXcd h = build_feynman(circuit, padding);
  const auto [values, vectors] = diagonalize(h);
  const int d = circuit.data_qubits;
  const std::int64_t ddim = std::int64_t{1} << d;
  const std::int64_t dim = h.rows();
  const std::int64_t final_offset = dim - ddim;  // clock = N + A block

  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
  psi0.segment(0, ddim) = partial_product_state(circuit, input_bits, 0);
  const Eigen::VectorXcd coeff = vectors.adjoint() * psi0;

  double acc = 0;
  for (int s = 1; s <= samples; ++s) {
    const double t = t_max * s / samples;
    Eigen::VectorXcd phase(coeff.size());
    for (Eigen::Index k = 0; k < coeff.size(); ++k)
      phase[k] = std::polar(1.0, -values[k] * t) * coeff[k];
    const Eigen::VectorXcd psi_final =
        vectors.middleRows(final_offset, ddim) * phase;
    acc += psi_final.squaredNorm();
  }
  return acc / samples;
}

double cesaro_limit(const GateSequence& circuit,
                    const std::vector<int>& input_bits, int padding,
                    bool done_from_n) {
  const Eigen::MatrixXcd h = build_feynman(circuit, padding);
  const auto [values, vectors] = diagonalize(h);
  const int d = circuit.data_qubits;
  const int n = static_cast<int>(circuit.gates.size());
  const std::int64_t ddim = std::int64_t{1} << d;
  const std::int64_t dim = h.rows();
  const std::int64_t from = done_from_n ? n * ddim : dim - ddim;
  const std::int64_t count = dim - from;

  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
  psi0.segment(0, ddim) = partial_product_state(circuit, input_bits, 0);
  const Eigen::VectorXcd coeff = vectors.adjoint() * psi0;

  // Group degenerate eigenvalues; the time average keeps only the diagonal
  // blocks  sum_E || Pi_done P_E psi_0 ||^2.
  double total = 0;
  Eigen::Index k = 0;
  while (k < values.size()) {
    Eigen::Index k2 = k;
    while (k2 + 1 < values.size() && values[k2 + 1] - values[k] < 1e-9) ++k2;
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(count);
    for (Eigen::Index j = k; j <= k2; ++j)
      w += coeff[j] * vectors.col(j).segment(from, count);
    total += w.squaredNorm();
    k = k2 + 1;
  }
  return total;
}

}  // namespace clockforge::feynman
