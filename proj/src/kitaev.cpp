#include "clockforge/kitaev.hpp"

#include <algorithm>
#include <cmath>

#include "clockforge/walk.hpp"

namespace clockforge::kitaev {

namespace {

using Complex = std::complex<double>;

// Multiply by a phase so the first coordinate above threshold is positive
// real; keeps block bases deterministic across eigensolver runs.
void fix_phase(Eigen::VectorXcd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-9) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      return;
    }
  }
}

Eigen::MatrixXcd circuit_unitary(const feynman::GateSequence& circuit) {
  const std::int64_t dim = std::int64_t{1} << circuit.data_qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& g : circuit.gates)
    u = feynman::gate_matrix(g, circuit.data_qubits) * u;
  return u;
}

void check_projector(const Eigen::MatrixXcd& p, const char* name) {
  const Eigen::MatrixXcd err = p * p - p;
  if (err.cwiseAbs().maxCoeff() > 1e-10)
    throw domain_error(std::string("jordan_decompose: ") + name +
                       " is not idempotent to 1e-10");
  if ((p - p.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw domain_error(std::string("jordan_decompose: ") + name +
                       " is not Hermitian");
}

feynman::GateSequence padded_circuit(const feynman::GateSequence& circuit,
                                     int n_steps) {
  if (n_steps < static_cast<int>(circuit.gates.size()))
    throw domain_error("n_steps must cover the circuit length");
  feynman::GateSequence padded = circuit;
  feynman::Gate id;
  id.matrix = Eigen::MatrixXcd::Identity(2, 2);
  id.targets = {0};
  while (static_cast<int>(padded.gates.size()) < n_steps)
    padded.gates.push_back(id);
  return padded;
}

}  // namespace

void validate(const VerifierInstance& instance) {
  feynman::validate(instance.circuit);
  const int d = instance.circuit.data_qubits;
  if (instance.out_index < 0 || instance.out_index >= d)
    throw domain_error("VerifierInstance: out index out of range");
  for (int a : instance.ancilla_indices)
    if (a < 0 || a >= d)
      throw domain_error("VerifierInstance: ancilla index out of range");
  if (instance.epsilon < 0 || instance.epsilon >= 1)
    throw domain_error("VerifierInstance: epsilon must be in [0, 1)");
}

VerifierInstance instance_from_json(const nlohmann::json& j) {
  VerifierInstance inst;
  inst.circuit = feynman::circuit_from_json(j.at("circuit"));
  inst.ancilla_indices = j.at("ancillas").get<std::vector<int>>();
  inst.out_index = j.at("out").get<int>();
  inst.epsilon = j.at("epsilon").get<double>();
  validate(inst);
  return inst;
}

Projectors build_projectors(const VerifierInstance& instance) {
  validate(instance);
  const int d = instance.circuit.data_qubits;
  const std::int64_t dim = std::int64_t{1} << d;
  if (dim > (std::int64_t{1} << 12))
    throw size_error("build_projectors: 2^d exceeds 2^12");

  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::int64_t b = 0; b < dim; ++b) {
    bool ancillas_clear = true;
    for (int a : instance.ancilla_indices)
      if ((b >> (d - 1 - a)) & 1) ancillas_clear = false;
    if (!ancillas_clear) p(b, b) = 1.0;
  }

  Eigen::MatrixXcd pi_out0 = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::int64_t b = 0; b < dim; ++b)
    if (((b >> (d - 1 - instance.out_index)) & 1) == 0) pi_out0(b, b) = 1.0;
  const Eigen::MatrixXcd u = circuit_unitary(instance.circuit);
  Projectors out;
  out.p = p;
  out.q = u.adjoint() * pi_out0 * u;
  return out;
}

std::vector<JordanBlock> jordan_decompose(const Eigen::MatrixXcd& p,
                                          const Eigen::MatrixXcd& q,
                                          double tol) {
  if (p.rows() != p.cols() || q.rows() != q.cols() || p.rows() != q.rows())
    throw domain_error("jordan_decompose: dimension mismatch");
  check_projector(p, "P");
  check_projector(q, "Q");
  const Eigen::Index dim = p.rows();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ps(p);
  if (ps.info() != Eigen::Success)
    throw convergence_failure("jordan_decompose: P eigensolver failed");
  std::vector<Eigen::Index> ker_idx, range_idx;
  for (Eigen::Index i = 0; i < dim; ++i)
    (ps.eigenvalues()[i] < 0.5 ? ker_idx : range_idx).push_back(i);

  Eigen::MatrixXcd k0(dim, ker_idx.size()), k1(dim, range_idx.size());
  for (size_t i = 0; i < ker_idx.size(); ++i)
    k0.col(i) = ps.eigenvectors().col(ker_idx[i]);
  for (size_t i = 0; i < range_idx.size(); ++i)
    k1.col(i) = ps.eigenvectors().col(range_idx[i]);

  std::vector<JordanBlock> blocks;
  std::vector<Eigen::VectorXcd> used_perp;

  if (k0.cols() > 0) {
    const Eigen::MatrixXcd m0 = k0.adjoint() * q * k0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ms(m0);
    if (ms.info() != Eigen::Success)
      throw convergence_failure("jordan_decompose: ker-P solve failed");
    for (Eigen::Index i = 0; i < m0.rows(); ++i) {
      const double mu = std::clamp(ms.eigenvalues()[i], 0.0, 1.0);
      const double pv = 1.0 - mu;
      Eigen::VectorXcd v = k0 * ms.eigenvectors().col(i);
      fix_phase(v);
      JordanBlock b;
      b.v = v;
      b.p_v = pv;
      if (pv <= tol || pv >= 1.0 - tol) {
        b.dim = 1;
        b.one_d_case = (pv >= 0.5) ? 1 : 2;  // (P,Q) = (0,0) or (0,1)
        b.degeneracy_warning =
            (pv > 1e-13 && pv <= tol) || (pv < 1.0 - 1e-13 && pv >= 1.0 - tol);
        blocks.push_back(std::move(b));
      } else {
        b.dim = 2;
        Eigen::VectorXcd w = q * v - Complex(mu) * v;
        const double s = std::sqrt(pv * (1.0 - pv));
        b.v_perp = w / s;
        b.v_perp.normalize();
        // Phase convention: make <v_perp|Q|v> = s real nonnegative; w/|w|
        // already satisfies it since w = (Q - mu) v.
        blocks.push_back(std::move(b));
        used_perp.push_back(blocks.back().v_perp);
      }
    }
  }

  if (k1.cols() > 0) {
    // Orthogonal complement of the used |v_perp> within range(P).
    Eigen::MatrixXcd rest = k1;
    for (const auto& vp : used_perp) {
      const Eigen::VectorXcd coeff = rest.adjoint() * vp;
      rest -= vp * coeff.adjoint();
    }
    // Orthonormalize and keep the non-null directions.
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(rest);
    Eigen::MatrixXcd qfull = qr.householderQ();
    Eigen::MatrixXcd rmat =
        qr.matrixQR().topRows(rest.cols()).triangularView<Eigen::Upper>();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < rest.cols(); ++i)
      if (std::abs(rmat(i, i)) > 1e-7) keep.push_back(i);
    if (keep.size() + used_perp.size() != static_cast<size_t>(k1.cols()))
      throw convergence_failure(
          "jordan_decompose: range-P complement has unexpected rank");
    if (!keep.empty()) {
      Eigen::MatrixXcd basis(dim, keep.size());
      for (size_t i = 0; i < keep.size(); ++i) basis.col(i) = qfull.col(keep[i]);
      const Eigen::MatrixXcd m1 = basis.adjoint() * q * basis;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ms(m1);
      if (ms.info() != Eigen::Success)
        throw convergence_failure("jordan_decompose: range-P solve failed");
      for (Eigen::Index i = 0; i < m1.rows(); ++i) {
        const double mu = std::clamp(ms.eigenvalues()[i], 0.0, 1.0);
        if (mu > tol && mu < 1.0 - tol)
          throw convergence_failure(
              "jordan_decompose: leftover range-P vector is not a joint "
              "eigenvector");
        JordanBlock b;
        b.dim = 1;
        b.one_d_case = (mu >= 0.5) ? 4 : 3;  // (P,Q) = (1,1) or (1,0)
        b.p_v = 1.0 - mu;
        b.v = basis * ms.eigenvectors().col(i);
        fix_phase(b.v);
        blocks.push_back(std::move(b));
      }
    }
  }
  return blocks;
}

Projectors reassemble(const std::vector<JordanBlock>& blocks,
                      Eigen::Index dimension) {
  Projectors out;
  out.p = Eigen::MatrixXcd::Zero(dimension, dimension);
  out.q = Eigen::MatrixXcd::Zero(dimension, dimension);
  for (const auto& b : blocks) {
    if (b.dim == 1) {
      if (b.one_d_case == 3 || b.one_d_case == 4)
        out.p += b.v * b.v.adjoint();
      if (b.one_d_case == 2 || b.one_d_case == 4)
        out.q += b.v * b.v.adjoint();
      // Demoted near-degenerate blocks carry their residual p_v in case
      // tags only; reassembly treats them as exact projector eigenvectors.
    } else {
      out.p += b.v_perp * b.v_perp.adjoint();
      const double s = std::sqrt(b.p_v * (1.0 - b.p_v));
      out.q += (1.0 - b.p_v) * b.v * b.v.adjoint() +
               b.p_v * b.v_perp * b.v_perp.adjoint() +
               Complex(s) * (b.v * b.v_perp.adjoint() +
                             b.v_perp * b.v.adjoint());
    }
  }
  return out;
}

Eigen::MatrixXd block_hamiltonian(const JordanBlock& block, int n_steps,
                                  bool allow_case1) {
  if (n_steps < 2) throw domain_error("block_hamiltonian: N must be >= 2");
  const int n = n_steps;
  const Eigen::MatrixXd walk_part =
      2.0 * Eigen::MatrixXd::Identity(n + 1, n + 1) +
      walk::build_walk_matrix({n, 1.0, 1.0});
  if (block.dim == 1) {
    Eigen::MatrixXd h = walk_part;
    switch (block.one_d_case) {
      case 1:
        if (!allow_case1)
          throw case1_error(
              "block_hamiltonian: case-1 block (accepted witness) in a "
              "no-instance context");
        break;
      case 2:
        h(n, n) += 1.0;
        break;
      case 3:
        h(0, 0) += 1.0;
        break;
      case 4:
        h(0, 0) += 1.0;
        h(n, n) += 1.0;
        break;
      default:
        throw domain_error("block_hamiltonian: bad 1D case tag");
    }
    return h;
  }
  // 2D block: the |v> chain occupies rows 0..N, the |v_perp> chain rows
  // N+1..2N+1.  H_init projects on |v_perp>_0, H_out applies the Q block on
  // the clock-N pair.
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * (n + 1), 2 * (n + 1));
  h.topLeftCorner(n + 1, n + 1) = walk_part;
  h.bottomRightCorner(n + 1, n + 1) = walk_part;
  h(n + 1, n + 1) += 1.0;  // |v_perp>_0
  const double s = std::sqrt(block.p_v * (1.0 - block.p_v));
  h(n, n) += 1.0 - block.p_v;
  h(2 * n + 1, 2 * n + 1) += block.p_v;
  h(n, 2 * n + 1) += s;
  h(2 * n + 1, n) += s;
  return h;
}

std::pair<double, Eigen::VectorXcd> max_acceptance(
    const VerifierInstance& instance) {
  const Projectors pq = build_projectors(instance);
  const Eigen::Index dim = pq.p.rows();
  const Eigen::MatrixXcd proper = Eigen::MatrixXcd::Identity(dim, dim) - pq.p;
  const Eigen::MatrixXcd accept =
      proper * (Eigen::MatrixXcd::Identity(dim, dim) - pq.q) * proper;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(accept);
  if (s.info() != Eigen::Success)
    throw convergence_failure("max_acceptance: eigensolver failed");
  Eigen::VectorXcd witness = s.eigenvectors().col(dim - 1);
  fix_phase(witness);
  return {s.eigenvalues()[dim - 1], witness};
}

double no_case_bound(const VerifierInstance& instance, int n_steps) {
  const auto [accept, witness] = max_acceptance(instance);
  if (accept > instance.epsilon + 1e-12)
    throw not_no_instance("no_case_bound: max acceptance " +
                          std::to_string(accept) + " exceeds epsilon");
  const Projectors pq = build_projectors(instance);
  double bound = std::numeric_limits<double>::infinity();
  for (const auto& block : jordan_decompose(pq.p, pq.q)) {
    const Eigen::MatrixXd h = block_hamiltonian(block, n_steps, false);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(h, Eigen::EigenvaluesOnly);
    bound = std::min(bound, s.eigenvalues()[0]);
  }
  return bound;
}

CrossCheckReport full_cross_check(const VerifierInstance& instance,
                                  int n_steps) {
  validate(instance);
  const int d = instance.circuit.data_qubits;
  const std::int64_t ddim = std::int64_t{1} << d;
  const std::int64_t dim = (n_steps + 1) * ddim;
  if (dim > (std::int64_t{1} << 16))
    throw size_error("full_cross_check: clock (x) data space exceeds 2^16");

  const auto padded = padded_circuit(instance.circuit, n_steps);
  const Projectors pq = build_projectors(instance);

  Eigen::MatrixXcd h = feynman::build_prop(padded, 0);
  h.topLeftCorner(ddim, ddim) += pq.p;  // H_init' = |0><0|_clock (x) P
  for (std::int64_t b = 0; b < ddim; ++b)
    if (((b >> (d - 1 - instance.out_index)) & 1) == 0)
      h(n_steps * ddim + b, n_steps * ddim + b) += 1.0;  // H_out

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> fs(h);
  if (fs.info() != Eigen::Success)
    throw convergence_failure("full_cross_check: eigensolver failed");

  CrossCheckReport report;
  report.full_spectrum = fs.eigenvalues();
  report.blocks = jordan_decompose(pq.p, pq.q);

  std::vector<double> collected;
  double no_bound = std::numeric_limits<double>::infinity();
  for (const auto& block : report.blocks) {
    const Eigen::MatrixXd bh = block_hamiltonian(block, n_steps);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bs(bh,
                                                      Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < bs.eigenvalues().size(); ++i)
      collected.push_back(bs.eigenvalues()[i]);
    no_bound = std::min(no_bound, bs.eigenvalues()[0]);
  }
  std::sort(collected.begin(), collected.end());
  report.block_spectrum =
      Eigen::Map<Eigen::VectorXd>(collected.data(), collected.size());
  report.no_bound = no_bound;

  report.max_spectrum_diff = 0;
  if (report.block_spectrum.size() == report.full_spectrum.size()) {
    for (Eigen::Index i = 0; i < report.full_spectrum.size(); ++i)
      report.max_spectrum_diff =
          std::max(report.max_spectrum_diff,
                   std::abs(report.block_spectrum[i] - report.full_spectrum[i]));
    report.full_spectrum_match = report.max_spectrum_diff <= 1e-8;
  } else {
    report.max_spectrum_diff = std::numeric_limits<double>::infinity();
  }

  const auto [accept, witness] = max_acceptance(instance);
  report.is_no_instance = accept <= instance.epsilon + 1e-12;
  report.is_yes_instance = accept >= 1.0 - instance.epsilon - 1e-12;
  if (report.is_yes_instance) {
    // History-state Rayleigh quotient of the best witness: only H_out sees
    // it, contributing the reject probability averaged over the clock.
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    Eigen::VectorXcd phi = witness;
    const double amp = 1.0 / std::sqrt(double(n_steps + 1));
    psi.segment(0, ddim) = amp * phi;
    for (int t = 1; t <= n_steps; ++t) {
      phi = feynman::gate_matrix(padded.gates[t - 1], d) * phi;
      psi.segment(t * ddim, ddim) = amp * phi;
    }
    report.yes_bound = std::real(psi.dot(h * psi));
  }
  return report;
}

nlohmann::json report_to_json(const CrossCheckReport& report) {
  nlohmann::json j;
  auto blocks = nlohmann::json::array();
  for (const auto& b : report.blocks) {
    nlohmann::json bj;
    bj["dim"] = b.dim;
    if (b.dim == 1)
      bj["case"] = b.one_d_case;
    else
      bj["p_v"] = b.p_v;
    if (b.degeneracy_warning) bj["degeneracy_warning"] = true;
    blocks.push_back(std::move(bj));
  }
  j["blocks"] = std::move(blocks);
  j["no_bound"] = report.no_bound;
  j["yes_bound"] = report.yes_bound;
  j["full_spectrum_match"] = report.full_spectrum_match;
  j["max_spectrum_diff"] = report.max_spectrum_diff;
  j["is_no_instance"] = report.is_no_instance;
  j["is_yes_instance"] = report.is_yes_instance;
  return j;
}

}  // namespace clockforge::kitaev
