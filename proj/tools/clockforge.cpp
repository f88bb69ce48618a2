// clockforge: experiment harness for the clock-Hamiltonian laboratory.
// One subcommand per construction family; machine-readable CSV/JSON output.

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "clockforge/adiabatic.hpp"
#include "clockforge/common.hpp"
#include "clockforge/eigs.hpp"
#include "clockforge/feynman.hpp"
#include "clockforge/fitting.hpp"
#include "clockforge/idling.hpp"
#include "clockforge/kitaev.hpp"
#include "clockforge/multicog.hpp"
#include "clockforge/pulse_tuning.hpp"
#include "clockforge/spin_chains.hpp"
#include "clockforge/walk.hpp"

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

struct CommonOpts {
  std::string out;             // empty = stdout
  std::string format = "json"; // csv | json
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

// 17 significant digits, '.' decimal, locale-free.
std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_output(const CommonOpts& opts, const std::string& content) {
  if (opts.out.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(opts.out);
  if (!f) throw clockforge::domain_error("cannot open output file " + opts.out);
  f << content;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw clockforge::domain_error("empty integer list");
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw clockforge::domain_error("empty list");
  std::sort(out.begin(), out.end());
  return out;
}

json mode_to_json(const clockforge::walk::Mode& mode) {
  json j;
  if (const auto* g = std::get_if<clockforge::walk::GoniometricMode>(&mode)) {
    j["kind"] = "goniometric";
    j["momentum"] = g->momentum;
    j["energy"] = g->energy;
  } else {
    const auto& h = std::get<clockforge::walk::HyperbolicMode>(mode);
    j["kind"] = h.top ? "hyperbolic_top" : "hyperbolic";
    j["rate"] = h.rate;
    j["energy"] = h.energy;
  }
  return j;
}

int run_spectrum(int n, double left, double right, const CommonOpts& opts) {
  using namespace clockforge::walk;
  const WalkSpec spec{n, left, right};
  const auto analytic = analytic_spectrum(spec, opts.tol);
  const auto numeric = numeric_spectrum(build_walk_matrix(spec));
  double max_diff = 0;
  for (int i = 0; i <= n; ++i)
    max_diff = std::max(max_diff, std::abs(analytic.eigenvalues[i] -
                                           numeric.eigenvalues[i]));
  const bool agreement = max_diff <= 1e-8;
  const int table = case_table_hyperbolic_count(spec);
  const bool counts_ok = hyperbolic_count(analytic) == table &&
                         hyperbolic_count(numeric) == table;

  json j;
  j["n"] = n;
  j["left"] = left;
  j["right"] = right;
  j["eigenvalues"] = std::vector<double>(
      analytic.eigenvalues.data(), analytic.eigenvalues.data() + n + 1);
  j["modes"] = json::array();
  for (const auto& m : analytic.modes) j["modes"].push_back(mode_to_json(m));
  j["gap"] = analytic.gap;
  j["analytic_numeric_max_diff"] = max_diff;
  j["agreement"] = agreement;
  j["hyperbolic_count"] = hyperbolic_count(analytic);
  j["case_table_count"] = table;
  j["pass"] = agreement && counts_ok;

  if (opts.format == "csv") {
    std::string csv = "index,energy,kind\n";
    for (int i = 0; i <= n; ++i) {
      csv += std::to_string(i) + "," + fmt17(analytic.eigenvalues[i]) + "," +
             j["modes"][i]["kind"].get<std::string>() + "\n";
    }
    write_output(opts, csv);
  } else {
    write_output(opts, j.dump(2));
  }
  return j["pass"].get<bool>() ? 0 : 1;
}

int run_gap_scan(const std::vector<int>& sizes, const std::string& family,
                 double left, double right, const CommonOpts& opts) {
  using namespace clockforge::walk;
  double l = left, r = right;
  if (family == "laplacian") l = r = 1.0;
  if (family == "walk") l = r = 0.0;

  std::vector<std::pair<double, double>> pts;
  for (int n : sizes) pts.emplace_back(n, analytic_spectrum({n, l, r}).gap);
  const auto fit = clockforge::fit::fit_exponent(pts);

  double expected = -2.0, tolerance = 1e9;
  if (family == "laplacian") tolerance = 0.05;
  if (family == "walk") tolerance = 0.1;
  const bool pass = std::abs(fit.exponent - expected) <= tolerance;

  if (opts.format == "csv") {
    std::string csv = "n,gap\n";
    for (const auto& [n, gap] : pts)
      csv += fmt17(n) + "," + fmt17(gap) + "\n";
    write_output(opts, csv);
  } else {
    json j;
    j["family"] = family;
    j["points"] = json::array();
    for (const auto& [n, gap] : pts)
      j["points"].push_back({{"n", int(n)}, {"gap", gap}});
    j["exponent"] = fit.exponent;
    j["intercept"] = fit.intercept;
    j["r_squared"] = fit.r_squared;
    j["expected_exponent"] = expected;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    write_output(opts, j.dump(2));
  }
  return pass ? 0 : 1;
}

int run_biased(int n, double bias, const CommonOpts& opts) {
  using namespace clockforge::walk;
  const auto w = biased_walk(n, bias);
  const double residual = (w.matrix * w.ground_state).norm();
  Eigen::MatrixXd rewrite =
      (1 + bias * bias) * Eigen::MatrixXd::Identity(n + 1, n + 1) +
      bias * build_walk_matrix({n, 1.0 / bias, bias});
  const double rewrite_diff = (w.matrix - rewrite).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(w.matrix,
                                                   Eigen::EigenvaluesOnly);
  const double gap = s.eigenvalues()[1] - s.eigenvalues()[0];
  const double floor = bias * ((bias + 1.0 / bias) - 2.0);
  const bool pass = residual <= 1e-12 && rewrite_diff == 0.0 && gap >= floor;

  json j;
  j["n"] = n;
  j["bias"] = bias;
  j["ground_residual"] = residual;
  j["rewrite_identity_max_diff"] = rewrite_diff;
  j["rescaled_gap"] = gap;
  j["pass"] = pass;
  write_output(opts, j.dump(2));
  return pass ? 0 : 1;
}

int run_feynman(const std::string& circuit_file, int identity_gates,
                const std::string& input_bits, int padding, double t_max,
                int samples, const CommonOpts& opts) {
  using namespace clockforge::feynman;
  GateSequence circuit;
  if (!circuit_file.empty()) {
    std::ifstream f(circuit_file);
    if (!f)
      throw clockforge::domain_error("cannot read circuit " + circuit_file);
    circuit = circuit_from_json(json::parse(f));
  } else {
    circuit.data_qubits = 1;
    Gate g;
    g.matrix = Eigen::MatrixXcd::Identity(2, 2);
    g.targets = {0};
    for (int t = 0; t < identity_gates; ++t) circuit.gates.push_back(g);
  }
  std::vector<int> bits(circuit.data_qubits, 0);
  for (std::size_t i = 0; i < input_bits.size() && i < bits.size(); ++i)
    bits[i] = input_bits[i] == '1';

  const int n = static_cast<int>(circuit.gates.size());
  if (t_max <= 0) t_max = 10.0 * std::pow(n + padding + 1, 2);

  const auto psi = history_state(circuit, bits, padding);
  const std::int64_t ddim = std::int64_t{1} << circuit.data_qubits;
  double done_weight = 0;
  for (std::int64_t i = n * ddim; i < psi.size(); ++i)
    done_weight += std::norm(psi[i]);

  json j;
  j["gates"] = n;
  j["padding"] = padding;
  j["t_max"] = t_max;
  j["samples"] = samples;
  j["cesaro_estimate"] = cesaro_success(circuit, bits, padding, t_max, samples);
  j["cesaro_limit"] = cesaro_limit(circuit, bits, padding, false);
  j["done_limit"] = cesaro_limit(circuit, bits, padding, true);
  j["history_done_weight"] = done_weight;
  j["pass"] = true;
  write_output(opts, j.dump(2));
  return 0;
}

int run_kitaev(const std::string& instance_file, int n_steps,
               const CommonOpts& opts) {
  std::ifstream f(instance_file);
  if (!f)
    throw clockforge::domain_error("cannot read instance " + instance_file);
  const auto instance = clockforge::kitaev::instance_from_json(json::parse(f));
  const auto report = clockforge::kitaev::full_cross_check(instance, n_steps);
  write_output(opts, clockforge::kitaev::report_to_json(report).dump(2));
  return report.full_spectrum_match ? 0 : 1;
}

int run_adiabatic(int n, double t1, double t2, int grid,
                  const std::string& ladder, const CommonOpts& opts) {
  using namespace clockforge::adiabatic;
  if (!ladder.empty()) {
    std::string csv = "t2,fidelity\n";
    for (double t2_point : parse_double_list(ladder)) {
      ScheduleSpec spec{n, t1, t2_point, {}};
      csv += fmt17(t2_point) + "," + fmt17(integrate_schedule(spec)) + "\n";
    }
    write_output(opts, csv);
    return 0;
  }
  ScheduleSpec spec{n, t1, t2, {}};
  const auto profile = gap_profile(spec, grid);
  bool ramps_ok = true;
  double min_gap = 1e300;
  for (const auto& p : profile) {
    min_gap = std::min(min_gap, p.gap);
    if ((p.t <= t1 || p.t >= t1 + t2) && p.gap < 0.5) ramps_ok = false;
  }
  const double closed_form = 2 - 2 * std::cos(kPi / (n + 1));
  const bool min_ok = std::abs(min_gap / closed_form - 1.0) <= 0.01;

  std::string csv = "t,gap\n";
  for (const auto& p : profile) csv += fmt17(p.t) + "," + fmt17(p.gap) + "\n";
  write_output(opts, csv);
  return (ramps_ok && min_ok) ? 0 : 1;
}

int run_idling(int n, int c, const std::string& graph_out,
               const CommonOpts& opts) {
  using namespace clockforge::idling;
  const IdlingSpec spec{n, c};
  const auto report = canonical_paths(spec);
  const auto gc = gap_check(spec);
  if (!graph_out.empty()) {
    std::ofstream gf(graph_out);
    gf << graph_to_text(enumerate_legal_states(spec));
  }
  write_output(opts, report_to_json(spec, report).dump(2));
  const bool pass = report.gap_lower_bound <= report.numeric_gap &&
                    gc.numeric_gap >= gc.analytic_lower_bound;
  return pass ? 0 : 1;
}

int run_multicog(int length, int cogs, bool cycle,
                 const std::string& terms_out, const CommonOpts& opts) {
  using namespace clockforge::multicog;
  json j;
  j["length"] = length;
  j["cogs"] = cogs;

  clockforge::spins::LabeledSparseOperator op;
  std::vector<std::int64_t> legal;
  double expected_gap = 0;
  if (cogs == 1) {
    if (cycle) {
      op = build_surfer_cycle(length);
      legal = surfer_cycle_legal_indices(length);
      if (!terms_out.empty()) {
        std::ofstream tf(terms_out);
        tf << term_audit(surfer_cycle_terms(length));
      }
    } else {
      op = build_surfer_line(length);
      legal = surfer_line_legal_indices(length);
      if (!terms_out.empty()) {
        std::ofstream tf(terms_out);
        tf << term_audit(surfer_line_terms(length));
      }
    }
    j["topology"] = cycle ? "cycle" : "line";
    expected_gap = 2 - 2 * std::cos(kPi / length);
  } else {
    auto clock = build_multicog(cogs, length,
                                cycle ? Topology::cycle : Topology::line);
    if (!terms_out.empty()) {
      std::ofstream tf(terms_out);
      tf << term_audit(clock.terms);
    }
    op = std::move(clock.op);
    legal = multicog_legal_indices(cogs, length);
    j["topology"] = cycle ? "multicog_cycle" : "multicog_line";
    expected_gap = cycle ? 2 - 2 * std::cos(2 * kPi / double(clock.n_steps))
                         : 2 - 2 * std::cos(kPi / double(clock.n_steps));
  }

  const auto block = clockforge::spins::restrict_to(op, legal);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(block.matrix,
                                                   Eigen::EigenvaluesOnly);
  const double legal_gap = s.eigenvalues()[1] - s.eigenvalues()[0];
  const auto full = clockforge::eigs::lowest(op, 1);

  j["dimension"] = op.dimension;
  j["legal_states"] = static_cast<std::int64_t>(legal.size());
  j["legal_gap"] = legal_gap;
  j["ground_energy"] = full.values[0];
  const bool pass = std::abs(legal_gap - expected_gap) <= 1e-8 &&
                    std::abs(full.values[0]) <= 1e-10;
  j["pass"] = pass;
  write_output(opts, j.dump(2));
  return pass ? 0 : 1;
}

int run_tune(const std::vector<int>& sizes, const std::string& v_rule,
             const CommonOpts& opts) {
  using namespace clockforge::tuning;
  auto v_of = [&](int n) -> double {
    if (v_rule == "cubic") return std::pow(n, -3.0);
    if (v_rule == "threehalves") return std::pow(n, -1.5);
    if (v_rule.rfind("const:", 0) == 0)
      return std::stod(v_rule.substr(6));
    throw clockforge::domain_error("unknown --v-rule " + v_rule);
  };

  std::string csv = "n,v,z,e_z\n";
  std::vector<std::pair<double, double>> gaps;
  bool bound_satisfied = true;
  for (int n : sizes) {
    const double v = v_of(n);
    const auto study = sector_spectrum_study(n, v);
    for (int z = 0; z <= n; ++z)
      csv += std::to_string(n) + "," + fmt17(v) + "," + std::to_string(z) +
             "," + fmt17(study.sector_energy[z]) + "\n";
    gaps.emplace_back(n, study.gap);
    for (int z = 2; z <= n; ++z) {
      if (binomial(n, z) > 3000) continue;
      const auto b = geometric_bound(n, z);
      if (study.sector_energy[z] + (z - 1) * v < b.bound - 1e-12)
        bound_satisfied = false;
    }
  }
  const auto fit = clockforge::fit::fit_exponent(gaps);
  const bool exponent_ok =
      (v_rule == "cubic") ? std::abs(fit.exponent + 3.0) <= 0.3 : true;
  const bool pass = bound_satisfied && exponent_ok;

  if (opts.format == "csv") {
    write_output(opts, csv);
  } else {
    json j;
    j["v_rule"] = v_rule;
    j["sizes"] = sizes;
    j["gap"] = gaps.back().second;
    j["fitted_exponent"] = fit.exponent;
    j["bound_satisfied"] = bound_satisfied;
    j["pass"] = pass;
    write_output(opts, j.dump(2));
  }
  return pass ? 0 : 1;
}

std::vector<std::string> args_from_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw clockforge::domain_error("cannot read config " + path);
  const json cfg = json::parse(f);
  std::vector<std::string> args;
  args.push_back(cfg.at("command").get<std::string>());
  if (cfg.contains("parameters")) {
    for (const auto& [key, value] : cfg.at("parameters").items()) {
      const std::string flag = "--" + key;
      if (value.is_boolean()) {
        if (value.get<bool>()) args.push_back(flag);
        continue;
      }
      args.push_back(flag);
      if (value.is_string())
        args.push_back(value.get<std::string>());
      else if (value.is_array()) {
        std::string csv;
        for (const auto& item : value) {
          if (!csv.empty()) csv += ',';
          csv += item.is_string() ? item.get<std::string>() : item.dump();
        }
        args.push_back(csv);
      } else {
        args.push_back(value.dump());
      }
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clockforge: clock Hamiltonians, spectra and gap bounds"};
  app.require_subcommand(0, 1);

  CommonOpts opts;
  std::string config_file;
  app.add_option("--config", config_file, "JSON config with command + parameters");
  app.add_option("--out", opts.out, "output path (default stdout)")
      ->capture_default_str();
  app.add_option("--format", opts.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--tol", opts.tol, "root-finder tolerance")
      ->capture_default_str();
  app.add_option("--seed", opts.seed, "seed for seeded sweeps")
      ->capture_default_str();

  int n = 8;
  double left = 1.0, right = 1.0, bias = 2.0;
  std::string n_list = "8,16,32,64";
  std::string family = "laplacian";
  std::string circuit_file, instance_file, input_bits, ladder, graph_out,
      terms_out, v_rule = "cubic";
  int padding = 0, samples = 400, grid = 201, cogs = 1, length = 4;
  double t_max = 0, t1 = 1.0, t2 = 4.0;
  bool cycle = false;

  auto* spectrum = app.add_subcommand("spectrum", "analytic vs numeric walk spectrum");
  spectrum->add_option("--n", n, "number of links")->required();
  spectrum->add_option("--left", left, "left loop strength");
  spectrum->add_option("--right", right, "right loop strength");

  auto* gapscan = app.add_subcommand("gap-scan", "gap scaling fit over sizes");
  gapscan->add_option("--n", n_list, "comma list of sizes");
  gapscan->add_option("--family", family, "laplacian | walk | loops")
      ->check(CLI::IsMember({"laplacian", "walk", "loops"}));
  gapscan->add_option("--left", left, "left loop (family=loops)");
  gapscan->add_option("--right", right, "right loop (family=loops)");

  auto* biased = app.add_subcommand("biased", "biased clock ground state and gap");
  biased->add_option("--n", n, "number of links")->required();
  biased->add_option("--bias", bias, "bias B > 1")->required();

  auto* feynman = app.add_subcommand("feynman", "Feynman computer Cesaro averages");
  feynman->add_option("--circuit", circuit_file, "circuit JSON file");
  feynman->add_option("--identity", n, "identity circuit with N gates");
  feynman->add_option("--input", input_bits, "input bit string");
  feynman->add_option("--padding", padding, "identity padding steps A");
  feynman->add_option("--t-max", t_max, "sampling horizon (default 10(N+A+1)^2)");
  feynman->add_option("--samples", samples, "number of sample times");

  auto* kitaev = app.add_subcommand("kitaev", "Jordan-block cross check");
  kitaev->add_option("--instance", instance_file, "instance JSON file")
      ->required();
  kitaev->add_option("--n", n, "clock length")->required();

  auto* adiabatic = app.add_subcommand("adiabatic", "schedule gap profile / fidelity");
  adiabatic->add_option("--n", n, "number of links")->required();
  adiabatic->add_option("--t1", t1, "ramp duration");
  adiabatic->add_option("--t2", t2, "middle duration");
  adiabatic->add_option("--grid", grid, "profile grid points");
  adiabatic->add_option("--t2-ladder", ladder, "comma list of T2 values");

  auto* idling = app.add_subcommand("idling", "idling-chain canonical paths");
  idling->add_option("--n", n, "unary clock steps")->required();
  idling->add_option("--c", cogs, "extra/idling qubit count")->required();
  idling->add_option("--graph-out", graph_out, "edge list output path");

  auto* multicog = app.add_subcommand("multicog", "qutrit surfer clocks");
  multicog->add_option("--l", length, "cog length")->required();
  multicog->add_option("--c", cogs, "number of cogs");
  multicog->add_flag("--cycle", cycle, "cycle topology");
  multicog->add_option("--terms-out", terms_out, "term audit output path");

  auto* tune = app.add_subcommand("tune", "pulse-clock tuning study");
  tune->add_option("--n", n_list, "comma list of chain lengths");
  tune->add_option("--v-rule", v_rule, "cubic | threehalves | const:<x>");

  std::vector<std::string> config_args;
  try {
    app.parse(argc, argv);
    if (!config_file.empty() && app.get_subcommands().empty()) {
      config_args = args_from_config(config_file);
      std::vector<const char*> cargv;
      cargv.push_back(argv[0]);
      for (const auto& a : config_args) cargv.push_back(a.c_str());
      app.clear();
      app.parse(static_cast<int>(cargv.size()),
                const_cast<char**>(cargv.data()));
    }
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (spectrum->parsed()) return run_spectrum(n, left, right, opts);
    if (gapscan->parsed())
      return run_gap_scan(parse_int_list(n_list), family, left, right, opts);
    if (biased->parsed()) return run_biased(n, bias, opts);
    if (feynman->parsed())
      return run_feynman(circuit_file, n, input_bits, padding, t_max, samples,
                         opts);
    if (kitaev->parsed()) return run_kitaev(instance_file, n, opts);
    if (adiabatic->parsed())
      return run_adiabatic(n, t1, t2, grid, ladder, opts);
    if (idling->parsed()) return run_idling(n, cogs, graph_out, opts);
    if (multicog->parsed())
      return run_multicog(length, cogs, cycle, terms_out, opts);
    if (tune->parsed())
      return run_tune(parse_int_list(n_list), v_rule, opts);
    std::cerr << app.help();
    return 2;
  } catch (const clockforge::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const clockforge::size_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
