// Command-line driver for the Carleman lattice Boltzmann toolkit.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clb/carleman.hpp"
#include "clb/circuit.hpp"
#include "clb/io.hpp"
#include "clb/lattice.hpp"
#include "clb/oracles.hpp"
#include "clb/pauli.hpp"
#include "clb/qsim.hpp"

namespace {

using namespace clb;

constexpr int kExitInvalid = 2;
constexpr int kExitResource = 3;

struct Common {
  std::string model = "D2Q9";
  std::string grid = "16x16";
  std::string omega = "1.0";
  double speed = 0.1;
  int steps = 100;
  std::string out;
  std::string config;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--model", c.model, "D1Q3, D2Q9 or D3Q27")->capture_default_str();
  app->add_option("--grid", c.grid, "axis lengths, e.g. 16x16")->capture_default_str();
  app->add_option("--omega", c.omega, "value, list a,b,c or range lo:hi:step")
      ->capture_default_str();
  app->add_option("--speed", c.speed, "peak flow speed U")->capture_default_str();
  app->add_option("--steps", c.steps, "number of time steps")->capture_default_str();
  app->add_option("--out", c.out, "output path");
  app->add_option("--config", c.config, "flat key=value file; flags take precedence");
  app->add_option("--seed", c.seed, "random seed")->capture_default_str();
}

Grid parse_grid(const std::string& s) {
  std::vector<int> dims;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, s.find('x') != std::string::npos ? 'x' : ',')) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw InvalidInput("grid: cannot parse '" + s + "'");
    }
    require(used == item.size(), "grid: cannot parse '" + s + "'");
    dims.push_back(n);
  }
  require(!dims.empty(), "grid: empty specification");
  return Grid(dims);
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidInput(what + ": cannot parse '" + s + "'");
  }
  require(used == s.size() && std::isfinite(v), what + ": cannot parse '" + s + "'");
  return v;
}

std::vector<double> parse_omegas(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::vector<double> p;
    std::istringstream in(s);
    for (std::string item; std::getline(in, item, ':');) p.push_back(parse_double(item, "omega"));
    require(p.size() == 3 && p[2] > 0 && p[1] >= p[0], "omega range must be lo:hi:step");
    const long n = std::lround(std::floor((p[1] - p[0]) / p[2] + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(p[0] + i * p[2]);
  } else {
    std::istringstream in(s);
    for (std::string item; std::getline(in, item, ',');) out.push_back(parse_double(item, "omega"));
  }
  require(!out.empty(), "omega: no values given");
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

void require_out(const Common& c) { require(!c.out.empty(), "--out is required"); }

int run_carleman_compare(const Common& c, int wavenumber, const std::string& profile,
                         const std::string& metric, const std::string& evolution,
                         std::int64_t cap) {
  const LatticeModel model = make_model(c.model);
  require(model.dimension == 2, "carleman-compare needs a two-dimensional model");
  const Grid grid = parse_grid(c.grid);
  const auto omegas = parse_omegas(c.omega);
  for (double w : omegas) require(w > 0 && w < 2, "omega must lie in (0, 2)");
  require(c.steps >= 0, "--steps must be non-negative");
  require_out(c);
  require(profile == "crossed" || profile == "shear", "--profile must be crossed or shear");
  require(metric == "population" || metric == "velocity", "--metric must be population or velocity");
  require(evolution == "fast" || evolution == "explicit", "--evolution must be fast or explicit");
  CompareOptions opt;
  opt.metric = metric == "velocity" ? ErrorMetric::velocity : ErrorMetric::population;
  opt.evolution = evolution == "explicit" ? Evolution::explicit_matrix : Evolution::fast;
  opt.carleman.max_second_order = cap;
  if (opt.evolution == Evolution::explicit_matrix) {
    const CarlemanLayout L{model.velocity_count(), grid.sites()};
    if (L.second_order_size() > cap)
      throw ResourceLimit("explicit evolution needs " + std::to_string(L.second_order_size()) +
                          " second-order entries, above the cap max_second_order = " +
                          std::to_string(cap));
  }
  const DistributionField f0 =
      kolmogorov_init(grid, c.speed, wavenumber, model,
                      profile == "shear" ? KolmogorovProfile::shear : KolmogorovProfile::crossed);
  for (double w : omegas) {
    const std::string path = omegas.size() == 1 ? c.out : with_suffix(c.out, "_omega" + fmt(w));
    const LbmComparison cmp = compare_to_lbm(f0, w, c.steps, opt);
    write_file_atomic(path, [&](std::ostream& o) { write_error_csv(o, cmp.series); });
    const ReynoldsReport re = reynolds_report(w, c.speed, grid.dims()[1]);
    std::cout << "omega=" << w << " Re=" << std::setprecision(6) << re.reynolds
              << " mean_error(t=" << c.steps << ")=" << cmp.series.back().mean << " -> " << path
              << '\n';
  }
  return 0;
}

int run_pauli(const Common& c, int identity_qubits) {
  require_out(c);
  Eigen::MatrixXd m;
  if (identity_qubits > 0) {
    require(identity_qubits <= kMaxPauliQubits, "--identity exceeds the qubit cap");
    m = Eigen::MatrixXd::Identity(Index{1} << identity_qubits, Index{1} << identity_qubits);
  } else {
    const auto omegas = parse_omegas(c.omega);
    require(omegas.size() == 1, "pauli takes a single omega");
    require(omegas[0] >= 0 && omegas[0] < 2, "omega must lie in [0, 2)");
    const LatticeModel model = make_model(c.model);
    const Index dim = model.velocity_count() + Index(model.velocity_count()) * model.velocity_count();
    int n = 0;
    while ((Index{1} << n) < dim) ++n;
    if (n > kMaxPauliQubits)
      throw ResourceLimit("pauli: single-site matrix needs " + std::to_string(n) +
                          " qubits, above the cap of " + std::to_string(kMaxPauliQubits));
    m = Eigen::MatrixXd(single_site_relaxation(model, omegas[0]));
  }
  const ExpansionReport r = truncation_curve(m);
  for (std::size_t i = 1; i < r.distances.size(); ++i)
    if (r.distances[i] > r.distances[i - 1])
      throw std::runtime_error("pauli: distance increased at rank " + std::to_string(i));
  write_file_atomic(c.out, [&](std::ostream& o) { write_expansion_csv(o, r); });
  std::cout << "terms=" << r.expansion.terms.size() << " qubits=" << r.expansion.qubits
            << " final_distance=" << r.distances.back() << " -> " << c.out << '\n';
  return 0;
}

int run_build_circuit(const Common& c, const std::string& streaming_out,
                      const std::string& report_out, int qn_min, int qn_max, bool json,
                      bool pad) {
  const LatticeModel model = make_model(c.model);
  if (model.id == ModelId::D3Q27)
    throw Unsupported("build-circuit: D3Q27 circuits are not supported (analytic p_s only)");
  const auto omegas = parse_omegas(c.omega);
  require(omegas.size() == 1, "build-circuit takes a single omega");
  const Grid grid = parse_grid(c.grid);
  require(qn_min >= 1 && qn_max >= qn_min, "q_N range is empty");
  require(qn_max <= 16, "q_N range above 16 is not supported");
  require_out(c);

  const EncodingData data = make_encoding(model, omegas[0], grid);
  const Circuit block = assemble_block_encoding(data);
  const Circuit stream = streaming_circuit(model, grid, pad);
  auto writer = [json](const Circuit& k) {
    return [&k, json](std::ostream& o) {
      json ? write_circuit_json(o, k) : write_circuit_text(o, k);
    };
  };
  write_file_atomic(c.out, writer(block));
  if (!streaming_out.empty()) write_file_atomic(streaming_out, writer(stream));
  std::cout << "qubits=" << block.layout.qubits() << " relaxation_gates=" << block.gates.size()
            << " streaming_gates=" << stream.gates.size() << " -> " << c.out << '\n';

  if (!report_out.empty()) {
    std::ostringstream table;
    table << "q_N,kind,count,two_qubit_estimate\n";
    for (int q = qn_min; q <= qn_max; ++q) {
      const Grid g(std::vector<int>(model.dimension, 1 << q));
      const GateCountReport rel =
          gate_report(assemble_block_encoding(make_encoding(model, omegas[0], g)));
      const GateCountReport st = gate_report(streaming_circuit(model, g));
      for (const auto& [label, rep] : {std::pair{"relaxation", &rel}, std::pair{"streaming", &st}}) {
        for (const auto& [kind, count] : rep->by_kind)
          table << q << ',' << label << '.' << kind << ',' << count << ','
                << rep->two_qubit_by_kind.at(kind) << '\n';
        table << q << ',' << label << ".total," << rep->total << ',' << rep->two_qubit_estimate
              << '\n';
      }
    }
    write_file_atomic(report_out, [&](std::ostream& o) { o << table.str(); });
  }
  return 0;
}

int run_success_sweep(const Common& c, const std::string& init, bool simulate, int max_qubits) {
  const LatticeModel model = make_model(c.model);
  const Grid grid = parse_grid(c.grid);
  require(grid.dimension() == model.dimension, "grid/model dimension mismatch");
  const auto omegas = parse_omegas(c.omega);
  const InitKind kind = parse_init_kind(init);
  require_out(c);
  SweepOptions opt;
  opt.simulate = simulate;
  opt.max_sim_qubits = max_qubits;
  if (simulate) {
    const bool fits = model.id != ModelId::D3Q27 &&
                      carleman_layout(model, grid).qubits() <= max_qubits;
    if (!fits)
      std::cerr << "warning: simulation exceeds the qubit budget of " << max_qubits
                << "; using the analytic success probability\n";
  }
  const SuccessCurve curve = sweep_omega(model, grid, kind, omegas, opt);
  write_file_atomic(c.out, [&](std::ostream& o) { write_success_csv(o, curve); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.probabilities.size(); ++i)
    if (curve.probabilities[i] > curve.probabilities[best]) best = i;
  std::cout << "argmax omega=" << curve.omegas[best] << " p_s=" << curve.probabilities[best]
            << " -> " << c.out << '\n';
  return 0;
}

int run_logistic(const Common& c, double u0, double r, int kmax, double time, double dt,
                 double ref_dt) {
  require(std::abs(r * u0) < 1, "logistic: |R u0| must be below 1");
  require(kmax >= 1, "logistic: --kmax must be at least 1");
  require(dt > 0 && ref_dt > 0 && time >= 0, "logistic: need dt > 0 and T >= 0");
  require_out(c);
  std::vector<LogisticLadder> runs;
  for (int k = 1; k <= kmax; ++k) runs.push_back(logistic_carleman(u0, r, k, time, dt));
  const auto ref = logistic_reference(u0, r, runs[0].times, ref_dt);
  write_file_atomic(c.out, [&](std::ostream& o) {
    o << 't';
    for (int k = 1; k <= kmax; ++k) o << ",u1_K" << k;
    o << ",u_ref\n" << std::setprecision(17);
    for (std::size_t i = 0; i < runs[0].times.size(); ++i) {
      o << runs[0].times[i];
      for (const auto& l : runs) o << ',' << l.u1[i];
      o << ',' << ref[i] << '\n';
    }
  });
  std::cout << "final errors:";
  for (const auto& l : runs) std::cout << ' ' << std::abs(l.u1.back() - ref.back());
  std::cout << " -> " << c.out << '\n';
  return 0;
}

int run_lbm(const Common& c, const std::string& init, int wavenumber, double amplitude) {
  const LatticeModel model = make_model(c.model);
  const Grid grid = parse_grid(c.grid);
  require(grid.dimension() == model.dimension, "grid/model dimension mismatch");
  const auto omegas = parse_omegas(c.omega);
  require(omegas.size() == 1, "lbm-run takes a single omega");
  require(omegas[0] > 0 && omegas[0] < 2, "omega must lie in (0, 2)");
  require(c.steps >= 0, "--steps must be non-negative");
  require(init == "kolmogorov" || init == "equilibrium" || init == "random",
          "--init must be kolmogorov, equilibrium or random");
  require(amplitude >= 0 && amplitude < 1, "--amplitude must lie in [0, 1)");
  require_out(c);
  DistributionField f = init == "kolmogorov" ? kolmogorov_init(grid, c.speed, wavenumber, model)
                                             : equilibrium_field(model, grid);
  if (init == "random") {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    for (Index x = 0; x < f.values.rows(); ++x)
      for (Index p = 0; p < f.values.cols(); ++p) f.values(x, p) *= 1.0 + u(rng);
  }
  const double mass0 = f.total_mass();
  for (int t = 0; t < c.steps; ++t) f = lbm_step(f, omegas[0]);
  write_file_atomic(c.out, [&](std::ostream& o) { write_field_csv(o, f); });
  std::cout << "mass drift=" << std::abs(f.total_mass() - mass0) / mass0 << " -> " << c.out
            << '\n';
  return 0;
}

// Appends `--key value` for every config entry not already given as a flag.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  for (const auto& [key, value] : read_key_value_file(path)) {
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
    if (given) continue;
    args.push_back(flag);
    if (value != "true") args.push_back(value);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carleman lattice Boltzmann toolkit"};
  app.require_subcommand(1);
  Common common;

  auto* cmp = app.add_subcommand("carleman-compare", "CLB vs LBM error series per omega");
  add_common(cmp, common);
  int wavenumber = 1;
  std::string profile = "crossed", metric = "population", evolution = "fast";
  std::int64_t cap = std::int64_t{1} << 19;
  cmp->add_option("--wavenumber", wavenumber)->capture_default_str();
  cmp->add_option("--profile", profile, "crossed or shear")->capture_default_str();
  cmp->add_option("--metric", metric, "population or velocity")->capture_default_str();
  cmp->add_option("--evolution", evolution, "fast or explicit")->capture_default_str();
  cmp->add_option("--max-second-order", cap, "cap on second-order entries")->capture_default_str();

  auto* pauli = app.add_subcommand("pauli", "Pauli expansion of the single-site relaxation matrix");
  add_common(pauli, common);
  int identity_qubits = 0;
  pauli->add_option("--identity", identity_qubits, "expand the identity on n qubits instead");

  auto* build = app.add_subcommand("build-circuit", "export circuits and gate-count tables");
  add_common(build, common);
  std::string streaming_out, report_out;
  int qn_min = 2, qn_max = 6;
  bool json = false, pad = false;
  build->add_option("--streaming-out", streaming_out, "streaming circuit path");
  build->add_option("--report", report_out, "gate-count CSV path");
  build->add_option("--qn-min", qn_min)->capture_default_str();
  build->add_option("--qn-max", qn_max)->capture_default_str();
  build->add_flag("--json", json, "export JSON instead of text");
  build->add_flag("--pad", pad, "embed non power-of-two axes");

  auto* sweep = app.add_subcommand("success-sweep", "success probability versus omega");
  add_common(sweep, common);
  std::string init = "uniform";
  bool simulate = false;
  int max_qubits = 22;
  sweep->add_option("--init", init, "uniform or equilibrium")->capture_default_str();
  sweep->add_flag("--simulate", simulate, "statevector simulation where the budget permits");
  sweep->add_option("--max-qubits", max_qubits)->capture_default_str();

  auto* logi = app.add_subcommand("logistic", "Carleman ladder for the logistic equation");
  add_common(logi, common);
  double u0 = 0.5, r = 0.2, time = 1.0, dt = 1e-3, ref_dt = 1e-6;
  int kmax = 5;
  logi->add_option("--u0", u0)->capture_default_str();
  logi->add_option("--nonlinearity", r, "R")->capture_default_str();
  logi->add_option("--kmax", kmax)->capture_default_str();
  logi->add_option("--time", time)->capture_default_str();
  logi->add_option("--dt", dt)->capture_default_str();
  logi->add_option("--ref-dt", ref_dt)->capture_default_str();

  auto* lbm = app.add_subcommand("lbm-run", "plain lattice Boltzmann run");
  add_common(lbm, common);
  std::string lbm_init = "kolmogorov";
  double amplitude = 0.05;
  lbm->add_option("--init", lbm_init, "kolmogorov, equilibrium or random")->capture_default_str();
  lbm->add_option("--wavenumber", wavenumber)->capture_default_str();
  lbm->add_option("--amplitude", amplitude, "relative perturbation for random init")
      ->capture_default_str();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*cmp) return run_carleman_compare(common, wavenumber, profile, metric, evolution, cap);
    if (*pauli) return run_pauli(common, identity_qubits);
    if (*build)
      return run_build_circuit(common, streaming_out, report_out, qn_min, qn_max, json, pad);
    if (*sweep) return run_success_sweep(common, init, simulate, max_qubits);
    if (*logi) return run_logistic(common, u0, r, kmax, time, dt, ref_dt);
    if (*lbm) return run_lbm(common, lbm_init, wavenumber, amplitude);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
