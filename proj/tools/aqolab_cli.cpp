#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aqolab/errors.hpp"
#include "aqolab/evolution.hpp"
#include "aqolab/families.hpp"
#include "aqolab/gap_bounds.hpp"
#include "aqolab/hardness/extraction.hpp"
#include "aqolab/hardness/sat.hpp"
#include "aqolab/io.hpp"
#include "aqolab/schedule.hpp"

using namespace aqolab;

namespace {

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid;
  std::string out = "-";
  std::string format = "json";
  bool waive_condition = false;
};

using CsvRow = std::vector<std::string>;

struct Inputs {
  std::string input;
  std::optional<double> eps;
  std::optional<double> p;
};

RunConfig load_config(const Globals& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig{} : RunConfig::from_json(read_json_file(g.config_path));
  if (g.seed) cfg.seed = *g.seed;
  if (g.waive_condition) cfg.enforce_condition = false;
  cfg.validate();
  return cfg;
}

Json read_input(const std::string& path) {
  if (path.empty() || path == "-") return read_json(std::cin);
  return read_json_file(path);
}

void emit(const Globals& g, const Json& j) {
  if (g.out.empty() || g.out == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(g.out);
  if (!out) throw PreconditionError("cannot write " + g.out);
  out << j.dump(2) << '\n';
}

std::string cell(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void emit_csv(const Globals& g, const CsvRow& header, const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  auto line = [&os](const CsvRow& row) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  if (g.out.empty() || g.out == "-") {
    std::cout << os.str();
    return;
  }
  std::ofstream out(g.out);
  if (!out) throw PreconditionError("cannot write " + g.out);
  out << os.str();
}

// "exact", "noisy", "noisy:EPS", "prob:EPS:Q" or "probabilistic:EPS:Q".
void parse_oracle(std::string& mode, std::string& epsilon, double& success) {
  std::vector<std::string> parts;
  std::stringstream ss(mode);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.empty()) throw ParseError("empty oracle mode");
  if (parts[0] == "prob") parts[0] = "probabilistic";
  const std::size_t max_parts = parts[0] == "probabilistic" ? 3 : parts[0] == "noisy" ? 2 : 1;
  if (parts.size() > max_parts) throw ParseError("malformed oracle mode " + mode);
  mode = parts[0];
  if (parts.size() > 1) epsilon = parts[1];
  if (parts.size() > 2) {
    try {
      success = std::stod(parts[2]);
    } catch (const std::exception&) {
      throw ParseError("bad success probability " + parts[2]);
    }
  }
}

Integrator parse_integrator(const std::string& name) {
  if (name == "automatic") return Integrator::automatic;
  if (name == "lab") return Integrator::lab_rk4;
  if (name == "frame") return Integrator::adiabatic_frame;
  throw ParseError("unknown integrator " + name);
}

void add_problem(CLI::App* cmd, Inputs& in) {
  cmd->add_option("-i,--input", in.input, "problem JSON: spectrum, Ising model or family descriptor ('-' for stdin)")
      ->required();
}

void add_schedule_constants(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--eps", in.eps, "target error");
  cmd->add_option("--p", in.p, "rate exponent in (1, 2]");
}

SchedulePlan plan_for(const DegeneracySpectrum& spec, const RunConfig& cfg) {
  const auto profile = spectral_params(spec, cfg.c);
  const auto cert = certificate(profile, cfg.certificate_options());
  return synthesize(cert, cfg.p, cfg.eps, HamiltonianNorms::for_linear_path(spec), cfg.schedule_options());
}

void apply_constants(RunConfig& cfg, const Inputs& in) {
  if (in.eps) cfg.eps = *in.eps;
  if (in.p) cfg.p = *in.p;
  cfg.validate();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis, schedules and hardness reductions for unstructured adiabatic optimisation"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "RunConfig JSON");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--grid", g.grid, "grid density for the chosen subcommand");
  app.add_option("--out", g.out, "output file ('-' for stdout)");
  app.add_option("--format", g.format, "json, or csv for gap-scan, schedule and scaling")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--waive-condition", g.waive_condition, "run outside the spectral condition, flagging the result");

  Inputs in;

  auto* spectrum_cmd = app.add_subcommand("spectrum", "levels, spectral parameters and secular eigenvalues");
  add_problem(spectrum_cmd, in);
  std::vector<double> s_values;
  spectrum_cmd->add_option("--s", s_values, "explicit s values (default: uniform grid)");

  auto* scan_cmd = app.add_subcommand("gap-scan", "true gap against the certified lower bound");
  add_problem(scan_cmd, in);

  auto* certify_cmd = app.add_subcommand("certify", "build the gap certificate and run every check");
  add_problem(certify_cmd, in);

  auto* schedule_cmd = app.add_subcommand("schedule", "synthesise the local schedule");
  add_problem(schedule_cmd, in);
  add_schedule_constants(schedule_cmd, in);
  bool with_table = false;
  schedule_cmd->add_flag("--table", with_table, "include the K(s) table");

  auto* evolve_cmd = app.add_subcommand("evolve", "integrate the Schrodinger equation");
  add_problem(evolve_cmd, in);
  add_schedule_constants(evolve_cmd, in);
  std::string integrator = "automatic";
  std::optional<double> uniform_time;
  double scale = 1.0;
  bool baseline = false;
  evolve_cmd->add_option("--integrator", integrator, "automatic | lab | frame");
  evolve_cmd->add_option("--uniform", uniform_time, "use a uniform schedule of this total time instead");
  evolve_cmd->add_option("--scale", scale, "multiply the planned rate by this factor");
  evolve_cmd->add_flag("--baseline", baseline, "also run a uniform schedule of the same total time");

  auto* scaling_cmd = app.add_subcommand("scaling", "runtime against problem size for a family");
  add_schedule_constants(scaling_cmd, in);
  std::string family = "grover";
  std::vector<int> sizes{8, 9, 10, 11, 12, 13, 14};
  std::size_t levels = 5;
  double width = 1.0;
  std::uint64_t d0 = 1;
  bool no_evolve = false;
  scaling_cmd->add_option("--family", family, "grover | gaussian");
  scaling_cmd->add_option("--n", sizes, "qubit counts");
  scaling_cmd->add_option("--levels", levels, "gaussian: number of levels");
  scaling_cmd->add_option("--width", width, "gaussian: profile width");
  scaling_cmd->add_option("--d0", d0, "ground degeneracy");
  scaling_cmd->add_flag("--no-evolve", no_evolve, "skip the integration");

  auto* extract_cmd = app.add_subcommand("extract", "recover degeneracies from an A1 oracle");
  add_problem(extract_cmd, in);
  std::string oracle_mode = "exact";
  std::string epsilon_text;
  std::vector<int> signs;
  double success = 0.75;
  std::size_t samples = 0;
  int votes = 5;
  extract_cmd->add_option("--oracle", oracle_mode, "exact | noisy[:EPS] | prob[:EPS[:Q]]");
  extract_cmd->add_option("--epsilon", epsilon_text, "oracle accuracy as a rational (noisy default: budget/10)");
  extract_cmd->add_option("--signs", signs, "noisy: per-call error signs in {-1,0,1}, cycled");
  extract_cmd->add_option("--q", success, "probabilistic: per-call success probability");
  extract_cmd->add_option("--samples", samples, "probabilistic: sample count (default 4(M+2))");
  extract_cmd->add_option("--votes", votes, "probabilistic: repeats per call");

  auto* sat_cmd = app.add_subcommand("sat", "3-SAT through the clause gadget and the two-call test");
  std::string dimacs;
  sat_cmd->add_option("-i,--input", dimacs, "DIMACS CNF file ('-' for stdin)")->required();

  auto* bounds_cmd = app.add_subcommand("verify-bounds", "projector derivative and commutator bounds");
  add_problem(bounds_cmd, in);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorKind::parse);
  }

  try {
    RunConfig cfg = load_config(g);
    const bool csv = g.format == "csv";
    if (csv && !(scan_cmd->parsed() || schedule_cmd->parsed() || scaling_cmd->parsed())) {
      throw ParseError("csv output is available for gap-scan, schedule and scaling only");
    }

    if (spectrum_cmd->parsed()) {
      const auto spec = load_problem(read_input(in.input), cfg, true);
      if (s_values.empty()) {
        const std::size_t points = g.grid.value_or(10);
        for (std::size_t i = 0; i <= points; ++i) s_values.push_back(static_cast<double>(i) / static_cast<double>(points));
      }
      Json rows = Json::array();
      for (double s : s_values) {
        if (!(s >= 0 && s <= 1)) throw DomainError("s must lie in [0, 1]");
        const auto roots = secular_eigenvalues(spec, s, cfg.secular_tolerance);
        rows.push_back({{"s", s}, {"eigenvalues", roots.eigenvalues()}, {"gap", roots.gap(spec)}});
      }
      emit(g, {{"spectrum", to_json(spec)}, {"profile", to_json(spectral_params(spec, cfg.c))}, {"eigenvalues", rows}});
    } else if (scan_cmd->parsed()) {
      const auto spec = load_problem(read_input(in.input), cfg, true);
      const auto cert = certificate(spectral_params(spec, cfg.c), cfg.certificate_options());
      const std::size_t points = g.grid.value_or(cfg.scan_points);
      const auto scan = gap_scan(cert, spec, points);
      if (csv) {
        std::vector<CsvRow> rows;
        for (const auto& r : scan) rows.push_back({cell(r.s), cell(r.g_true), cell(r.g_lower), std::string(region_name(r.region))});
        emit_csv(g, {"s", "g_true", "g_lower", "region"}, rows);
        return 0;
      }
      Json rows = Json::array();
      for (const auto& r : scan) rows.push_back({r.s, r.g_true, r.g_lower, region_name(r.region)});
      emit(g, {{"within_regime", cert.within_regime()},
               {"soundness", to_json(soundness_scan(cert, spec, points))},
               {"columns", {"s", "g_true", "g_lower", "region"}},
               {"rows", rows}});
    } else if (certify_cmd->parsed()) {
      const auto spec = load_problem(read_input(in.input), cfg, true);
      const auto profile = spectral_params(spec, cfg.c);
      const auto cert = certificate(profile, cfg.certificate_options());
      const std::size_t points = g.grid.value_or(cfg.scan_points);
      const auto sound = soundness_scan(cert, spec, points);
      const auto sandwich = window_sandwich_check(profile, spec, cfg.window_points, cfg.eta);
      const auto brackets = bracket_check(profile, spec, cfg.window_points, cfg.eta);
      const auto left = left_variational_check(profile, spec);
      const auto right = right_region_check(cert, spec);
      const auto minimum = locate_minimum(profile, spec);
      const bool passed = sound.violations == 0 && sandwich.violations == 0 && brackets.violations == 0 &&
                          left.violations == 0 && right.bound_violations == 0 &&
                          right.monotonicity_violations == 0 && minimum.inside_window;
      emit(g, {{"profile", to_json(profile)},
               {"certificate", to_json(cert)},
               {"soundness", to_json(sound)},
               {"sandwich", to_json(sandwich)},
               {"brackets", to_json(brackets)},
               {"left_variational", to_json(left)},
               {"right_region", to_json(right)},
               {"minimum", to_json(minimum)},
               {"passed", passed}});
    } else if (schedule_cmd->parsed()) {
      apply_constants(cfg, in);
      const auto spec = load_problem(read_input(in.input), cfg, true);
      if (g.grid) cfg.table_points = *g.grid;
      const auto plan = plan_for(spec, cfg);
      if (csv) {
        std::vector<CsvRow> rows;
        for (const auto& r : plan.table()) rows.push_back({cell(r.s), cell(r.elapsed), cell(r.rate), cell(r.gap_bound)});
        emit_csv(g, {"s", "elapsed", "rate", "gap_bound"}, rows);
        return 0;
      }
      emit(g, {{"within_regime", plan.certificate().within_regime()}, {"plan", to_json(plan, with_table)}});
    } else if (evolve_cmd->parsed()) {
      apply_constants(cfg, in);
      const auto spec = load_problem(read_input(in.input), cfg, true);
      auto options = cfg.evolve_options();
      options.integrator = parse_integrator(integrator);
      Json out;
      if (uniform_time) {
        out["uniform"] = to_json(uniform_baseline(spec, *uniform_time, options));
      } else {
        if (!(scale > 0)) throw DomainError("--scale must be positive");
        const auto plan = plan_for(spec, cfg).scaled(scale);
        const auto result = evolve(spec, plan, options);
        out["within_regime"] = plan.certificate().within_regime();
        out["planned_total_time"] = plan.total_time();
        out["local"] = to_json(result);
        if (baseline) out["uniform"] = to_json(uniform_baseline(spec, plan.total_time(), options));
      }
      emit(g, out);
    } else if (scaling_cmd->parsed()) {
      apply_constants(cfg, in);
      ScalingOptions options;
      options.c = cfg.c;
      options.certificate = cfg.certificate_options();
      options.schedule = cfg.schedule_options();
      options.evolve = cfg.evolve_options();
      options.run_evolution = !no_evolve;
      std::function<DegeneracySpectrum(int)> make;
      if (family == "grover") {
        make = [d0](int n) { return grover_spectrum(n, d0); };
      } else if (family == "gaussian") {
        make = [=](int n) {
          return gaussian_spectrum(n, levels, width, (static_cast<double>(levels) - 1) / 2, d0);
        };
      } else {
        throw ParseError("unknown family " + family);
      }
      const auto table = scaling_experiment(make, sizes, cfg.eps, cfg.p, options);
      if (csv) {
        std::vector<CsvRow> rows;
        for (const auto& r : table.rows) {
          rows.push_back({std::to_string(r.n), cell(r.total_time), cell(r.fidelity), cell(r.g_min),
                          cell(r.g_min_identity), r.error.empty() ? "" : "\"" + r.error + "\""});
        }
        emit_csv(g, {"n", "total_time", "fidelity", "g_min", "g_min_identity", "error"}, rows);
        return 0;
      }
      emit(g, {{"family", family}, {"eps", cfg.eps}, {"p", cfg.p}, {"table", to_json(table)}});
    } else if (extract_cmd->parsed()) {
      parse_oracle(oracle_mode, epsilon_text, success);
      auto hidden = load_hamiltonian(read_input(in.input), cfg);
      const auto gaps = hidden.integer_gaps();
      const int n = hidden.qubits();
      ExtractionTranscript t;
      if (oracle_mode == "exact") {
        ExactOracle oracle(std::move(hidden));
        t = extract_degeneracies(oracle, gaps);
      } else if (oracle_mode == "noisy") {
        const Rational eps = epsilon_text.empty() ? Rational(noise_budget(n, gaps).budget / 10)
                                                  : parse_rational(epsilon_text);
        std::unique_ptr<NoisyOracle> oracle =
            signs.empty() ? std::make_unique<NoisyOracle>(std::move(hidden), eps, cfg.seed)
                          : std::make_unique<NoisyOracle>(std::move(hidden), eps, signs);
        t = extract_degeneracies_noisy(*oracle, gaps);
      } else if (oracle_mode == "probabilistic") {
        const Rational eps = epsilon_text.empty() ? Rational(0) : parse_rational(epsilon_text);
        ProbabilisticOracle oracle(std::move(hidden), eps, success, cfg.seed);
        t = probabilistic_extraction(oracle, gaps, {samples, votes});
      } else {
        throw ParseError("unknown oracle mode " + oracle_mode);
      }
      emit(g, {{"oracle", oracle_mode}, {"transcript", to_json(t)}});
    } else if (sat_cmd->parsed()) {
      SatInstance instance;
      if (dimacs == "-") {
        instance = read_dimacs(std::cin);
      } else {
        std::ifstream f(dimacs);
        if (!f) throw ParseError("cannot open " + dimacs);
        instance = read_dimacs(f);
      }
      const SatGadget gadget(instance, cfg.sat_ceiling);
      const auto verdict = decide_sat(instance, cfg.sat_ceiling);
      Json out = {{"variables", instance.variables},
                  {"clauses", instance.clauses.size()},
                  {"qubits", gadget.qubits()},
                  {"levels", gadget.spectrum().size()},
                  {"ground_energy", to_string(verdict.ground_energy)},
                  {"satisfiable", verdict.satisfiable},
                  {"disambiguation", to_json(verdict.decision)}};
      if (instance.variables <= 30) out["brute_force_satisfiable"] = brute_force_satisfiable(instance);
      emit(g, out);
    } else if (bounds_cmd->parsed()) {
      const auto spec = load_problem(read_input(in.input), cfg, true);
      const std::size_t points = g.grid.value_or(cfg.bounds_points);
      std::vector<double> grid;
      for (std::size_t i = 1; i <= points; ++i) grid.push_back(static_cast<double>(i) / static_cast<double>(points + 1));
      emit(g, to_json(verify_projector_bounds(spec, grid)));
    }
  } catch (const PrecisionInsufficient& e) {
    std::cerr << "error: " << e.what() << " (required epsilon " << e.required_epsilon() << ")\n";
    return e.exit_code();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::parse);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::numerical);
  }
  return 0;
}
