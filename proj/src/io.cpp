#include "aqolab/io.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include "aqolab/errors.hpp"
#include "aqolab/families.hpp"

namespace aqolab {

namespace {

Rational rational_field(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(Integer(v.dump()));
  throw ParseError("expected an exact value as a \"p/q\" string or an integer, got " + v.dump());
}

template <typename T>
T field(const Json& j, const char* name) {
  if (!j.contains(name)) throw ParseError(std::string("missing field \"") + name + "\"");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("field \"") + name + "\": " + e.what());
  }
}

template <typename T>
void optional_field(const Json& j, const char* name, T& out) {
  if (!j.contains(name)) return;
  try {
    out = j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("field \"") + name + "\": " + e.what());
  }
}

std::vector<Level> levels_from_json(const Json& j) {
  if (!j.contains("levels") || !j.at("levels").is_array()) throw ParseError("missing \"levels\" array");
  std::vector<Level> levels;
  for (const auto& l : j.at("levels")) {
    if (!l.is_object()) throw ParseError("each level must be an object");
    levels.push_back({rational_field(l.at("energy")), field<std::uint64_t>(l, "degeneracy")});
  }
  return levels;
}

Json levels_to_json(const std::vector<Level>& levels) {
  Json out = Json::array();
  for (const auto& l : levels) out.push_back({{"energy", to_string(l.energy)}, {"degeneracy", l.degeneracy}});
  return out;
}

Json strings(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

Json strings(const std::vector<Integer>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

// NaN and infinities become null so the output stays valid JSON.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

DegeneracySpectrum family_from_json(const Json& j) {
  const auto name = field<std::string>(j, "family");
  const int n = field<int>(j, "n");
  std::uint64_t d0 = 1;
  optional_field(j, "d0", d0);
  if (name == "grover") return grover_spectrum(n, d0);
  if (name == "gaussian") {
    const auto levels = field<std::size_t>(j, "levels");
    double width = 1.0;
    double centre = (static_cast<double>(levels) - 1) / 2;
    optional_field(j, "width", width);
    optional_field(j, "centre", centre);
    return gaussian_spectrum(n, levels, width, centre, d0);
  }
  throw ParseError("unknown family \"" + name + "\"");
}

bool is_ising(const Json& j) { return j.contains("couplings") || j.contains("fields"); }

}  // namespace

Json to_json(const DegeneracySpectrum& spec) {
  return {{"n", spec.qubits()}, {"levels", levels_to_json(spec.levels())}, {"normalized", spec.normalized()}};
}

DegeneracySpectrum spectrum_from_json(const Json& j) {
  bool normalized = false;
  optional_field(j, "normalized", normalized);
  return DegeneracySpectrum(field<int>(j, "n"), levels_from_json(j), normalized);
}

Json to_json(const DiagonalHamiltonian& h) { return {{"n", h.qubits()}, {"levels", levels_to_json(h.levels())}}; }

DiagonalHamiltonian hamiltonian_from_json(const Json& j) {
  return DiagonalHamiltonian(field<int>(j, "n"), levels_from_json(j));
}

Json to_json(const IsingModel& model) {
  Json couplings = Json::array();
  for (const auto& c : model.couplings) couplings.push_back({c.i, c.j, c.value});
  return {{"n", model.n}, {"couplings", couplings}, {"fields", model.fields}};
}

IsingModel ising_from_json(const Json& j) {
  IsingModel m;
  m.n = field<int>(j, "n");
  if (j.contains("couplings")) {
    for (const auto& c : j.at("couplings")) {
      if (!c.is_array() || c.size() != 3) throw ParseError("couplings are [i, j, J] triples");
      m.couplings.push_back({c[0].get<int>(), c[1].get<int>(), c[2].get<long>()});
    }
  }
  optional_field(j, "fields", m.fields);
  if (m.fields.empty()) m.fields.assign(static_cast<std::size_t>(std::max(m.n, 0)), 0);
  m.validate();
  return m;
}

void RunConfig::validate() const {
  for (double t : {secular_tolerance, continuity_tolerance, norm_tolerance, frame_tolerance}) {
    if (!(t > 0)) throw PreconditionError("tolerances must be positive");
  }
  if (!(c > 0 && c <= 0.022)) throw PreconditionError("c must lie in (0, 0.022]");
  if (!(p > 1 && p <= 2)) throw PreconditionError("p must lie in (1, 2]");
  if (!(eta > 0 && eta < 0.5)) throw PreconditionError("eta must lie in (0, 1/2)");
  if (!(k > 0 && 8 * k * k < 1)) throw PreconditionError("k must lie in (0, 1/sqrt(8))");
  if (!(b > 0 && b <= 1)) throw PreconditionError("b must lie in (0, 1]");
  if (!(eps > 0 && eps < 1)) throw PreconditionError("eps must lie in (0, 1)");
  if (scan_points < 1 || window_points < 2 || bounds_points < 1 || table_points < 2) {
    throw PreconditionError("grid densities are too small");
  }
  if (ising_ceiling < 1 || sat_ceiling < 1) throw PreconditionError("brute-force ceilings must be positive");
}

CertificateOptions RunConfig::certificate_options() const {
  CertificateOptions o;
  o.k = k;
  o.b = b;
  o.continuity_tolerance = continuity_tolerance;
  o.enforce_condition = enforce_condition;
  return o;
}

ScheduleOptions RunConfig::schedule_options() const {
  ScheduleOptions o;
  o.table_points = table_points;
  o.allow_outside_regime = !enforce_condition;
  return o;
}

EvolveOptions RunConfig::evolve_options() const {
  EvolveOptions o;
  o.norm_tolerance = norm_tolerance;
  o.frame_tolerance = frame_tolerance;
  return o;
}

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig r;
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  const Json tol = j.value("tolerances", Json::object());
  optional_field(tol, "secular", r.secular_tolerance);
  optional_field(tol, "continuity", r.continuity_tolerance);
  optional_field(tol, "norm_drift", r.norm_tolerance);
  optional_field(tol, "frame", r.frame_tolerance);
  const Json con = j.value("constants", Json::object());
  optional_field(con, "c", r.c);
  optional_field(con, "eta", r.eta);
  optional_field(con, "k", r.k);
  optional_field(con, "b", r.b);
  optional_field(con, "p", r.p);
  optional_field(con, "eps", r.eps);
  optional_field(con, "enforce_condition", r.enforce_condition);
  const Json grid = j.value("grids", Json::object());
  optional_field(grid, "scan", r.scan_points);
  optional_field(grid, "window", r.window_points);
  optional_field(grid, "bounds", r.bounds_points);
  optional_field(grid, "table", r.table_points);
  const Json ceil = j.value("ceilings", Json::object());
  optional_field(ceil, "ising", r.ising_ceiling);
  optional_field(ceil, "sat", r.sat_ceiling);
  optional_field(j, "seed", r.seed);
  r.validate();
  return r;
}

Json RunConfig::to_json() const {
  return {
      {"tolerances",
       {{"secular", secular_tolerance},
        {"continuity", continuity_tolerance},
        {"norm_drift", norm_tolerance},
        {"frame", frame_tolerance}}},
      {"constants",
       {{"c", c}, {"eta", eta}, {"k", k}, {"b", b}, {"p", p}, {"eps", eps}, {"enforce_condition", enforce_condition}}},
      {"grids",
       {{"scan", scan_points}, {"window", window_points}, {"bounds", bounds_points}, {"table", table_points}}},
      {"ceilings", {{"ising", ising_ceiling}, {"sat", sat_ceiling}}},
      {"seed", seed},
  };
}

DegeneracySpectrum load_problem(const Json& j, const RunConfig& config, bool normalized) {
  if (j.contains("family")) return family_from_json(j);
  DegeneracySpectrum spec =
      is_ising(j) ? enumerate_ising(ising_from_json(j), config.ising_ceiling) : spectrum_from_json(j);
  if (normalized && !spec.normalized()) return normalize(spec).spectrum;
  return spec;
}

DiagonalHamiltonian load_hamiltonian(const Json& j, const RunConfig& config) {
  if (j.contains("family")) return DiagonalHamiltonian(family_from_json(j));
  if (is_ising(j)) return DiagonalHamiltonian(enumerate_ising(ising_from_json(j), config.ising_ceiling));
  return hamiltonian_from_json(j);
}

Json read_json(std::istream& in) {
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_json(in);
}

Json to_json(const SpectralProfile& p) {
  return {{"A1", p.a1},
          {"A2", p.a2},
          {"A3", p.a3},
          {"A1_exact", to_string(p.a1_exact)},
          {"A2_exact", to_string(p.a2_exact)},
          {"delta", p.delta},
          {"s_star", p.s_star},
          {"delta_s", p.delta_s},
          {"g_min", p.g_min},
          {"kappa_prime", p.kappa_prime},
          {"condition_value", p.condition_value},
          {"condition_ok", p.condition_ok},
          {"c", p.c}};
}

Json to_json(const GapCertificate& cert) {
  Json pieces = Json::array();
  for (const auto& piece : cert.pieces()) {
    pieces.push_back({{"region", region_name(piece.region)},
                      {"begin", piece.begin},
                      {"end", piece.end},
                      {"value_at_begin", piece.value(piece.begin)},
                      {"slope", piece.slope}});
  }
  Json seams = Json::array();
  for (const auto& s : cert.seams()) seams.push_back({{"s", s.s}, {"left", s.left}, {"right", s.right}});
  return {{"k", cert.k()},     {"b", cert.b()},           {"a", cert.a()},
          {"s0", cert.s0()},   {"right_scale", cert.right_scale()},
          {"within_regime", cert.within_regime()},
          {"max_slope", cert.max_slope()},
          {"pieces", pieces},  {"seams", seams}};
}

Json to_json(const SoundnessReport& r) {
  return {{"points", r.points},
          {"violations", r.violations},
          {"max_excess", r.max_excess},
          {"min_ratio", number(r.min_ratio)}};
}

Json to_json(const SandwichReport& r) {
  return {{"points", r.points}, {"lower", r.lower},     {"upper", r.upper},
          {"min_gap", r.min_gap}, {"max_gap", r.max_gap}, {"violations", r.violations}};
}

Json to_json(const BracketReport& r) {
  return {{"points", r.points},
          {"violations", r.violations},
          {"plus_ratio", {r.plus_ratio_min, r.plus_ratio_max}},
          {"minus_ratio", {r.minus_ratio_min, r.minus_ratio_max}}};
}

Json to_json(const VariationalReport& r) {
  return {{"points", r.points}, {"violations", r.violations}, {"max_excess", r.max_excess}};
}

Json to_json(const RightRegionReport& r) {
  return {{"points", r.points},
          {"monotonicity_violations", r.monotonicity_violations},
          {"bound_violations", r.bound_violations},
          {"f_at_start", r.f_at_start},
          {"max_bound_ratio", r.max_bound_ratio}};
}

Json to_json(const MinimumLocation& r) {
  return {{"s", r.s}, {"gap", r.gap}, {"inside_window", r.inside_window}};
}

Json to_json(const SchedulePlan& plan, bool with_table) {
  Json out = {{"p", plan.p()},
              {"eps", plan.eps()},
              {"c", plan.c_const()},
              {"B1", plan.b1()},
              {"B2", plan.b2()},
              {"quadrature_rate", plan.bounds().quadrature_rate},
              {"quadrature_comp", plan.bounds().quadrature_comp},
              {"rate_law_constant", plan.rate_law_constant()},
              {"total_time", plan.total_time()},
              {"time_bound", plan.time_bound()},
              {"breakpoints", plan.breakpoints()}};
  if (with_table) {
    Json rows = Json::array();
    for (const auto& r : plan.table()) rows.push_back({r.s, r.elapsed, r.rate, r.gap_bound});
    out["table_columns"] = {"s", "elapsed", "rate", "gap_bound"};
    out["table"] = rows;
  }
  return out;
}

Json to_json(const EvolutionResult& r) {
  Json amps = Json::array();
  for (Eigen::Index k = 0; k < r.final_state.size(); ++k) {
    amps.push_back({r.final_state(k).real(), r.final_state(k).imag()});
  }
  return {{"integrator", integrator_name(r.integrator)},
          {"total_time", r.total_time},
          {"fidelity", r.fidelity},
          {"steps", r.steps},
          {"max_local_error", r.max_local_error},
          {"norm_drift", r.norm_drift},
          {"final_state", amps}};
}

Json to_json(const ProjectorBoundsReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points) {
    points.push_back({{"s", p.s},
                      {"gap", p.gap},
                      {"derivative_norm", p.derivative_norm},
                      {"derivative_bound", p.derivative_bound},
                      {"commutator_norm", p.commutator_norm},
                      {"commutator_bound", p.commutator_bound},
                      {"flagged", p.flagged}});
  }
  return {{"max_derivative_ratio", r.max_derivative_ratio},
          {"max_commutator_ratio", r.max_commutator_ratio},
          {"excluded", r.excluded},
          {"notes", r.notes},
          {"points", points}};
}

Json to_json(const ScalingTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row = {{"n", r.n},
                {"total_time", r.total_time},
                {"fidelity", r.fidelity},
                {"g_min", r.g_min},
                {"g_min_identity", r.g_min_identity}};
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(row);
  }
  return {{"rows", rows}, {"slope", number(t.slope)}, {"intercept", number(t.intercept)}};
}

Json to_json(const ExtractionTranscript& t) {
  Json samples = Json::array();
  for (const auto& s : t.samples) samples.push_back({{"x", to_string(s.x)}, {"f", to_string(s.f)}, {"P", to_string(s.p)}});
  Json out = {{"method", t.method},
              {"n", t.qubits},
              {"gaps", strings(t.gaps)},
              {"samples", samples},
              {"polynomial", strings(t.polynomial.coefficients())},
              {"raw_degeneracies", strings(t.raw_degeneracies)},
              {"degeneracies", strings(t.degeneracies)},
              {"margins", strings(t.margins)},
              {"margin_ok", t.margin_ok},
              {"epsilon", to_string(t.epsilon)},
              {"error_positions", t.error_positions},
              {"oracle_calls", t.oracle_calls}};
  if (t.epsilon_budget) out["epsilon_budget"] = to_string(*t.epsilon_budget);
  if (t.epsilon_formula) out["epsilon_formula"] = to_string(*t.epsilon_formula);
  if (t.method == "probabilistic") out["votes"] = t.votes;
  if (t.success_bound) out["success_bound"] = *t.success_bound;
  return out;
}

Json to_json(const DisambiguationResult& r) {
  return {{"verdict", verdict_name(r.verdict)},
          {"difference", to_string(r.difference)},
          {"epsilon", to_string(r.epsilon)},
          {"separation", to_string(r.separation)},
          {"separation_guaranteed", r.separation_guaranteed},
          {"oracle_calls", r.oracle_calls}};
}

}  // namespace aqolab
