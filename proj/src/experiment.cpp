#include "tgv1d/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <locale>
#include <set>
#include <sstream>

#include "tgv1d/json_io.hpp"

namespace tgv1d {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s = "invalid config:";
  for (const auto& p : v) s += "\n  - " + p;
  return s;
}

class Checker {
 public:
  std::vector<std::string> problems;

  void unknown_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || it.key() == a;
      if (!ok) problems.push_back(where + ": unknown key '" + it.key() + "'");
    }
  }
  bool object(const json& j, const std::string& where) {
    if (j.is_object()) return true;
    problems.push_back(where + ": must be an object");
    return false;
  }
  std::optional<double> positive(const json& j, const char* key, const std::string& where, bool required) {
    if (!j.contains(key)) {
      if (required) problems.push_back(where + "." + key + ": required");
      return std::nullopt;
    }
    if (!j.at(key).is_number() || !(j.at(key).get<double>() > 0.0) || !std::isfinite(j.at(key).get<double>())) {
      problems.push_back(where + "." + key + ": must be a finite number > 0");
      return std::nullopt;
    }
    return j.at(key).get<double>();
  }
  std::optional<double> nonnegative(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_number() || !(j.at(key).get<double>() >= 0.0)) {
      problems.push_back(where + "." + key + ": must be a number >= 0");
      return std::nullopt;
    }
    return j.at(key).get<double>();
  }
  std::optional<long long> integer(const json& j, const char* key, const std::string& where, long long min) {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_number_integer() || j.at(key).get<long long>() < min) {
      problems.push_back(where + "." + key + ": must be an integer >= " + std::to_string(min));
      return std::nullopt;
    }
    return j.at(key).get<long long>();
  }
};

void parse_solver(const json& s, ExperimentConfig& cfg, Checker& c) {
  if (!c.object(s, "solver")) return;
  c.unknown_keys(s, "solver",
                 {"tol_psi", "max_iter", "newton_starts", "newton_tol", "newton_max_steps", "scan_points",
                  "kkt_tol", "subproblem_max_iter", "cluster_tol", "prune_threshold", "duplicate_policy",
                  "initial_atoms", "allow_kinkless", "threads"});
  auto& sc = cfg.solver;
  if (auto v = c.positive(s, "tol_psi", "solver", false)) sc.tol_psi = *v;
  if (auto v = c.integer(s, "max_iter", "solver", 1)) sc.max_iter = int(*v);
  if (auto v = c.integer(s, "newton_starts", "solver", 2)) sc.extrema.starts = int(*v);
  if (auto v = c.positive(s, "newton_tol", "solver", false)) sc.extrema.newton_tol = *v;
  if (auto v = c.integer(s, "newton_max_steps", "solver", 1)) sc.extrema.newton_max_steps = int(*v);
  if (auto v = c.integer(s, "scan_points", "solver", 2)) sc.extrema.scan_points = std::size_t(*v);
  if (auto v = c.integer(s, "threads", "solver", 0)) sc.extrema.threads = unsigned(*v);
  if (auto v = c.positive(s, "kkt_tol", "solver", false)) sc.subproblem.kkt_tol = *v;
  if (auto v = c.integer(s, "subproblem_max_iter", "solver", 1)) sc.subproblem.max_iter = int(*v);
  if (auto v = c.nonnegative(s, "cluster_tol", "solver")) sc.cluster_tol = *v;
  if (auto v = c.nonnegative(s, "prune_threshold", "solver")) sc.prune_threshold = *v;
  if (s.contains("allow_kinkless")) {
    if (s.at("allow_kinkless").is_boolean())
      sc.allow_kinkless = s.at("allow_kinkless").get<bool>();
    else
      c.problems.push_back("solver.allow_kinkless: must be a boolean");
  }
  if (s.contains("duplicate_policy")) {
    const auto& d = s.at("duplicate_policy");
    if (d == "keep")
      sc.duplicates = DuplicatePolicy::Keep;
    else if (d == "refresh")
      sc.duplicates = DuplicatePolicy::Refresh;
    else
      c.problems.push_back("solver.duplicate_policy: must be \"keep\" or \"refresh\"");
  }
  if (s.contains("initial_atoms")) {
    if (!s.at("initial_atoms").is_array()) {
      c.problems.push_back("solver.initial_atoms: must be an array");
      return;
    }
    for (const auto& a : s.at("initial_atoms")) {
      try {
        ExtremalAtom atom;
        atom.kind = atom_kind_from_string(a.at("kind").get<std::string>());
        atom.position = a.at("x").get<double>();
        atom.sign = a.value("sign", 1);
        if (atom.sign != 1 && atom.sign != -1) throw std::invalid_argument("sign must be -1 or 1");
        sc.initial_atoms.push_back(atom);
      } catch (const std::exception& e) {
        c.problems.push_back(std::string("solver.initial_atoms: ") + e.what());
      }
    }
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

ExperimentConfig parse_experiment_config(const json& j) {
  Checker c;
  ExperimentConfig cfg;
  if (!c.object(j, "config")) throw ConfigError(c.problems);
  c.unknown_keys(j, "config", {"problem", "measurements", "ground_truth", "data", "noise", "solver", "outputs"});

  if (!j.contains("problem"))
    c.problems.push_back("problem: required");
  else if (c.object(j.at("problem"), "problem")) {
    const auto& p = j.at("problem");
    c.unknown_keys(p, "problem", {"T", "alpha", "beta"});
    const auto T = c.positive(p, "T", "problem", true);
    const auto a = c.positive(p, "alpha", "problem", true);
    const auto b = c.positive(p, "beta", "problem", true);
    if (T && a && b) cfg.params = TgvParams{*a, *b, *T};
  }

  if (!j.contains("measurements"))
    c.problems.push_back("measurements: required");
  else if (c.object(j.at("measurements"), "measurements")) {
    const auto& m = j.at("measurements");
    c.unknown_keys(m, "measurements", {"frequencies", "generator"});
    if (m.contains("frequencies") == m.contains("generator"))
      c.problems.push_back("measurements: give exactly one of 'frequencies' and 'generator'");
    else if (m.contains("frequencies")) {
      const auto& f = m.at("frequencies");
      if (!f.is_array() || f.empty() || !std::all_of(f.begin(), f.end(), [](const json& x) { return x.is_number(); }))
        c.problems.push_back("measurements.frequencies: must be a non-empty array of numbers");
      else
        cfg.frequencies = f.get<std::vector<double>>();
    } else if (c.object(m.at("generator"), "measurements.generator")) {
      const auto& g = m.at("generator");
      c.unknown_keys(g, "measurements.generator", {"count", "rule", "spacing"});
      const auto count = c.integer(g, "count", "measurements.generator", 1);
      if (!g.contains("count")) c.problems.push_back("measurements.generator.count: required");
      if (g.value("rule", std::string("equispaced")) != "equispaced")
        c.problems.push_back("measurements.generator.rule: only \"equispaced\" is supported");
      const auto spacing = c.positive(g, "spacing", "measurements.generator", true);
      if (count && spacing) cfg.frequencies = equispaced_frequencies(std::size_t(*count), *spacing);
    }
  }

  const bool has_truth = j.contains("ground_truth"), has_data = j.contains("data");
  if (has_truth == has_data) c.problems.push_back("config: give exactly one of 'ground_truth' and 'data'");
  if (has_truth) {
    try {
      cfg.ground_truth = sparse_function_from_json(j.at("ground_truth"));
      if (cfg.ground_truth->T() != cfg.params.T)
        c.problems.push_back("ground_truth.T: must equal problem.T");
    } catch (const std::exception& e) {
      c.problems.push_back(std::string("ground_truth: ") + e.what());
    }
  }
  if (has_data) {
    const auto& d = j.at("data");
    if (!d.is_array())
      c.problems.push_back("data: must be an array of {re, im}");
    else
      for (const auto& e : d) {
        if (!e.is_object() || !e.contains("re") || !e.contains("im") || !e.at("re").is_number() ||
            !e.at("im").is_number()) {
          c.problems.push_back("data: every entry needs numeric 're' and 'im'");
          break;
        }
        cfg.data.emplace_back(e.at("re").get<double>(), e.at("im").get<double>());
      }
    if (!cfg.frequencies.empty() && cfg.data.size() != cfg.frequencies.size())
      c.problems.push_back("data: length must equal the number of frequencies");
  }

  if (j.contains("noise") && c.object(j.at("noise"), "noise")) {
    const auto& n = j.at("noise");
    c.unknown_keys(n, "noise", {"level", "seed"});
    if (auto v = c.nonnegative(n, "level", "noise")) cfg.noise_level = *v;
    if (n.contains("seed")) {
      if (n.at("seed").is_number_unsigned())
        cfg.seed = n.at("seed").get<std::uint64_t>();
      else
        c.problems.push_back("noise.seed: must be a nonnegative integer");
    }
    if (has_data && cfg.noise_level > 0.0) c.problems.push_back("noise: only applies to ground_truth configs");
  }

  if (j.contains("solver")) parse_solver(j.at("solver"), cfg, c);
  cfg.solver.params = cfg.params;

  if (j.contains("outputs") && c.object(j.at("outputs"), "outputs")) {
    const auto& o = j.at("outputs");
    c.unknown_keys(o, "outputs", {"dir", "sample_points"});
    if (o.contains("dir")) {
      if (o.at("dir").is_string())
        cfg.output_dir = o.at("dir").get<std::string>();
      else
        c.problems.push_back("outputs.dir: must be a string");
    }
    if (auto v = c.integer(o, "sample_points", "outputs", 2)) cfg.sample_points = std::size_t(*v);
  }

  if (c.problems.empty()) {
    try {
      cfg.solver.validate();
    } catch (const std::exception& e) {
      c.problems.push_back(e.what());
    }
    try {
      measurements_for(cfg).validate();
    } catch (const std::exception& e) {
      c.problems.push_back(e.what());
    }
  }
  if (!c.problems.empty()) throw ConfigError(c.problems);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }
  return parse_experiment_config(j);
}

MeasurementSetup measurements_for(const ExperimentConfig& cfg) {
  if (cfg.ground_truth) return synthesize(*cfg.ground_truth, cfg.frequencies, cfg.noise_level, cfg.seed);
  MeasurementSetup s;
  s.T = cfg.params.T;
  s.frequencies = cfg.frequencies;
  s.data = cfg.data;
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.config = cfg;
  r.setup = measurements_for(cfg);
  const FourierFidelity fidelity(r.setup);
  const GcgSolver solver(fidelity, cfg.solver);
  r.run = solver.run();
  r.misfit = misfit(r.run.solution, r.setup);
  r.lipschitz = gradient_lipschitz(r.setup.frequencies, r.setup.T);
  return r;
}

json report_json(const ExperimentResult& r) {
  const auto& rep = r.run.report;
  const std::size_t M = r.setup.size();
  const std::size_t atoms = r.run.solution.atom_count();
  json j;
  j["stationary"] = r.run.stationary;
  j["iterations"] = r.run.iterations;
  j["psi"] = r.run.psi;
  j["tol_psi"] = r.config.solver.tol_psi;
  j["M0"] = r.run.M0;
  j["misfit"] = r.misfit;
  j["sum_lambda"] = r.run.solution.weight_sum();
  j["objective"] = r.misfit + r.run.solution.weight_sum();
  j["lipschitz"] = r.lipschitz;
  j["optimality"] = {{"bounds_ok", rep.bounds_ok},       {"boundary_ok", rep.boundary_ok},
                     {"support_ok", rep.support_ok},     {"stationary", rep.stationary},
                     {"sup_p", rep.sup_p},               {"sup_P", rep.sup_P},
                     {"p_at_T", rep.p_at_T},             {"P_at_T", rep.P_at_T},
                     {"max_support_residual", rep.max_support_residual},
                     {"failures", rep.failures},         {"tol", 1e-6}};
  j["sparsity"] = {{"atoms", atoms},
                   {"bound", 2 * M - 2},
                   {"within_bound", atoms <= 2 * M - 2},
                   {"max_active", r.run.max_active}};
  j["clustered"] = {{"cluster_tol", r.config.solver.cluster_tol},
                    {"atoms", r.run.clustered.atom_count()},
                    {"relative_objective_change", r.run.clustering_relative_change},
                    {"function", to_json(r.run.clustered)}};
  return j;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw std::ios_base::failure("cannot write " + p.string());
  f.imbue(std::locale::classic());
  f.precision(17);
  return f;
}

}  // namespace

std::string duals_csv(const SparseFunction& u, const MeasurementSetup& setup, std::size_t samples,
                      const ExtremaOptions& opts) {
  const auto dp = dual_pair(gradient_function(residual(u, setup), setup.frequencies), setup.T, opts);
  std::set<double> xs;
  for (std::size_t i = 0; i < samples; ++i) xs.insert(setup.T * double(i) / double(samples - 1));
  xs.insert(dp.sup_p.position);
  xs.insert(dp.sup_P.position);
  for (const auto& a : u.jumps()) xs.insert(a.position);
  for (const auto& a : u.kinks()) xs.insert(a.position);
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << "x,p,P\n";
  for (double x : xs) os << x << ',' << dp.p(x) << ',' << dp.P(x) << '\n';
  return os.str();
}

void write_outputs(const ExperimentResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  open_out(dir / "solution.json") << to_json(r.run.solution).dump(2) << '\n';
  {
    auto f = open_out(dir / "history.csv");
    write_history_csv(f, r.run.history);
  }
  open_out(dir / "duals.csv") << duals_csv(r.run.solution, r.setup, r.config.sample_points,
                                           r.config.solver.extrema);
  {
    auto f = open_out(dir / "reconstruction.csv");
    f << "x,u\n";
    const std::size_t n = r.config.sample_points;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = r.setup.T * double(i) / double(n - 1);
      f << x << ',' << r.run.solution(x) << '\n';
    }
  }
  open_out(dir / "report.json") << report_json(r).dump(2) << '\n';
}

}  // namespace tgv1d
