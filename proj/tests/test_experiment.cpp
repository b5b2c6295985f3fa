#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "common.hpp"
#include "tgv1d/experiment.hpp"
#include "tgv1d/json_io.hpp"

using namespace tgv1d;
using nlohmann::json;

namespace {

json base_config() {
  return json::parse(R"({
    "problem": {"T": 10, "alpha": 2.205, "beta": 2.5344},
    "measurements": {"generator": {"count": 8, "rule": "equispaced", "spacing": 1.1111111111111112}},
    "ground_truth": {"T": 10, "alpha": 2.205, "beta": 2.5344, "a": 3, "b": 2,
                     "jumps": [{"x": 6.3, "coef": 5}, {"x": 9.1, "coef": -8.3}],
                     "kinks": [{"x": 2, "coef": -4.5}, {"x": 7.8, "coef": -8.2}]},
    "noise": {"level": 0.1, "seed": 27}
  })");
}

std::vector<std::string> problems_of(const json& j) {
  try {
    parse_experiment_config(j);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

}  // namespace

TEST_CASE("json forms of sparse functions") {
  const auto u = fixtures::truth();
  const auto back = sparse_function_from_json(to_json(u));
  CHECK(back.jumps().size() == 2);
  CHECK(back.kinks().size() == 2);
  for (double x : {0.0, 1.0, 6.3, 8.0, 10.0}) CHECK(back(x) == u(x));
  const auto coef = sparse_function_from_json(base_config()["ground_truth"]);
  for (double x : {0.0, 1.0, 6.3, 8.0, 10.0}) CHECK(coef(x) == doctest::Approx(u(x)).epsilon(1e-14));

  CHECK_THROWS(sparse_function_from_json(json::parse(R"({"T": 10})")));
  CHECK_THROWS(sparse_function_from_json(
      json::parse(R"({"T": 10, "alpha": 1, "beta": 1, "a": 0, "b": 0, "jumps": [{"x": 11, "sign": 1, "weight": 1}], "kinks": []})")));
}

TEST_CASE("json forms of measurement setups") {
  const auto s = fixtures::setup();
  const auto back = measurement_setup_from_json(to_json(s));
  CHECK(back.frequencies == s.frequencies);
  CHECK(back.data == s.data);
  CHECK(back.T == s.T);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_experiment_config(base_config());
  CHECK(cfg.frequencies.size() == 8);
  CHECK(cfg.frequencies[7] == doctest::Approx(80.0 / 9.0));
  CHECK(cfg.ground_truth.has_value());
  CHECK(cfg.seed == 27);
  CHECK(cfg.solver.params.beta == 2.5344);
  CHECK(cfg.output_dir == "out");

  auto j = base_config();
  j["solver"] = {{"tol_psi", 1e-9}, {"duplicate_policy", "refresh"}, {"initial_atoms", {{{"kind", "kink"}, {"x", 5.0}, {"sign", -1}}}}};
  const auto c2 = parse_experiment_config(j);
  CHECK(c2.solver.tol_psi == 1e-9);
  CHECK(c2.solver.duplicates == DuplicatePolicy::Refresh);
  CHECK(c2.solver.initial_atoms.size() == 1);
}

TEST_CASE("config diagnostics are collected") {
  auto j = base_config();
  j["problem"]["alpha"] = -1;
  j["noise"]["level"] = "high";
  j["extra"] = 1;
  j["data"] = json::array();
  const auto p = problems_of(j);
  CHECK(p.size() >= 4);

  auto k = base_config();
  k.erase("ground_truth");
  CHECK(problems_of(k).size() == 1);

  auto m = base_config();
  m["measurements"]["frequencies"] = {1.0, 2.0};
  CHECK_FALSE(problems_of(m).empty());

  auto d = base_config();
  d.erase("ground_truth");
  d.erase("noise");
  d["data"] = {{{"re", 1.0}, {"im", 0.0}}};
  CHECK_FALSE(problems_of(d).empty());  // length mismatch

  auto s = base_config();
  s["solver"] = {{"no_such_field", 1}};
  CHECK_FALSE(problems_of(s).empty());

  auto r = base_config();
  r["problem"]["beta"] = 100.0;  // no extremal kinks
  CHECK_FALSE(problems_of(r).empty());
}

TEST_CASE("explicit data configs") {
  auto j = base_config();
  const auto s = fixtures::setup();
  j.erase("ground_truth");
  j.erase("noise");
  j["data"] = to_json(s)["data"];
  const auto cfg = parse_experiment_config(j);
  CHECK(measurements_for(cfg).data == s.data);
}

TEST_CASE("outputs of a run") {
  auto cfg = parse_experiment_config(base_config());
  cfg.sample_points = 201;
  const auto r = run_experiment(cfg);
  CHECK(r.run.stationary);
  const auto dir = std::filesystem::temp_directory_path() / "tgv1d_experiment_test";
  std::filesystem::remove_all(dir);
  write_outputs(r, dir);
  for (const char* f : {"solution.json", "history.csv", "duals.csv", "reconstruction.csv", "report.json"})
    CHECK(std::filesystem::exists(dir / f));

  // The stored solution reproduces the reported misfit.
  std::ifstream in(dir / "solution.json");
  const auto u = sparse_function_from_json(json::parse(in));
  CHECK(std::abs(misfit(u, r.setup) - r.misfit) <= 1e-12);

  std::ifstream rep(dir / "report.json");
  const auto report = json::parse(rep);
  CHECK(report["sparsity"]["bound"] == 14);
  CHECK(report["optimality"]["stationary"] == true);

  std::ifstream rec(dir / "reconstruction.csv");
  std::string line;
  std::getline(rec, line);
  CHECK(line == "x,u");
  int rows = 0;
  while (std::getline(rec, line)) ++rows;
  CHECK(rows == 201);
  std::filesystem::remove_all(dir);
}
