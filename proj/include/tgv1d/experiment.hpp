// Batch experiment: config -> measurements -> solver run -> output files.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tgv1d/fourier_fidelity.hpp"
#include "tgv1d/function_space.hpp"
#include "tgv1d/gcg_solver.hpp"

namespace tgv1d {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct ExperimentConfig {
  TgvParams params;
  std::vector<double> frequencies;
  std::optional<SparseFunction> ground_truth;
  std::vector<cplx> data;  // explicit m^d when no ground truth is given
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  SolverConfig solver;
  std::string output_dir = "out";
  std::size_t sample_points = 1001;
};

/// Collects every problem before throwing ConfigError.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

MeasurementSetup measurements_for(const ExperimentConfig& cfg);

struct ExperimentResult {
  ExperimentConfig config;
  MeasurementSetup setup;
  RunResult run;
  double misfit = 0.0;
  double lipschitz = 0.0;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

nlohmann::json report_json(const ExperimentResult& r);
/// Writes solution.json, history.csv, duals.csv, reconstruction.csv and report.json.
void write_outputs(const ExperimentResult& r, const std::filesystem::path& dir);

/// CSV "x,p,P" of the dual variables of u on a uniform grid plus the
/// extremum and atom positions.
std::string duals_csv(const SparseFunction& u, const MeasurementSetup& setup,
                      std::size_t samples, const ExtremaOptions& opts = {});

}  // namespace tgv1d
