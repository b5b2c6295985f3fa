// Command-line front end. Talks to the library only through the C API.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "tgv1d/tgv1d.h"

namespace {

int report(tgv1d_status s) {
  std::cerr << "error (" << tgv1d_status_name(s) << "): " << tgv1d_last_error() << '\n';
  return static_cast<int>(s);
}

struct CString {
  char* p = nullptr;
  ~CString() { tgv1d_string_free(p); }
};

int cmd_solve(const std::string& config, const std::string& out) {
  tgv1d_run* run = nullptr;
  if (auto s = tgv1d_run_from_config(config.c_str(), &run)) return report(s);
  std::unique_ptr<tgv1d_run, void (*)(tgv1d_run*)> guard(run, tgv1d_run_free);
  CString dir;
  if (out.empty())
    if (auto s = tgv1d_run_output_dir(run, &dir.p)) return report(s);
  const std::string target = out.empty() ? std::string(dir.p) : out;
  if (auto s = tgv1d_run_write_outputs(run, target.c_str())) return report(s);
  int stationary = 0, iterations = 0;
  tgv1d_run_stationary(run, &stationary);
  tgv1d_run_iterations(run, &iterations);
  std::cerr << (stationary ? "stationary" : "NOT stationary") << " after " << iterations
            << " iterations; outputs in " << target << '\n';
  CString rep;
  if (auto s = tgv1d_run_report_json(run, &rep.p)) return report(s);
  std::cout << rep.p << '\n';
  return 0;
}

int cmd_tgv_eval(const std::string& input, std::size_t grid_n, double tol) {
  tgv1d_function* f = nullptr;
  if (auto s = tgv1d_function_load(input.c_str(), &f)) return report(s);
  std::unique_ptr<tgv1d_function, void (*)(tgv1d_function*)> guard(f, tgv1d_function_free);
  CString out;
  if (auto s = tgv1d_tgv_eval(f, grid_n, tol, &out.p)) return report(s);
  std::cout << out.p << '\n';
  return 0;
}

int cmd_counterexample(double l1, double l2) {
  CString out;
  if (auto s = tgv1d_counterexample(l1, l2, &out.p)) return report(s);
  std::cout << out.p << '\n';
  return 0;
}

int cmd_dump_duals(const std::string& solution, const std::string& config, std::size_t samples,
                   const std::string& out) {
  CString csv;
  if (auto s = tgv1d_dump_duals(solution.c_str(), config.c_str(), samples, &csv.p)) return report(s);
  if (out.empty()) {
    std::cout << csv.p;
    return 0;
  }
  std::ofstream f(out);
  if (!(f << csv.p)) {
    std::cerr << "error: cannot write " << out << '\n';
    return static_cast<int>(TGV1D_ERR_IO);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse TGV-regularized reconstruction in one dimension"};
  app.set_version_flag("--version", std::string(tgv1d_version()));
  app.require_subcommand(1);

  std::string config, out;
  auto* solve = app.add_subcommand("solve", "run an experiment config and write its outputs");
  solve->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "output directory (overrides outputs.dir)");

  std::string input;
  std::size_t grid_n = 20000;
  double tol = 1e-6;
  auto* eval = app.add_subcommand("tgv-eval", "TGV of a sparse function: closed form and grid oracle");
  eval->add_option("--input", input, "sparse function (JSON)")->required()->check(CLI::ExistingFile);
  eval->add_option("--grid-n", grid_n, "uniform grid cells")->check(CLI::Range(std::size_t{100}, std::size_t{100'000'000}));
  eval->add_option("--tol", tol, "duality gap tolerance")->check(CLI::PositiveNumber);

  double l1 = 2.0, l2 = 2.0;
  auto* cex = app.add_subcommand("counterexample", "conic subproblem vs exact objective on the two-kink fixture");
  cex->add_option("--lambda1", l1);
  cex->add_option("--lambda2", l2);

  std::string solution, duals_config, duals_out;
  std::size_t samples = 1001;
  auto* duals = app.add_subcommand("dump-duals", "CSV x,p,P for a solution against a config's data");
  duals->add_option("--solution", solution, "solution JSON")->required()->check(CLI::ExistingFile);
  duals->add_option("--config", duals_config, "experiment config")->required()->check(CLI::ExistingFile);
  duals->add_option("--samples", samples, "uniform samples")->check(CLI::Range(std::size_t{2}, std::size_t{100'000'000}));
  duals->add_option("--out", duals_out, "write CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  if (*solve) return cmd_solve(config, out);
  if (*eval) return cmd_tgv_eval(input, grid_n, tol);
  if (*cex) return cmd_counterexample(l1, l2);
  return cmd_dump_duals(solution, duals_config, samples, duals_out);
}
