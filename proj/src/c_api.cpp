#include "tgv1d/tgv1d.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tgv1d/experiment.hpp"
#include "tgv1d/json_io.hpp"
#include "tgv1d/oracles.hpp"
#include "tgv1d/subproblem.hpp"
#include "tgv1d/tgv_eval.hpp"

struct tgv1d_function {
  tgv1d::SparseFunction u;
};

struct tgv1d_run {
  tgv1d::ExperimentResult result;
};

namespace {

thread_local std::string last_error;

tgv1d_status fail(tgv1d_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

// Maps the library's exception types onto status codes.
template <class F>
tgv1d_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return TGV1D_OK;
  } catch (const tgv1d::ConfigError& e) {
    return fail(TGV1D_ERR_CONFIG, e.what());
  } catch (const tgv1d::OracleFailure& e) {
    return fail(TGV1D_ERR_ORACLE, e.what());
  } catch (const tgv1d::SubproblemFailure& e) {
    return fail(TGV1D_ERR_SOLVER, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(TGV1D_ERR_INVALID_ARGUMENT, std::string("json: ") + e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(TGV1D_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(TGV1D_ERR_IO, e.what());
  } catch (const std::domain_error& e) {
    return fail(TGV1D_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(TGV1D_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(TGV1D_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TGV1D_ERR_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " is null");
}

nlohmann::json read_json_file(const char* path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure(std::string("cannot open ") + path);
  return nlohmann::json::parse(in);
}

std::string dump(const nlohmann::json& j) { return j.dump(2); }

}  // namespace

extern "C" {

const char* tgv1d_version(void) { return "0.1.0"; }

const char* tgv1d_last_error(void) { return last_error.c_str(); }

const char* tgv1d_status_name(tgv1d_status status) {
  switch (status) {
    case TGV1D_OK: return "ok";
    case TGV1D_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TGV1D_ERR_DOMAIN: return "domain error";
    case TGV1D_ERR_CONFIG: return "config error";
    case TGV1D_ERR_IO: return "io error";
    case TGV1D_ERR_SOLVER: return "solver failure";
    case TGV1D_ERR_ORACLE: return "oracle failure";
    case TGV1D_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void tgv1d_string_free(char* s) { std::free(s); }

tgv1d_status tgv1d_function_from_json(const char* json, tgv1d_function** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new tgv1d_function{tgv1d::sparse_function_from_json(nlohmann::json::parse(json))};
  });
}

tgv1d_status tgv1d_function_load(const char* path, tgv1d_function** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new tgv1d_function{tgv1d::sparse_function_from_json(read_json_file(path))};
  });
}

void tgv1d_function_free(tgv1d_function* f) { delete f; }

tgv1d_status tgv1d_function_eval(const tgv1d_function* f, double x, double* out) {
  return guarded([&] {
    require(f, "function");
    require(out, "out");
    *out = f->u(x);
  });
}

tgv1d_status tgv1d_function_atom_count(const tgv1d_function* f, size_t* out) {
  return guarded([&] {
    require(f, "function");
    require(out, "out");
    *out = f->u.atom_count();
  });
}

tgv1d_status tgv1d_function_to_json(const tgv1d_function* f, char** out) {
  return guarded([&] {
    require(f, "function");
    require(out, "out");
    *out = dup_string(dump(tgv1d::to_json(f->u)));
  });
}

tgv1d_status tgv1d_tgv_eval(const tgv1d_function* f, size_t grid_n, double tol, char** out_json) {
  return guarded([&] {
    require(f, "function");
    require(out_json, "out_json");
    if (grid_n < 100) throw std::invalid_argument("grid_n must be >= 100");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    const auto& u = f->u;
    tgv1d::OracleOptions opts;
    opts.grid_n = grid_n;
    opts.tol = tol;
    const auto r = tgv1d::tgv_grid_oracle(u, opts);
    nlohmann::json j;
    // A single atom plus an affine part has a closed form.
    if (u.atom_count() == 1) {
      const bool jump = u.jumps().size() == 1;
      const auto& t = jump ? u.jumps()[0] : u.kinks()[0];
      const tgv1d::ExtremalAtom atom{jump ? tgv1d::AtomKind::Jump : tgv1d::AtomKind::Kink, t.position, t.sign};
      j["closed_form"] = t.weight * tgv1d::tgv_scaled_atom(atom, u.params());
    } else if (u.is_affine()) {
      j["closed_form"] = 0.0;
    }
    j["upper"] = u.weight_sum();
    j["oracle"] = r.value;
    j["dual"] = r.dual_value;
    j["gap"] = r.gap;
    j["singular_cost"] = r.singular_cost;
    j["cells"] = r.cells;
    j["lumped_cells"] = r.lumped_cells;
    j["iterations"] = r.iterations;
    *out_json = dup_string(dump(j));
  });
}

tgv1d_status tgv1d_run_from_config(const char* config_path, tgv1d_run** out) {
  return guarded([&] {
    require(config_path, "config_path");
    require(out, "out");
    const auto cfg = tgv1d::load_experiment_config(config_path);
    *out = new tgv1d_run{tgv1d::run_experiment(cfg)};
  });
}

void tgv1d_run_free(tgv1d_run* run) { delete run; }

tgv1d_status tgv1d_run_stationary(const tgv1d_run* run, int* out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    *out = run->result.run.stationary ? 1 : 0;
  });
}

tgv1d_status tgv1d_run_iterations(const tgv1d_run* run, int* out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    *out = run->result.run.iterations;
  });
}

tgv1d_status tgv1d_run_output_dir(const tgv1d_run* run, char** out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    *out = dup_string(run->result.config.output_dir);
  });
}

tgv1d_status tgv1d_run_solution(const tgv1d_run* run, tgv1d_function** out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    *out = new tgv1d_function{run->result.run.solution};
  });
}

tgv1d_status tgv1d_run_report_json(const tgv1d_run* run, char** out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    *out = dup_string(dump(tgv1d::report_json(run->result)));
  });
}

tgv1d_status tgv1d_run_write_outputs(const tgv1d_run* run, const char* dir) {
  return guarded([&] {
    require(run, "run");
    tgv1d::write_outputs(run->result, dir ? std::string(dir) : run->result.config.output_dir);
  });
}

tgv1d_status tgv1d_counterexample(double lambda1, double lambda2, char** out_json) {
  return guarded([&] {
    require(out_json, "out_json");
    const auto fx = tgv1d::oracle::build_counterexample(lambda1, lambda2);
    const tgv1d::L2Fidelity fidelity(fx.data);
    const tgv1d::ExtremalAtom atoms[2] = {{tgv1d::AtomKind::Kink, fx.x1, 1}, {tgv1d::AtomKind::Kink, fx.x2, -1}};
    const auto sol = tgv1d::solve_weights(atoms, fidelity, fx.params);
    const auto tgv = tgv1d::tgv_grid_oracle(fx.ubar);
    const double f_ubar = fidelity.value(fx.ubar);
    nlohmann::json j;
    j["T"] = fx.params.T;
    j["alpha"] = fx.params.alpha;
    j["beta"] = fx.params.beta;
    j["x1"] = fx.x1;
    j["x2"] = fx.x2;
    j["lambda"] = {fx.lambda1, fx.lambda2};
    j["gamma"] = {fx.gamma(0), fx.gamma(1), fx.gamma(2), fx.gamma(3)};
    j["orthogonality_residual"] = fx.orthogonality_residual;
    j["condition"] = fx.condition;
    j["conic_minimum"] = sol.objective;
    j["conic_weights"] = sol.lambda;
    j["f_ubar"] = f_ubar;
    j["tgv_ubar_oracle"] = tgv.value;
    j["tgv_ubar_gap"] = tgv.gap;
    j["exact_objective_ubar"] = f_ubar + tgv.value;
    j["margin"] = sol.objective - (f_ubar + tgv.value);
    *out_json = dup_string(dump(j));
  });
}

tgv1d_status tgv1d_dump_duals(const char* solution_path, const char* config_path, size_t samples,
                              char** out_csv) {
  return guarded([&] {
    require(solution_path, "solution_path");
    require(config_path, "config_path");
    require(out_csv, "out_csv");
    if (samples < 2) throw std::invalid_argument("samples must be >= 2");
    const auto u = tgv1d::sparse_function_from_json(read_json_file(solution_path));
    const auto cfg = tgv1d::load_experiment_config(config_path);
    const auto setup = tgv1d::measurements_for(cfg);
    if (u.T() != setup.T) throw std::invalid_argument("solution and config disagree on T");
    *out_csv = dup_string(tgv1d::duals_csv(u, setup, samples, cfg.solver.extrema));
  });
}

}  // extern "C"
