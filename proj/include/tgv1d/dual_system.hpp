// Dual variables p = int_0^x grad f, P = -int_0^x p, their global extrema,
// the constraint violation Psi and a stationarity report.
//
// With p(T) = P(T) = 0 one has <grad f, S_x> = -p(x) and <grad f, K_x> = -P(x)
// for both kink branches.
#pragma once

#include <string>
#include <vector>

#include "tgv1d/fourier_fidelity.hpp"
#include "tgv1d/function_space.hpp"

namespace tgv1d {

struct ExtremaOptions {
  int starts = 100;  // Newton starts at j*T/starts, j = 1..starts-1
  double newton_tol = 1e-12;
  int newton_max_steps = 50;
  std::size_t scan_points = 10000;
  double refine_trigger = 1e-9;
  unsigned threads = 0;  // 0: hardware concurrency capped by TGV1D_THREADS
};

struct Extremum {
  double position = 0.0;
  double abs_value = 0.0;
  int sign = 1;
  bool degenerate = false;  // q vanishes identically
};

Extremum find_global_extrema(const TrigPoly& q, double T, const ExtremaOptions& opts = {});

struct DualPair {
  TrigPoly p;
  TrigPoly P;
  Extremum sup_p;
  Extremum sup_P;
};

/// p and P from g without the extrema search.
DualPair primitives(const TrigPoly& g);
/// primitives plus global extrema of |p| and |P| on (0,T).
DualPair dual_pair(const TrigPoly& g, double T, const ExtremaOptions& opts = {});

/// M0 * (max(|p|_C / alpha, |P|_C / beta) - 1)
double constraint_violation(const DualPair& dp, double alpha, double beta, double M0);

struct OptimalityReport {
  bool bounds_ok = false;
  bool boundary_ok = false;
  bool support_ok = false;
  bool stationary = false;
  double sup_p = 0.0;
  double sup_P = 0.0;
  double p_at_T = 0.0;
  double P_at_T = 0.0;
  double max_support_residual = 0.0;
  std::vector<std::string> failures;
};

OptimalityReport certify_optimality(const SparseFunction& u, const DualPair& dp, double tol);

/// Worker count for parallel loops: hardware concurrency capped by TGV1D_THREADS.
unsigned default_thread_count();

}  // namespace tgv1d
