// Conditional-gradient method over jump and kink atoms: compute p_k, P_k,
// stop when max(|p_k|/alpha, |P_k|/beta) <= 1 up to tol_psi, otherwise insert
// the atom minimizing <grad f(u_k), v>, re-solve the weights and prune.
#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "tgv1d/dual_system.hpp"
#include "tgv1d/fidelity.hpp"
#include "tgv1d/function_space.hpp"
#include "tgv1d/subproblem.hpp"

namespace tgv1d {

enum class DuplicatePolicy {
  Keep,     // always insert; near-duplicates are merged after the run
  Refresh,  // a candidate within cluster_tol of a same-kind, same-sign atom moves it
};

struct SolverConfig {
  TgvParams params;
  double tol_psi = 1e-10;
  int max_iter = 100;
  ExtremaOptions extrema;
  SubproblemOptions subproblem;
  double cluster_tol = 1e-6;
  double prune_threshold = 0.0;
  DuplicatePolicy duplicates = DuplicatePolicy::Keep;
  /// Empty means {+S_{0.75 T}}.
  std::vector<ExtremalAtom> initial_atoms;
  /// Accept beta/alpha >= T/2, where no extremal kink exists.
  bool allow_kinkless = false;

  void validate() const;
  std::vector<ExtremalAtom> effective_initial_atoms() const;
};

struct HistoryRow {
  int k = 0;
  double psi = 0.0;
  double objective_PA = 0.0;  // f(u_k) + sum lambda = min P(A_k)
  double f_value = 0.0;
  double sum_lambda = 0.0;
  int n_active = 0;
  double sup_p = 0.0;
  double sup_P = 0.0;
  // Not written to CSV.
  double u_norm = 0.0;
  double candidate_norm = 0.0;  // |u_hat_k|_{L2}, 0 at the last row
};

void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& rows);

struct SolverState {
  int k = 0;
  std::vector<ExtremalAtom> atoms;
  WeightSolution weights;
  SparseFunction u;
  DualPair duals;
  double psi = 0.0;
  bool terminated = false;
  std::vector<HistoryRow> history;
  std::vector<SparseFunction> iterates;  // u_1, u_2, ... (kept for diagnostics)
};

/// The candidate atom for dual variables with max ratio > 1. Throws
/// std::logic_error if a kink candidate falls outside the extremal strip.
ExtremalAtom insert_candidate(const DualPair& dp, const TgvParams& params);

/// Same-kind, same-sign atoms whose consecutive gaps are <= cluster_tol become
/// one atom at the weight-averaged position carrying the summed weight.
SparseFunction merge_clusters(const SparseFunction& u, double cluster_tol);

struct RunResult {
  SparseFunction solution;  // before clustering
  SparseFunction clustered;
  std::vector<ExtremalAtom> atoms;
  WeightSolution weights;
  DualPair duals;
  OptimalityReport report;
  std::vector<HistoryRow> history;
  std::vector<SparseFunction> iterates;
  bool stationary = false;
  int iterations = 0;  // index k of the last iterate; u_1 is the first
  double psi = 0.0;
  double M0 = 0.0;
  double clustering_relative_change = 0.0;
  int max_active = 0;
};

class GcgSolver {
 public:
  GcgSolver(const TrigGradientFidelity& fidelity, SolverConfig config);

  double M0() const { return M0_; }
  const SolverConfig& config() const { return config_; }

  SolverState initialize() const;
  /// One insertion, re-solve and prune; no-op on a terminated state.
  void step(SolverState& state) const;
  RunResult run() const;

 private:
  void evaluate(SolverState& state) const;

  const TrigGradientFidelity& fidelity_;
  SolverConfig config_;
  double M0_ = 0.0;
};

}  // namespace tgv1d
