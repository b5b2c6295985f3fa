#include "tgv1d/gcg_solver.hpp"

#include <algorithm>
#include <cmath>
#include <locale>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "tgv1d/fourier_fidelity.hpp"

namespace tgv1d {

void SolverConfig::validate() const {
  params.validate();
  if (!(tol_psi > 0.0)) throw std::invalid_argument("solver: tol_psi must be > 0");
  if (max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
  if (!(cluster_tol >= 0.0)) throw std::invalid_argument("solver: cluster_tol must be >= 0");
  if (!(prune_threshold >= 0.0)) throw std::invalid_argument("solver: prune_threshold must be >= 0");
  if (extrema.starts < 2) throw std::invalid_argument("solver: newton starts must be >= 2");
  if (!(subproblem.kkt_tol > 0.0)) throw std::invalid_argument("solver: kkt_tol must be > 0");
  if (!allow_kinkless && params.kink_margin() >= 0.5 * params.T)
    throw std::invalid_argument("solver: beta/alpha must be < T/2");
  for (const auto& a : initial_atoms)
    if (!a.is_extremal(params))
      throw std::invalid_argument("solver: initial atom at " + std::to_string(a.position) +
                                  " is not extremal");
}

std::vector<ExtremalAtom> SolverConfig::effective_initial_atoms() const {
  if (!initial_atoms.empty()) return initial_atoms;
  return {ExtremalAtom{AtomKind::Jump, 0.75 * params.T, 1}};
}

void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& rows) {
  os.imbue(std::locale::classic());
  const auto old_precision = os.precision(17);
  os << "k,psi,objective_PA,f_value,sum_lambda,n_active,sup_p,sup_P\n";
  for (const auto& r : rows)
    os << r.k << ',' << r.psi << ',' << r.objective_PA << ',' << r.f_value << ',' << r.sum_lambda
       << ',' << r.n_active << ',' << r.sup_p << ',' << r.sup_P << '\n';
  os.precision(old_precision);
}

ExtremalAtom insert_candidate(const DualPair& dp, const TgvParams& params) {
  const double rp = dp.sup_p.abs_value / params.alpha;
  const double rP = dp.sup_P.abs_value / params.beta;
  if (rp >= rP) return {AtomKind::Jump, dp.sup_p.position, dp.sup_p.sign};
  ExtremalAtom k{AtomKind::Kink, dp.sup_P.position, dp.sup_P.sign};
  if (!k.is_extremal(params))
    throw std::logic_error("insert_candidate: kink candidate at " + std::to_string(k.position) +
                           " lies outside (beta/alpha, T - beta/alpha)");
  return k;
}

namespace {

std::vector<AtomTerm> merge_terms(const std::vector<AtomTerm>& terms, double tol) {
  std::vector<AtomTerm> out;
  std::size_t i = 0;
  while (i < terms.size()) {
    double w = terms[i].weight, wx = terms[i].weight * terms[i].position;
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j].sign == terms[i].sign &&
           terms[j].position - terms[j - 1].position <= tol) {
      w += terms[j].weight;
      wx += terms[j].weight * terms[j].position;
      ++j;
    }
    out.push_back({j - i > 1 && w > 0.0 ? wx / w : terms[i].position, terms[i].sign, w});
    i = j;
  }
  return out;
}

}  // namespace

SparseFunction merge_clusters(const SparseFunction& u, double cluster_tol) {
  return SparseFunction(u.params(), merge_terms(u.jumps(), cluster_tol),
                        merge_terms(u.kinks(), cluster_tol), u.slope(), u.offset());
}

GcgSolver::GcgSolver(const TrigGradientFidelity& fidelity, SolverConfig config)
    : fidelity_(fidelity), config_(std::move(config)) {
  config_.validate();
  if (std::abs(fidelity_.T() - config_.params.T) > 1e-12 * config_.params.T)
    throw std::invalid_argument("solver: fidelity and parameters disagree on T");
  M0_ = fidelity_.value(SparseFunction(config_.params, 0.0, 0.0));
}

void GcgSolver::evaluate(SolverState& s) const {
  s.u = to_function(s.atoms, s.weights, config_.params);
  s.duals = dual_pair(fidelity_.gradient(s.u), config_.params.T, config_.extrema);
  s.psi = constraint_violation(s.duals, config_.params.alpha, config_.params.beta, M0_);
  HistoryRow row;
  row.k = s.k;
  row.psi = s.psi;
  row.objective_PA = s.weights.objective;
  row.f_value = s.weights.f_value;
  for (double l : s.weights.lambda) row.sum_lambda += l;
  row.n_active = int(s.atoms.size());
  row.sup_p = s.duals.sup_p.abs_value;
  row.sup_P = s.duals.sup_P.abs_value;
  row.u_norm = l2_norm(s.u);
  s.history.push_back(row);
  s.iterates.push_back(s.u);
  s.terminated = s.psi <= config_.tol_psi;
}

SolverState GcgSolver::initialize() const {
  SolverState s;
  s.k = 1;
  const auto atoms = config_.effective_initial_atoms();
  const auto sol = solve_weights(atoms, fidelity_, config_.params, {}, config_.subproblem);
  std::tie(s.atoms, s.weights) = prune(atoms, sol, config_.prune_threshold);
  evaluate(s);
  return s;
}

void GcgSolver::step(SolverState& s) const {
  if (s.terminated) return;
  const ExtremalAtom cand = insert_candidate(s.duals, config_.params);
  s.history.back().candidate_norm = l2_norm(unit_atom_function(cand, config_.params));

  std::vector<ExtremalAtom> atoms = s.atoms;
  std::vector<double> warm = s.weights.lambda;
  bool refreshed = false;
  if (config_.duplicates == DuplicatePolicy::Refresh)
    for (auto& a : atoms)
      if (a.kind == cand.kind && a.sign == cand.sign &&
          std::abs(a.position - cand.position) <= config_.cluster_tol) {
        a.position = cand.position;
        refreshed = true;
        break;
      }
  if (!refreshed) {
    atoms.push_back(cand);
    warm.push_back(0.0);
  }
  const auto sol = solve_weights(atoms, fidelity_, config_.params, warm, config_.subproblem);
  std::tie(s.atoms, s.weights) = prune(atoms, sol, config_.prune_threshold);
  ++s.k;
  evaluate(s);
}

RunResult GcgSolver::run() const {
  SolverState s = initialize();
  while (!s.terminated && s.k < config_.max_iter) step(s);
  RunResult r;
  r.solution = s.u;
  r.clustered = merge_clusters(s.u, config_.cluster_tol);
  r.atoms = s.atoms;
  r.weights = s.weights;
  r.duals = s.duals;
  r.report = certify_optimality(s.u, s.duals, 1e-6);
  r.history = std::move(s.history);
  r.iterates = std::move(s.iterates);
  r.stationary = s.terminated;
  r.iterations = s.k;
  r.psi = s.psi;
  r.M0 = M0_;
  const double before = fidelity_.value(r.solution) + r.solution.weight_sum();
  const double after = fidelity_.value(r.clustered) + r.clustered.weight_sum();
  r.clustering_relative_change = std::abs(after - before) / std::max(std::abs(before), 1e-300);
  for (const auto& row : r.history) r.max_active = std::max(r.max_active, row.n_active);
  return r;
}

}  // namespace tgv1d
