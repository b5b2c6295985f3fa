// Weight subproblem over a fixed active set:
//   min_{lambda >= 0, a, b}  f(sum_j lambda_j u_j + a x + b) + sum_j lambda_j
// solved by an active-set method on the linear model of f.
#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tgv1d/fidelity.hpp"
#include "tgv1d/function_space.hpp"

namespace tgv1d {

struct SubproblemOptions {
  double kkt_tol = 1e-11;
  int max_iter = 1000;
  int refinement_steps = 2;
};

struct WeightSolution {
  std::vector<double> lambda;
  double a = 0.0;
  double b = 0.0;
  double kkt_residual = 0.0;
  double objective = 0.0;  // f(u) + sum lambda
  double f_value = 0.0;
  int iterations = 0;
};

class SubproblemFailure : public std::runtime_error {
 public:
  SubproblemFailure(const std::string& what, WeightSolution best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const WeightSolution& best() const { return best_; }

 private:
  WeightSolution best_;
};

/// warm_start may be empty or hold one weight per atom.
WeightSolution solve_weights(std::span<const ExtremalAtom> atoms, const Fidelity& fidelity,
                             const TgvParams& params, std::span<const double> warm_start = {},
                             const SubproblemOptions& opts = {});

/// Drops atoms whose weight is <= threshold.
std::pair<std::vector<ExtremalAtom>, WeightSolution> prune(std::span<const ExtremalAtom> atoms,
                                                           const WeightSolution& sol,
                                                           double threshold = 0.0);

SparseFunction to_function(std::span<const ExtremalAtom> atoms, const WeightSolution& sol,
                           const TgvParams& params);

}  // namespace tgv1d
