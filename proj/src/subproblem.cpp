#include "tgv1d/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace tgv1d {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// min 1/2 |A t - y|^2 + e^T t  over t_j >= 0 for j < n_atoms, the rest free.
class ActiveSetQP {
 public:
  ActiveSetQP(MatrixXd A, VectorXd y, VectorXd e, Index n_atoms)
      : A_(std::move(A)), y_(std::move(y)), e_(std::move(e)), n_atoms_(n_atoms) {}

  VectorXd gradient(const VectorXd& t) const { return A_.transpose() * (A_ * t - y_) + e_; }

  double kkt_residual(const VectorXd& t) const {
    const VectorXd g = gradient(t);
    double r = 0.0;
    for (Index j = 0; j < t.size(); ++j) {
      if (j >= n_atoms_)
        r = std::max(r, std::abs(g(j)));
      else
        r = std::max({r, -g(j), std::abs(t(j) * g(j))});
    }
    return r;
  }

  struct PassiveSolve {
    VectorXd z;
    std::optional<VectorXd> ray;  // descent direction of an unbounded passive problem
  };

  PassiveSolve solve(const std::vector<Index>& P, int refinement_steps) const {
    const Index m = A_.rows(), k = Index(P.size());
    MatrixXd B(m, k);
    VectorXd e(k);
    for (Index i = 0; i < k; ++i) {
      B.col(i) = A_.col(P[std::size_t(i)]);
      e(i) = e_(P[std::size_t(i)]);
    }
    PassiveSolve out;
    if (k == 0) return out;
    Eigen::JacobiSVD<MatrixXd> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXd& s = svd.singularValues();
    const MatrixXd& U = svd.matrixU();
    const MatrixXd& V = svd.matrixV();
    const double smax = s.size() ? s(0) : 0.0;
    const double thr = smax * double(std::max(m, k)) * std::numeric_limits<double>::epsilon();
    const VectorXd Ve = V.transpose() * e;
    const double e_scale = std::max(1.0, e.norm());
    // Directions beyond the rank of B (including k > m).
    for (Index i = 0; i < k; ++i) {
      const double si = i < s.size() ? s(i) : 0.0;
      if (si <= thr && std::abs(Ve(i)) > 1e-12 * e_scale) {
        out.ray = -(Ve(i) > 0.0 ? 1.0 : -1.0) * V.col(i);
        return out;
      }
    }
    auto apply_pinv_normal = [&](const VectorXd& rhs) {  // (B^T B)^+ rhs
      VectorXd c = V.transpose() * rhs;
      for (Index i = 0; i < k; ++i) {
        const double si = i < s.size() ? s(i) : 0.0;
        c(i) = si > thr ? c(i) / (si * si) : 0.0;
      }
      return VectorXd(V * c);
    };
    VectorXd c(k);
    const VectorXd Uy = U.transpose() * y_;
    for (Index i = 0; i < k; ++i) {
      const double si = i < s.size() ? s(i) : 0.0;
      c(i) = si > thr ? (Uy(i) - Ve(i) / si) / si : 0.0;
    }
    out.z = V * c;
    for (int r = 0; r < refinement_steps; ++r) {
      const VectorXd g = B.transpose() * (B * out.z - y_) + e;
      out.z -= apply_pinv_normal(g);
    }
    return out;
  }

  Index n_atoms() const { return n_atoms_; }
  Index size() const { return A_.cols(); }

 private:
  MatrixXd A_;
  VectorXd y_;
  VectorXd e_;
  Index n_atoms_;
};

}  // namespace

WeightSolution solve_weights(std::span<const ExtremalAtom> atoms, const Fidelity& fidelity,
                             const TgvParams& params, std::span<const double> warm_start,
                             const SubproblemOptions& opts) {
  const Index N = Index(atoms.size());
  const Index n = N + 2;
  if (!warm_start.empty() && Index(warm_start.size()) != N)
    throw std::invalid_argument("solve_weights: warm start has the wrong length");

  std::vector<SparseFunction> basis;
  basis.reserve(std::size_t(n));
  for (const auto& a : atoms) basis.push_back(unit_atom_function(a, params));
  basis.emplace_back(params, 0.0, 1.0);
  basis.emplace_back(params, 1.0, -0.5 * params.T);  // x - T/2
  const LinearModel model = fidelity.linear_model(basis);

  // Unit-norm columns; t = D^{-1} theta.
  VectorXd D(n);
  for (Index i = 0; i < n; ++i) {
    const double cn = model.A.col(i).norm();
    D(i) = cn > 0.0 ? 1.0 / cn : 1.0;
  }
  VectorXd e = VectorXd::Zero(n);
  e.head(N).setOnes();
  const ActiveSetQP qp(model.A * D.asDiagonal(), model.y, D.cwiseProduct(e), N);

  VectorXd t = VectorXd::Zero(n);
  for (Index j = 0; j < N && !warm_start.empty(); ++j)
    t(j) = std::max(0.0, warm_start[std::size_t(j)]) / D(j);

  auto unscaled_gradient = [&](const VectorXd& tt) -> VectorXd {
    return qp.gradient(tt).cwiseQuotient(D);
  };
  auto package = [&](const VectorXd& tt, int iterations) {
    WeightSolution s;
    const VectorXd theta = D.cwiseProduct(tt);
    s.lambda.assign(theta.data(), theta.data() + N);
    s.a = theta(N + 1);
    s.b = theta(N) - 0.5 * params.T * s.a;
    const VectorXd g = unscaled_gradient(tt);
    double r = 0.0;
    for (Index j = 0; j < n; ++j)
      r = j >= N ? std::max(r, std::abs(g(j))) : std::max({r, -g(j), std::abs(theta(j) * g(j))});
    s.kkt_residual = r;
    s.f_value = 0.5 * (model.A * theta - model.y).squaredNorm() + model.offset;
    double sum = 0.0;
    for (double l : s.lambda) sum += l;
    s.objective = s.f_value + sum;
    s.iterations = iterations;
    return s;
  };

  std::vector<bool> passive(std::size_t(n), false);
  for (Index j = 0; j < n; ++j) passive[std::size_t(j)] = j >= N || t(j) > 0.0;
  auto passive_list = [&]() {
    std::vector<Index> P;
    for (Index j = 0; j < n; ++j)
      if (passive[std::size_t(j)]) P.push_back(j);
    return P;
  };

  int iter = 0;
  std::vector<bool> blocked(std::size_t(N), false);
  std::optional<Index> entering;
  while (true) {
    // Solve on the passive set, stepping back to stay feasible.
    while (true) {
      if (++iter > opts.max_iter)
        throw SubproblemFailure("solve_weights: iteration budget of " + std::to_string(opts.max_iter) +
                                    " exceeded",
                                package(t, iter));
      const auto P = passive_list();
      const auto ps = qp.solve(P, opts.refinement_steps);
      if (ps.ray) {
        double step = std::numeric_limits<double>::infinity();
        Index hit = -1;
        for (std::size_t i = 0; i < P.size(); ++i) {
          const double d = (*ps.ray)(Index(i));
          if (P[i] < N && d < 0.0 && t(P[i]) / -d < step) {
            step = t(P[i]) / -d;
            hit = P[i];
          }
        }
        if (hit < 0) throw SubproblemFailure("solve_weights: objective unbounded below", package(t, iter));
        for (std::size_t i = 0; i < P.size(); ++i) t(P[i]) += step * (*ps.ray)(Index(i));
        t(hit) = 0.0;
        passive[std::size_t(hit)] = false;
        continue;
      }
      bool feasible = true;
      double step = 1.0;
      for (std::size_t i = 0; i < P.size(); ++i)
        if (P[i] < N && ps.z(Index(i)) <= 0.0) {
          feasible = false;
          const double denom = t(P[i]) - ps.z(Index(i));
          step = std::min(step, denom > 0.0 ? t(P[i]) / denom : 0.0);
        }
      if (feasible) {
        for (std::size_t i = 0; i < P.size(); ++i) t(P[i]) = ps.z(Index(i));
        break;
      }
      if (entering && step == 0.0) blocked[std::size_t(*entering)] = true;
      for (std::size_t i = 0; i < P.size(); ++i) {
        t(P[i]) += step * (ps.z(Index(i)) - t(P[i]));
        if (P[i] < N && (t(P[i]) <= 0.0 || ps.z(Index(i)) <= 0.0) &&
            t(P[i]) <= 1e-15 * std::max(1.0, t.head(N).cwiseAbs().maxCoeff())) {
          t(P[i]) = 0.0;
          passive[std::size_t(P[i])] = false;
        }
      }
      entering.reset();
    }
    entering.reset();

    // Entering is far stricter than kkt_tol: the outer loop needs slacks
    // resolved down to rounding level.
    const VectorXd g = unscaled_gradient(t);
    const double enter_tol = 64.0 * std::numeric_limits<double>::epsilon();
    Index best = -1;
    for (Index j = 0; j < N; ++j)
      if (!passive[std::size_t(j)] && !blocked[std::size_t(j)] && g(j) < -enter_tol &&
          (best < 0 || g(j) < g(best)))
        best = j;
    if (best < 0) break;
    passive[std::size_t(best)] = true;
    entering = best;
  }

  WeightSolution sol = package(t, iter);
  if (sol.kkt_residual > opts.kkt_tol)
    throw SubproblemFailure("solve_weights: KKT residual " + std::to_string(sol.kkt_residual) +
                                " above tolerance",
                            sol);
  return sol;
}

std::pair<std::vector<ExtremalAtom>, WeightSolution> prune(std::span<const ExtremalAtom> atoms,
                                                           const WeightSolution& sol,
                                                           double threshold) {
  std::vector<ExtremalAtom> kept;
  WeightSolution out = sol;
  out.lambda.clear();
  for (std::size_t j = 0; j < atoms.size(); ++j)
    if (sol.lambda[j] > threshold) {
      kept.push_back(atoms[j]);
      out.lambda.push_back(sol.lambda[j]);
    }
  return {std::move(kept), std::move(out)};
}

SparseFunction to_function(std::span<const ExtremalAtom> atoms, const WeightSolution& sol,
                           const TgvParams& params) {
  return assemble(atoms, sol.lambda, sol.a, sol.b, params);
}

}  // namespace tgv1d
