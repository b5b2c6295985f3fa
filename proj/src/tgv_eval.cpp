#include "tgv1d/tgv_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace tgv1d {

double tgv_atom(AtomKind kind, double position, const TgvParams& p) {
  if (kind == AtomKind::Jump) return p.alpha;
  const double dist = std::min(position, p.T - position);
  return dist >= p.kink_margin() ? p.beta : p.alpha * dist;
}

double tgv_scaled_atom(const ExtremalAtom& atom, const TgvParams& p) {
  const double scale = atom.kind == AtomKind::Jump ? p.alpha : p.beta;
  return tgv_atom(atom.kind, atom.position, p) / scale;
}

double tgv_upper(std::span<const double> weights) {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

namespace {

// min_w sum_k c_k |w_k - d_k| + beta sum_k |w_{k+1} - w_k|. Some minimizer
// takes its values in {d_k}, so a shortest-path sweep over those is exact.
double exact_primal(const std::vector<double>& d, const std::vector<double>& c, double beta) {
  std::vector<double> levels = d;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const std::size_t V = levels.size();
  std::vector<double> cost(V), best(V);
  for (std::size_t v = 0; v < V; ++v) cost[v] = c[0] * std::abs(levels[v] - d[0]);
  for (std::size_t k = 1; k < d.size(); ++k) {
    best = cost;
    for (std::size_t v = 1; v < V; ++v)
      best[v] = std::min(best[v], best[v - 1] + beta * (levels[v] - levels[v - 1]));
    for (std::size_t v = V - 1; v-- > 0;)
      best[v] = std::min(best[v], best[v + 1] + beta * (levels[v + 1] - levels[v]));
    for (std::size_t v = 0; v < V; ++v) cost[v] = best[v] + c[k] * std::abs(levels[v] - d[k]);
  }
  return *std::min_element(cost.begin(), cost.end());
}

// Dual: max_z sum_j z_j (d_{j+1} - d_j), |z_j| <= beta, |z_k - z_{k-1}| <= c_k
// with z_{-1} = z_{K-1} = 0. Diagonally preconditioned primal-dual iteration.
struct DualCertificate {
  double value;
  std::size_t iterations;
  bool converged;
};

DualCertificate certify(const std::vector<double>& d, const std::vector<double>& c, double beta,
                        double primal, double tol, std::size_t max_iter) {
  const std::size_t K = d.size();
  const std::size_t J = K - 1;
  std::vector<double> z(J, 0.0), z_old(J), y(K, 0.0), h(J);
  for (std::size_t j = 0; j < J; ++j) h[j] = d[j] - d[j + 1];
  auto zval = [&](const std::vector<double>& v, std::ptrdiff_t i) {
    return (i < 0 || i >= std::ptrdiff_t(J)) ? 0.0 : v[std::size_t(i)];
  };
  auto feasible_value = [&]() {
    double s = 1.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double g = std::abs(zval(z, std::ptrdiff_t(k)) - zval(z, std::ptrdiff_t(k) - 1));
      if (g > c[k]) s = std::min(s, c[k] / g);
    }
    double v = 0.0;
    for (std::size_t j = 0; j < J; ++j) v += z[j] * (d[j + 1] - d[j]);
    return s * v;
  };

  const double tau = 0.5;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= max_iter; ++it) {
    z_old = z;
    for (std::size_t j = 0; j < J; ++j) {
      const double grad = y[j] - y[j + 1] + h[j];
      z[j] = std::clamp(z[j] - tau * grad, -beta, beta);
    }
    for (std::size_t k = 0; k < K; ++k) {
      const auto ik = std::ptrdiff_t(k);
      const double bz = (2.0 * zval(z, ik) - zval(z_old, ik)) - (2.0 * zval(z, ik - 1) - zval(z_old, ik - 1));
      const double sigma = (k == 0 || k + 1 == K) ? 1.0 : 0.5;
      const double v = y[k] + sigma * bz;
      const double t = sigma * c[k];
      y[k] = v > t ? v - t : (v < -t ? v + t : 0.0);
    }
    if (it % 25 == 0 || it == max_iter) {
      best = std::max(best, feasible_value());
      if (primal - best <= tol) return {best, it, true};
    }
  }
  return {best, max_iter, false};
}

}  // namespace

OracleResult tgv_grid_oracle(const SparseFunction& u, const OracleOptions& opts) {
  if (opts.grid_n < 100) throw std::invalid_argument("tgv_grid_oracle: grid_n must be >= 100");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tgv_grid_oracle: tol must be > 0");
  const TgvParams& prm = u.params();
  const double T = prm.T;

  std::vector<double> bp;
  bp.reserve(opts.grid_n + 1 + u.atom_count());
  for (std::size_t i = 0; i <= opts.grid_n; ++i) bp.push_back(T * double(i) / double(opts.grid_n));
  bp.back() = T;
  for (const auto& a : u.jumps()) bp.push_back(a.position);
  for (const auto& a : u.kinks()) bp.push_back(a.position);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  const DerivativeMeasure du = derivative(u);
  OracleResult res;
  res.cells = bp.size() - 1;
  res.singular_cost = prm.alpha * du.total_singular_mass();

  // A minimizer is constant wherever the density is, so equal-density runs
  // collapse into single cells without changing the value.
  std::vector<double> d, c;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double di = du.density_at(0.5 * (bp[i] + bp[i + 1]));
    const double ci = prm.alpha * (bp[i + 1] - bp[i]);
    if (!d.empty() && d.back() == di)
      c.back() += ci;
    else {
      d.push_back(di);
      c.push_back(ci);
    }
  }
  res.lumped_cells = d.size();

  const double primal = d.size() > 1 ? exact_primal(d, c, prm.beta) : 0.0;
  double dual = 0.0;
  if (d.size() > 1) {
    const auto cert = certify(d, c, prm.beta, primal, opts.tol, opts.max_iter);
    res.iterations = cert.iterations;
    if (!cert.converged)
      throw OracleFailure("tgv_grid_oracle: duality gap " + std::to_string(primal - cert.value) +
                          " above tol after " + std::to_string(cert.iterations) + " iterations");
    dual = cert.value;
  }
  res.value = res.singular_cost + primal;
  res.dual_value = res.singular_cost + dual;
  res.gap = primal - dual;
  return res;
}

}  // namespace tgv1d
