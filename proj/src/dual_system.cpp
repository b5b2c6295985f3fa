#include "tgv1d/dual_system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <thread>

#include <boost/math/tools/minima.hpp>

namespace tgv1d {

namespace {

// int_0^x q
TrigPoly integrate0(const TrigPoly& q) {
  TrigPoly r;
  r.freqs = q.freqs;
  r.cos.assign(q.freqs.size(), 0.0);
  r.sin.assign(q.freqs.size(), 0.0);
  std::vector<double> poly(q.poly.size() + 1, 0.0);
  for (std::size_t k = 0; k < q.poly.size(); ++k) poly[k + 1] = q.poly[k] / double(k + 1);
  if (poly.size() < 2) poly.resize(2, 0.0);
  for (std::size_t j = 0; j < q.freqs.size(); ++j) {
    const double z = q.freqs[j];
    if (z == 0.0) {
      poly[1] += q.cos[j];
      continue;
    }
    r.sin[j] = q.cos[j] / z;
    r.cos[j] = -q.sin[j] / z;
    poly[0] += q.sin[j] / z;
  }
  r.poly = std::move(poly);
  return r;
}

TrigPoly negated(TrigPoly q) {
  for (auto& c : q.cos) c = -c;
  for (auto& c : q.sin) c = -c;
  for (auto& c : q.poly) c = -c;
  return q;
}

struct Candidate {
  double x;
  double value;  // |q(x)|
};

bool better(const Candidate& a, const std::optional<Candidate>& b) { return !b || a.value > b->value; }

std::optional<Candidate> newton(const TrigPoly& q, const TrigPoly& d1, const TrigPoly& d2, double x,
                                double T, double tol, int max_steps) {
  for (int s = 0; s <= max_steps; ++s) {
    const double g = d1(x);
    if (std::abs(g) <= tol) return Candidate{x, std::abs(q(x))};
    if (s == max_steps) break;
    const double h = d2(x);
    if (h == 0.0 || !std::isfinite(h)) break;
    x -= g / h;
    if (!(x > 0.0 && x < T)) break;
  }
  return std::nullopt;
}

}  // namespace

unsigned default_thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TGV1D_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<unsigned>(n, unsigned(cap));
  }
  return n;
}

Extremum find_global_extrema(const TrigPoly& q, double T, const ExtremaOptions& opts) {
  if (opts.starts < 2) throw std::invalid_argument("find_global_extrema: starts must be >= 2");
  if (q.is_zero()) return {0.5 * T, 0.0, 1, true};

  const TrigPoly d1 = q.derivative();
  const TrigPoly d2 = d1.derivative();
  const double tol = opts.newton_tol * std::max(1.0, d1.coefficient_scale(0));

  // One slot per start keeps the reduction independent of the thread count.
  const int n_starts = opts.starts - 1;
  std::vector<std::optional<Candidate>> slots(static_cast<std::size_t>(n_starts));
  auto work = [&](int from, int to) {
    for (int j = from; j < to; ++j)
      slots[std::size_t(j)] = newton(q, d1, d2, T * double(j + 1) / double(opts.starts), T, tol,
                                     opts.newton_max_steps);
  };
  const unsigned threads = std::min<unsigned>(opts.threads ? opts.threads : default_thread_count(),
                                              unsigned(std::max(1, n_starts / 16)));
  if (threads > 1) {
    std::vector<std::thread> pool;
    const int chunk = (n_starts + int(threads) - 1) / int(threads);
    for (unsigned t = 0; t < threads; ++t) {
      const int from = int(t) * chunk, to = std::min(n_starts, from + chunk);
      if (from < to) pool.emplace_back(work, from, to);
    }
    for (auto& th : pool) th.join();
  } else {
    work(0, n_starts);
  }

  std::optional<Candidate> best;
  for (const auto& c : slots)
    if (c && better(*c, best)) best = c;

  // Grid scan as a lower bound for the Newton maximum.
  const std::size_t n = std::max<std::size_t>(opts.scan_points, 2);
  std::optional<Candidate> scan;
  std::size_t scan_index = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double x = T * double(i) / double(n);
    const Candidate c{x, std::abs(q(x))};
    if (better(c, scan)) {
      scan = c;
      scan_index = i;
    }
  }
  for (double x : {T * 1e-9, T * (1.0 - 1e-9)}) {
    const Candidate c{x, std::abs(q(x))};
    if (better(c, scan)) {
      scan = c;
      scan_index = x < 0.5 * T ? 0 : n;
    }
  }

  if (!best || scan->value > best->value + opts.refine_trigger) {
    std::optional<Candidate> refined = newton(q, d1, d2, scan->x, T, tol, opts.newton_max_steps);
    const double lo = T * double(scan_index == 0 ? 0 : scan_index - 1) / double(n);
    const double hi = T * double(std::min(n, scan_index + 1)) / double(n);
    if (!refined || refined->x < lo || refined->x > hi) {
      auto neg = [&](double x) { return -std::abs(q(x)); };
      const auto r = boost::math::tools::brent_find_minima(neg, lo, hi, 52);
      refined = Candidate{r.first, -r.second};
    }
    for (const auto& c : {*refined, *scan})
      if (better(c, best)) best = c;
  }

  const double v = q(best->x);
  return {best->x, std::abs(v), v < 0.0 ? -1 : 1, false};
}

DualPair primitives(const TrigPoly& g) {
  DualPair dp;
  dp.p = integrate0(g);
  dp.P = negated(integrate0(dp.p));
  return dp;
}

DualPair dual_pair(const TrigPoly& g, double T, const ExtremaOptions& opts) {
  DualPair dp = primitives(g);
  dp.sup_p = find_global_extrema(dp.p, T, opts);
  dp.sup_P = find_global_extrema(dp.P, T, opts);
  return dp;
}

double constraint_violation(const DualPair& dp, double alpha, double beta, double M0) {
  return M0 * (std::max(dp.sup_p.abs_value / alpha, dp.sup_P.abs_value / beta) - 1.0);
}

OptimalityReport certify_optimality(const SparseFunction& u, const DualPair& dp, double tol) {
  OptimalityReport r;
  const double alpha = u.alpha(), beta = u.beta(), T = u.T();
  r.sup_p = dp.sup_p.abs_value;
  r.sup_P = dp.sup_P.abs_value;
  r.p_at_T = dp.p(T);
  r.P_at_T = dp.P(T);
  r.bounds_ok = r.sup_p <= alpha + tol && r.sup_P <= beta + tol;
  if (!r.bounds_ok) r.failures.push_back("sup norm of p or P exceeds its bound");
  r.boundary_ok = std::abs(r.p_at_T) <= tol && std::abs(r.P_at_T) <= tol;
  if (!r.boundary_ok) r.failures.push_back("p(T) or P(T) does not vanish");
  r.support_ok = true;
  for (const auto& a : u.jumps()) {
    const double res = std::abs(dp.p(a.position) - a.sign * alpha);
    r.max_support_residual = std::max(r.max_support_residual, res);
    if (res > tol) {
      r.support_ok = false;
      r.failures.push_back("jump at " + std::to_string(a.position) + " off the set p = sign*alpha");
    }
  }
  for (const auto& a : u.kinks()) {
    const double res = std::abs(dp.P(a.position) - a.sign * beta);
    r.max_support_residual = std::max(r.max_support_residual, res);
    if (res > tol) {
      r.support_ok = false;
      r.failures.push_back("kink at " + std::to_string(a.position) + " off the set P = sign*beta");
    }
  }
  r.stationary = r.bounds_ok && r.boundary_ok && r.support_ok;
  return r;
}

}  // namespace tgv1d
