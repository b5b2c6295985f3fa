// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "common.hpp"
#include "tgv1d/oracles.hpp"
#include "tgv1d/tgv_eval.hpp"

using namespace tgv1d;

namespace {

int failures = 0;

void verdict(int n, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
void guarded(int n, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    verdict(n, false, std::string("exception: ") + e.what());
  }
}

void atom_closed_forms() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  bool rule_ok = true;
  for (int i = 0; i < 200; ++i) {
    const double T = 1.0 + 19.0 * U(rng), alpha = 0.2 + 4.8 * U(rng);
    const double beta = alpha * 0.5 * T * (0.02 + 0.96 * U(rng));  // beta/alpha < T/2
    const double x = T * (0.005 + 0.99 * U(rng));
    const TgvParams p{alpha, beta, T};
    const double d = std::min(x, T - x);
    const double closed = tgv_atom(AtomKind::Kink, x, p);
    const double rule = d >= beta / alpha ? beta : alpha * d;
    rule_ok = rule_ok && closed == rule;
    const SparseFunction k(p, {}, {{x, 1, beta}}, 0.0, 0.0);  // exactly K_x
    const auto r = tgv_grid_oracle(k);
    worst = std::max(worst, std::abs(r.value - closed));
  }
  const double secs = seconds_since(t0);
  verdict(1, rule_ok && worst <= 1e-4 && secs <= 120.0,
          fmt("200 kinks, max |closed - oracle| = %.3g, %.2f s", worst, secs));
}

void extremal_normalization() {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int bad = 0, tested = 0;
  for (int i = 0; i < 1000; ++i) {
    const double T = 1.0 + 19.0 * U(rng), alpha = 0.2 + 4.8 * U(rng);
    const double beta = alpha * 0.5 * T * (0.02 + 0.96 * U(rng));
    const TgvParams p{alpha, beta, T};
    const ExtremalAtom j{AtomKind::Jump, T * (0.001 + 0.998 * U(rng)), 1};
    const ExtremalAtom k{AtomKind::Kink, T * (0.001 + 0.998 * U(rng)), -1};
    bad += tgv_scaled_atom(j, p) != 1.0;
    ++tested;
    if (k.is_extremal(p)) {
      bad += tgv_scaled_atom(k, p) != 1.0;
      ++tested;
    }
  }
  verdict(2, bad == 0, fmt("%d admissible atoms, %d with scaled TGV != 1", tested, bad));
}

void counterexample() {
  const auto fx = oracle::build_counterexample(2.0, 2.0);
  const L2Fidelity fid(fx.data);
  const ExtremalAtom atoms[] = {{AtomKind::Kink, fx.x1, 1}, {AtomKind::Kink, fx.x2, -1}};
  const auto conic = solve_weights(atoms, fid, fx.params);
  const auto tgv = tgv_grid_oracle(fx.ubar);
  const double exact = fid.value(fx.ubar) + tgv.value;
  const double margin = conic.objective - exact;
  verdict(3, fx.orthogonality_residual <= 1e-10 && margin >= 2.9,
          fmt("orthogonality %.2g, min P = %.12g, f(ubar) + TGV = %.12g, margin %.6g", fx.orthogonality_residual,
              conic.objective, exact, margin));
}

void reproduction(const fixtures::Reference& ref, double secs) {
  const auto& run = ref.run;
  const auto& c = run.clustered;
  bool shape = c.jumps().size() == 2 && c.kinks().size() == 2;
  double worst = 0.0;
  if (shape) {
    const double want_j[] = {6.3, 9.1}, want_k[] = {2.0, 7.8};
    const int sign_j[] = {1, -1}, sign_k[] = {-1, -1};
    for (int i = 0; i < 2; ++i) {
      shape = shape && c.jumps()[i].sign == sign_j[i] && c.kinks()[i].sign == sign_k[i];
      worst = std::max({worst, std::abs(c.jumps()[i].position - want_j[i]), std::abs(c.kinks()[i].position - want_k[i])});
    }
  }
  verdict(4, run.stationary && run.psi <= 1e-10 && run.iterations <= 100 && shape && worst <= 0.3 && secs <= 30.0,
          fmt("seed %d: %d iterations, psi %.3g, %zu clustered atoms, max position error %.3g, %.2f s",
              int(fixtures::kSeed), run.iterations, run.psi, c.atom_count(), worst, secs));
}

void certificate(const fixtures::Reference& ref) {
  const auto& r = ref.run.report;
  const bool norms = std::abs(r.sup_p - fixtures::kAlpha) <= 1e-6 && std::abs(r.sup_P - fixtures::kBeta) <= 1e-6;
  verdict(5, r.bounds_ok && r.boundary_ok && r.support_ok && norms,
          fmt("|p| = %.12g, |P| = %.12g, p(T) = %.2g, P(T) = %.2g, support residual %.2g", r.sup_p, r.sup_P,
              r.p_at_T, r.P_at_T, r.max_support_residual));
}

void sparsity(const fixtures::Reference& ref) {
  const std::size_t n = ref.run.solution.atom_count();
  const std::size_t bound = 2 * ref.setup.size() - 2;
  verdict(6, n <= bound && ref.run.max_active <= 16,
          fmt("final atoms %zu <= %zu, max active set %d <= 16", n, bound, ref.run.max_active));
}

void rates(const fixtures::Reference& ref) {
  const auto& h = ref.run.history;
  const double L = gradient_lipschitz(ref.setup.frequencies, ref.setup.T);
  double C = 0.0;
  for (const auto& row : h) C = std::max({C, row.u_norm, ref.run.M0 * row.candidate_norm});
  const double Jmin = h.back().objective_PA;
  const double r1 = h.front().objective_PA - Jmin;
  const double q = r1 / (8.0 * L * C * C);
  bool sub = true, lin = true;
  double best = INFINITY;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double k = double(i + 1);
    best = std::min(best, h[i].psi);
    sub = sub && best <= std::sqrt(8.0 * L * C * C * r1 / k);
    const double r = h[i].objective_PA - Jmin;
    lin = lin && r <= r1 / (1.0 + q * (k - 1.0)) + 1e-12 * std::abs(Jmin);
  }
  // Empirical geometric rate of the residual over the first half of the trace.
  const std::size_t m = h.size() / 2;
  const double slope = m > 1 ? std::log((h[m].objective_PA - Jmin) / r1) / double(m) : 0.0;
  verdict(7, sub && lin,
          fmt("L_f = %.6g, C = %.6g, r(u_1) = %.6g; Psi bound %s, residual bound %s; empirical log-rate %.3g/iter", L,
              C, r1, sub ? "holds" : "violated", lin ? "holds" : "violated", slope));
}

void sandwich(const fixtures::Reference& ref) {
  const auto& h = ref.run.history;
  const auto& it = ref.run.iterates;
  const std::size_t n = it.size();
  const std::size_t picks[] = {0, n / 4, n / 2, (3 * n) / 4, n - 1};
  bool ok = true;
  double lo = INFINITY, hi_slack = INFINITY;
  for (std::size_t i : picks) {
    const auto r = tgv_grid_oracle(it[i]);
    const double d = h[i].sum_lambda - r.value;
    ok = ok && d >= -2e-4 && d <= h[i].psi + 2e-4;
    lo = std::min(lo, d);
    hi_slack = std::min(hi_slack, h[i].psi + 2e-4 - d);
  }
  const auto last = tgv_grid_oracle(it.back());
  const double final_gap = std::abs(h.back().sum_lambda - last.value);
  verdict(8, ok && final_gap <= 2e-4,
          fmt("5 iterates: min(sum lambda - TGV) = %.3g, min upper slack %.3g; final |sum lambda - TGV| = %.3g", lo,
              hi_slack, final_gap));
}

void collapse(const fixtures::Reference& ref) {
  double norm_m = 0.0;
  for (const auto& z : ref.setup.data) norm_m += std::norm(z);
  norm_m = std::sqrt(norm_m);
  const double T = ref.setup.T, Mhat = norm_m * std::sqrt(double(ref.setup.size()));
  auto cfg = fixtures::config();
  cfg.params = {10.0 * T * Mhat, 10.0 * T * T * Mhat, T};
  cfg.allow_kinkless = true;
  const auto run = GcgSolver(ref.fidelity, cfg).run();
  const auto fit = solve_weights({}, ref.fidelity, cfg.params);
  const bool affine = run.solution.is_affine() &&
                      std::abs(run.solution.slope() - fit.a) <= 1e-9 * std::max(1.0, std::abs(fit.a)) &&
                      std::abs(run.solution.offset() - fit.b) <= 1e-9 * std::max(1.0, std::abs(fit.b));
  verdict(9, run.stationary && affine,
          fmt("alpha = %.4g, beta = %.4g: %zu atoms, a = %.10g (fit %.10g), b = %.10g (fit %.10g)", cfg.params.alpha,
              cfg.params.beta, run.solution.atom_count(), run.solution.slope(), fit.a, run.solution.offset(), fit.b));
}

void properties(const fixtures::Reference& ref) {
  const auto p = fixtures::params();
  const auto f = fixtures::frequencies();
  std::mt19937_64 rng(110);
  std::normal_distribution<double> N;

  double fd_worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto u = fixtures::random_sparse(rng, p), v = fixtures::random_sparse(rng, p, 2, 2);
    const double t = 1e-5;
    const double fd = (ref.fidelity.value(u + v.scaled(t)) - ref.fidelity.value(u - v.scaled(t))) / (2 * t);
    const double an = ref.fidelity.gradient_inner(u, v);
    fd_worst = std::max(fd_worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
  }

  double fw_worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto u = fixtures::random_sparse(rng, p);
    const auto h = forward(u, f);
    for (std::size_t j = 0; j < f.size(); ++j) fw_worst = std::max(fw_worst, std::abs(h[j] - oracle::fourier(u, f[j])));
  }

  double lm_worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    MeasurementSetup s;
    s.T = p.T;
    s.frequencies = f;
    for (std::size_t j = 0; j < f.size(); ++j) s.data.emplace_back(20.0 * N(rng), 20.0 * N(rng));
    const FourierFidelity fid(s);
    const auto w = solve_weights({}, fid, p);
    const SparseFunction u(p, w.a, w.b);
    const auto g = fid.gradient(u);
    const auto dp = dual_pair(g, p.T);
    const double ratio = std::max(dp.sup_p.abs_value / p.alpha, dp.sup_P.abs_value / p.beta);
    const auto scan = oracle::linear_min_scan(g, p, 100'000);
    lm_worst = std::max(lm_worst, std::abs(scan.value + ratio));
    if (ratio > 1.0) {
      const auto cand = insert_candidate(dp, p);
      lm_worst = std::max(lm_worst, std::abs(fid.gradient_inner(u, unit_atom_function(cand, p)) - scan.value));
    }
  }

  double inv_worst = 0.0;
  const OracleOptions opts;
  for (int i = 0; i < 3; ++i) {
    const auto u = fixtures::random_sparse(rng, p);
    const double t = tgv_grid_oracle(u).value;
    inv_worst = std::max(inv_worst, std::abs(tgv_grid_oracle(u.plus_affine(N(rng), N(rng))).value - t) / (2 * opts.tol));
    for (double c : {0.5, 2.0, 10.0})
      inv_worst = std::max(inv_worst, std::abs(tgv_grid_oracle(u.scaled(c)).value - c * t) / (2 * c * opts.tol));
  }

  verdict(10, fd_worst <= 1e-6 && fw_worst <= 1e-10 && lm_worst <= 1e-8 && inv_worst <= 1.0,
          fmt("gradient FD %.2g, forward vs quadrature %.2g, linear minimization vs scan %.2g, "
              "oracle invariance %.2g of budget",
              fd_worst, fw_worst, lm_worst, inv_worst));
}

}  // namespace

int main() {
  guarded(1, atom_closed_forms);
  guarded(2, extremal_normalization);
  guarded(3, counterexample);
  const auto t0 = std::chrono::steady_clock::now();
  const auto& ref = fixtures::reference();
  const double secs = seconds_since(t0);
  guarded(4, [&] { reproduction(ref, secs); });
  guarded(5, [&] { certificate(ref); });
  guarded(6, [&] { sparsity(ref); });
  guarded(7, [&] { rates(ref); });
  guarded(8, [&] { sandwich(ref); });
  guarded(9, [&] { collapse(ref); });
  guarded(10, [&] { properties(ref); });
  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
