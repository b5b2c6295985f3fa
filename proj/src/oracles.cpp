#include "tgv1d/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

namespace tgv1d::oracle {

namespace {

using boost::math::quadrature::gauss_kronrod;

std::vector<double> breakpoints_of(const SparseFunction& u) {
  std::vector<double> b;
  for (const auto& a : u.jumps()) b.push_back(a.position);
  for (const auto& a : u.kinks()) b.push_back(a.position);
  return b;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breaks, double tol) {
  std::vector<double> pts{a, b};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    s += gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], 15, tol);
  return s;
}

double l2_inner(const SparseFunction& u, const SparseFunction& v) {
  auto b = breakpoints_of(u);
  const auto bv = breakpoints_of(v);
  b.insert(b.end(), bv.begin(), bv.end());
  return integrate([&](double x) { return u(x) * v(x); }, 0.0, u.T(), b);
}

std::complex<double> fourier(const SparseFunction& u, double zeta) {
  const auto b = breakpoints_of(u);
  const double re = integrate([&](double x) { return u(x) * std::cos(zeta * x); }, 0.0, u.T(), b);
  const double im = integrate([&](double x) { return -u(x) * std::sin(zeta * x); }, 0.0, u.T(), b);
  return {re, im};
}

ScanMax dense_scan_max(const std::function<double(double)>& f, double T, std::size_t n) {
  ScanMax best;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = T * double(i) / double(n);
    const double v = std::abs(f(x));
    if (v > best.abs_value) best = {x, v};
  }
  return best;
}

ScanResult linear_min_scan(const std::function<double(double)>& g, const TgvParams& prm,
                           std::size_t n) {
  if (n < 1000) throw std::invalid_argument("linear_min_scan: n must be >= 1000");
  const double T = prm.T, margin = prm.kink_margin();
  // Cumulative int_0^x g and int_0^x t g on the grid. One 15-point
  // Gauss-Legendre rule per cell is exact to rounding for smooth g on cells
  // this short; both integrals share the evaluations of g.
  std::vector<double> xs(n + 1), I0(n + 1, 0.0), I1(n + 1, 0.0);
  for (std::size_t i = 0; i <= n; ++i) xs[i] = T * double(i) / double(n);
  using rule = boost::math::quadrature::gauss<double, 15>;
  const auto& nodes = rule::abscissa();
  const auto& weights = rule::weights();
  for (std::size_t i = 0; i < n; ++i) {
    const double c = 0.5 * (xs[i] + xs[i + 1]), h = 0.5 * (xs[i + 1] - xs[i]);
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      for (double t : {c - h * nodes[k], c + h * nodes[k]}) {
        const double w = nodes[k] == 0.0 ? 0.5 * weights[k] : weights[k];
        const double v = g(t);
        s0 += w * v;
        s1 += w * t * v;
      }
    }
    I0[i + 1] = I0[i] + h * s0;
    I1[i + 1] = I1[i] + h * s1;
  }
  // Signed inner products with the unit shapes, grid and direct versions.
  auto jump_grid = [&](std::size_t i) { return I0[n] - I0[i]; };
  auto kink_grid = [&](std::size_t i) {
    const double x = xs[i];
    return x >= 0.5 * T ? (I1[n] - I1[i]) - x * (I0[n] - I0[i]) : x * I0[i] - I1[i];
  };
  auto jump_direct = [&](double x) { return integrate(g, x, T); };
  auto kink_direct = [&](double x) {
    if (x >= 0.5 * T) return integrate([&](double t) { return (t - x) * g(t); }, x, T);
    return integrate([&](double t) { return (x - t) * g(t); }, 0.0, x);
  };

  ScanResult best{0.0, ExtremalAtom{AtomKind::Jump, 0.5 * T, 1}};
  auto consider = [&](AtomKind kind, double x, double inner) {
    const double scale = kind == AtomKind::Jump ? prm.alpha : prm.beta;
    const double v = -std::abs(inner) / scale;
    if (v < best.value) best = {v, ExtremalAtom{kind, x, inner > 0.0 ? -1 : 1}};
  };

  for (AtomKind kind : {AtomKind::Jump, AtomKind::Kink}) {
    auto admissible = [&](double x) {
      return x > 0.0 && x < T && (kind == AtomKind::Jump || std::min(x, T - x) > margin);
    };
    std::vector<std::pair<double, std::size_t>> local;  // (|inner|, index) at local maxima
    auto grid = [&](std::size_t i) { return std::abs(kind == AtomKind::Jump ? jump_grid(i) : kink_grid(i)); };
    for (std::size_t i = 1; i < n; ++i) {
      if (!admissible(xs[i])) continue;
      const double v = grid(i);
      consider(kind, xs[i], kind == AtomKind::Jump ? jump_grid(i) : kink_grid(i));
      if (v >= grid(i - 1) && v >= grid(i + 1)) local.emplace_back(v, i);
    }
    std::sort(local.begin(), local.end(), [](auto& l, auto& r) { return l.first > r.first; });
    if (local.size() > 4) local.resize(4);
    for (const auto& [v, i] : local) {
      double lo = xs[i - 1], hi = xs[i + 1];
      if (kind == AtomKind::Kink) {
        lo = std::max(lo, margin);
        hi = std::min(hi, T - margin);
        if (xs[i] >= 0.5 * T) lo = std::max(lo, 0.5 * T);
        else hi = std::min(hi, 0.5 * T);
      }
      if (!(lo < hi)) continue;
      auto direct = [&](double x) { return kind == AtomKind::Jump ? jump_direct(x) : kink_direct(x); };
      const auto r = boost::math::tools::brent_find_minima([&](double x) { return -std::abs(direct(x)); },
                                                           lo, hi, 40);
      if (admissible(r.first)) consider(kind, r.first, direct(r.first));
    }
  }
  return best;
}

CounterexampleFixture build_counterexample(double lambda1, double lambda2) {
  if (!(std::abs(lambda2 - lambda1) < 0.25 && lambda1 + lambda2 > 3.75 && lambda1 > 0.0 && lambda2 > 0.0))
    throw std::invalid_argument("build_counterexample: need |l2 - l1| < 0.25 and l1 + l2 > 3.75");
  CounterexampleFixture fx;
  fx.params = TgvParams{1.0, 0.5, 10.0};
  fx.lambda1 = lambda1;
  fx.lambda2 = lambda2;
  const double T = fx.params.T, x1 = fx.x1, x2 = fx.x2;
  fx.u1 = SparseFunction(fx.params, {}, {{x1, 1, 1.0}}, 0.0, 0.0);
  fx.u2 = SparseFunction(fx.params, {}, {{x2, -1, 1.0}}, 0.0, 0.0);
  fx.ubar = SparseFunction(fx.params, {}, {{x1, 1, lambda1}, {x2, -1, lambda2}}, 0.0, 0.0);
  fx.w1 = PiecewisePolynomial::global_on(T, x1, x2, {1.0});
  // 1 - (3/8) K_{x1}(x) on [x1, x2], with K_{x1}(x) = x - x1 since x1 >= T/2.
  fx.w2 = PiecewisePolynomial::global_on(T, x1, x2, {1.0 + 0.375 * x1, -0.375});
  fx.l1 = PiecewisePolynomial::global_on(T, 0.0, T, {1.0});
  fx.l2 = PiecewisePolynomial::global_on(T, 0.0, T, {-0.5 * T, 1.0});

  const PiecewisePolynomial rows[4] = {fx.u1.to_piecewise(), fx.u2.to_piecewise(), fx.l1, fx.l2};
  const PiecewisePolynomial cols[4] = {fx.w1, fx.w2, fx.l1, fx.l2};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) fx.system(i, j) = tgv1d::l2_inner(rows[i], cols[j]);
  fx.rhs << -1.0, -1.0, 0.0, 0.0;

  Eigen::FullPivLU<Eigen::Matrix4d> lu(fx.system);
  if (!lu.isInvertible()) throw std::runtime_error("build_counterexample: singular system");
  fx.gamma = lu.solve(fx.rhs);
  fx.gamma += lu.solve(fx.rhs - fx.system * fx.gamma);
  const Eigen::JacobiSVD<Eigen::Matrix4d> svd(fx.system);
  fx.condition = svd.singularValues()(0) / svd.singularValues()(3);

  fx.phi = fx.w1.scaled(fx.gamma(0)) + fx.w2.scaled(fx.gamma(1)) + fx.l1.scaled(fx.gamma(2)) +
           fx.l2.scaled(fx.gamma(3));
  fx.data = fx.ubar.to_piecewise() - fx.phi;
  for (int i = 0; i < 4; ++i)
    fx.orthogonality_residual =
        std::max(fx.orthogonality_residual, std::abs(tgv1d::l2_inner(rows[i], fx.phi) - fx.rhs(i)));
  return fx;
}

}  // namespace tgv1d::oracle
