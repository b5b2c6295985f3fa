#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "common.hpp"
#include "tgv1d/oracles.hpp"

using namespace tgv1d;

namespace {

double norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("transforms of elementary pieces") {
  const double T = 10.0;
  CHECK(std::abs(transform_affine(0.0, 1.0, T, 0.0) - cplx(T, 0.0)) <= 1e-15);
  const double a = 3.3, z = 1.7;
  const cplx i(0.0, 1.0);
  const cplx expected = (std::exp(-i * z * a) - std::exp(-i * z * T)) / (i * z);
  CHECK(std::abs(transform_shape(AtomKind::Jump, a, T, z) - expected) <= 1e-14);

  const TgvParams p{1.0, 1.0, T};
  for (double zeta : {0.0, 1e-9, 0.05, 10.0 / 9.0, 7.3, 40.0})
    for (double x : {0.4, 2.0, 5.0, 7.8}) {
      for (AtomKind kind : {AtomKind::Jump, AtomKind::Kink}) {
        const auto u = unit_atom_function({kind, x, 1}, p);
        CHECK(std::abs(transform_shape(kind, x, T, zeta) - oracle::fourier(u, zeta)) <= 1e-10);
      }
      CHECK(std::abs(transform_affine(x, -1.0, T, zeta) - oracle::fourier(SparseFunction(p, x, -1.0), zeta)) <=
            1e-10);
    }
}

TEST_CASE("forward map of the ground truth") {
  const auto u = fixtures::truth();
  const double z1 = 10.0 / 9.0;
  const auto h = forward(u, std::vector<double>{z1});
  // High-precision quadrature value.
  CHECK(std::abs(h[0] - cplx(-30.813845724555113838, -13.414379946601678423)) <= 1e-10);
  CHECK(std::abs(h[0] - oracle::fourier(u, z1)) <= 1e-10);
}

TEST_CASE("linearity of the forward map") {
  std::mt19937_64 rng(4);
  const auto p = fixtures::params();
  const auto f = fixtures::frequencies();
  for (int i = 0; i < 10; ++i) {
    const auto u = fixtures::random_sparse(rng, p), v = fixtures::random_sparse(rng, p);
    const auto hu = forward(u, f), hv = forward(v, f), huv = forward(u + v, f);
    for (std::size_t j = 0; j < f.size(); ++j) CHECK(std::abs(huv[j] - hu[j] - hv[j]) <= 1e-12);
  }
}

TEST_CASE("misfit") {
  const auto u = fixtures::truth();
  const auto s = fixtures::setup(0.0);
  CHECK(misfit(u, s) <= 1e-20);
  for (const auto& r : residual(u, s)) CHECK(std::abs(r) <= 1e-12);

  const auto noisy = fixtures::setup();
  const SparseFunction zero(fixtures::params(), 0.0, 0.0);
  CHECK(misfit(zero, noisy) == doctest::Approx(0.5 * std::pow(norm(noisy.data), 2)).epsilon(1e-14));

  // u - (u - 0): doubling the residual quadruples the misfit.
  const auto mid = u.scaled(0.5);
  MeasurementSetup half = noisy;
  const auto hu = forward(mid, noisy.frequencies);
  for (std::size_t j = 0; j < half.size(); ++j) half.data[j] = hu[j] - 0.5 * (hu[j] - noisy.data[j]);
  CHECK(misfit(mid, noisy) == doctest::Approx(4.0 * misfit(mid, half)).epsilon(1e-12));
}

TEST_CASE("gradient function") {
  const auto f = fixtures::frequencies();
  const std::vector<cplx> zero(f.size());
  CHECK(gradient_function(zero, f).is_zero());

  std::vector<cplx> e1(f.size());
  e1[0] = 1.0;
  const auto g = gradient_function(e1, f);
  for (double x : {0.0, 1.3, 9.9}) CHECK(g(x) == doctest::Approx(std::cos(f[0] * x)).epsilon(1e-15));

  std::vector<cplx> ei(f.size());
  ei[2] = cplx(0.0, 1.0);
  const auto gi = gradient_function(ei, f);
  CHECK(gi(2.0) == doctest::Approx(-std::sin(f[2] * 2.0)));
}

TEST_CASE("adjoint identity") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n;
  const auto p = fixtures::params();
  const auto f = fixtures::frequencies();
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<cplx> r(f.size());
    for (auto& z : r) z = cplx(n(rng), n(rng));
    const auto g = gradient_function(r, f);
    const auto v = fixtures::random_sparse(rng, p);
    const auto hv = forward(v, f);
    double rhs = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) rhs += (std::conj(hv[j]) * r[j]).real();
    const double lhs = oracle::integrate([&](double x) { return g(x) * v(x); }, 0.0, p.T,
                                         [&] {
                                           std::vector<double> b;
                                           for (auto& a : v.jumps()) b.push_back(a.position);
                                           for (auto& a : v.kinks()) b.push_back(a.position);
                                           return b;
                                         }());
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("gradient against central differences") {
  std::mt19937_64 rng(13);
  const auto p = fixtures::params();
  const FourierFidelity fid(fixtures::setup());
  const double t = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = fixtures::random_sparse(rng, p), v = fixtures::random_sparse(rng, p, 2, 2);
    const double fd = (fid.value(u + v.scaled(t)) - fid.value(u - v.scaled(t))) / (2.0 * t);
    const double an = fid.gradient_inner(u, v);
    CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
    // The trigonometric gradient agrees with the closed-form inner product.
    const auto g = fid.gradient(u);
    const double direct = oracle::integrate([&](double x) { return g(x) * v(x); }, 0.0, p.T,
                                            [&] {
                                              std::vector<double> b;
                                              for (auto& a : v.jumps()) b.push_back(a.position);
                                              for (auto& a : v.kinks()) b.push_back(a.position);
                                              return b;
                                            }());
    CHECK(std::abs(direct - an) <= 1e-9 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("synthetic data") {
  const auto u = fixtures::truth();
  const auto f = fixtures::frequencies();
  const auto clean = forward(u, f);

  const auto s0 = synthesize(u, f, 0.0, 1);
  for (std::size_t j = 0; j < f.size(); ++j) CHECK(s0.data[j] == clean[j]);

  const auto s1 = synthesize(u, f, 0.1, 1);
  std::vector<cplx> eps(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) eps[j] = s1.data[j] - clean[j];
  CHECK(std::abs(norm(eps) / norm(clean) - 0.1) <= 1e-12);

  CHECK(synthesize(u, f, 0.1, 1).data == s1.data);
  CHECK(synthesize(u, f, 0.1, 2).data != s1.data);

  const SparseFunction zero(fixtures::params(), 0.0, 0.0);
  CHECK_THROWS(synthesize(zero, f, 0.1, 1));
  CHECK_THROWS_AS(synthesize(u, f, -0.1, 1), std::invalid_argument);
}

TEST_CASE("setup validation") {
  CHECK_NOTHROW(fixtures::setup().validate());
  MeasurementSetup s = fixtures::setup();
  s.frequencies[1] = s.frequencies[0];
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  MeasurementSetup empty;
  empty.T = 10.0;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  MeasurementSetup sized = fixtures::setup();
  sized.data.pop_back();
  CHECK_THROWS_AS(sized.validate(), std::invalid_argument);
}

TEST_CASE("gradient Lipschitz constant from the Gram matrix") {
  const auto f = fixtures::frequencies();
  const double T = 10.0;
  const std::size_t m = f.size();
  Eigen::MatrixXd G(2 * m, 2 * m);
  auto basis = [&](std::size_t i, double x) { return i < m ? std::cos(f[i] * x) : std::sin(f[i - m] * x); };
  for (std::size_t i = 0; i < 2 * m; ++i)
    for (std::size_t j = 0; j < 2 * m; ++j)
      G(i, j) = oracle::integrate([&](double x) { return basis(i, x) * basis(j, x); }, 0.0, T);
  const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues().maxCoeff();
  CHECK(gradient_lipschitz(f, T) == doctest::Approx(lmax).epsilon(1e-10));
}
