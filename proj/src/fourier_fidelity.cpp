#include "tgv1d/fourier_fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace tgv1d {

namespace {

const cplx I(0.0, 1.0);

double sinc(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

// (sin t - t cos t) / t^2
double s1(double t) {
  if (std::abs(t) < 0.1) {
    const double t2 = t * t;
    return t * (1.0 / 3.0 + t2 * (-1.0 / 30.0 + t2 * (1.0 / 840.0 + t2 * (-1.0 / 45360.0 + t2 / 3991680.0))));
  }
  return (std::sin(t) - t * std::cos(t)) / (t * t);
}

// Moments over [a,b] about the midpoint c:
//   m0 = int e^{-i z t} dt,  m1 = int (t - c) e^{-i z t} dt.
struct Moments {
  cplx m0, m1;
  double c;
};

Moments moments(double a, double b, double zeta) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const cplx E = std::exp(-I * (zeta * c));
  const double th = zeta * h;
  return {E * (2.0 * h * sinc(th)), E * (-2.0 * I) * (h * h * s1(th)), c};
}

// int_0^T cos(w x) dx and int_0^T sin(w x) dx
double int_cos(double w, double T) { return T * sinc(w * T); }
double int_sin(double w, double T) {
  const double s = std::sin(0.5 * w * T);
  return w == 0.0 ? 0.0 : 2.0 * s * s / w;
}

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

}  // namespace

double TrigPoly::operator()(double x) const {
  double v = 0.0;
  for (auto k = poly.rbegin(); k != poly.rend(); ++k) v = v * x + *k;
  for (std::size_t j = 0; j < freqs.size(); ++j)
    v += cos[j] * std::cos(freqs[j] * x) + sin[j] * std::sin(freqs[j] * x);
  return v;
}

TrigPoly TrigPoly::derivative() const {
  TrigPoly d;
  d.freqs = freqs;
  d.cos.resize(freqs.size());
  d.sin.resize(freqs.size());
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    d.cos[j] = freqs[j] * sin[j];
    d.sin[j] = -freqs[j] * cos[j];
  }
  for (std::size_t k = 1; k < poly.size(); ++k) d.poly.push_back(double(k) * poly[k]);
  return d;
}

bool TrigPoly::is_zero() const {
  auto zero = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  for (std::size_t j = 0; j < freqs.size(); ++j)
    if (freqs[j] == 0.0 ? cos[j] != 0.0 : (cos[j] != 0.0 || sin[j] != 0.0)) return false;
  return zero(poly);
}

double TrigPoly::coefficient_scale(int order) const {
  double s = 0.0;
  for (std::size_t j = 0; j < freqs.size(); ++j)
    s += (std::abs(cos[j]) + std::abs(sin[j])) * std::pow(std::abs(freqs[j]), order);
  for (double c : poly) s += std::abs(c);
  return s;
}

cplx transform_shape(AtomKind kind, double x, double T, double zeta) {
  if (kind == AtomKind::Jump) return moments(x, T, zeta).m0;
  if (x >= 0.5 * T) {
    const auto m = moments(x, T, zeta);
    return m.m1 + (m.c - x) * m.m0;
  }
  const auto m = moments(0.0, x, zeta);
  return -(m.m1 + (m.c - x) * m.m0);
}

cplx transform_affine(double slope, double offset, double T, double zeta) {
  const auto m = moments(0.0, T, zeta);
  return slope * (m.m1 + m.c * m.m0) + offset * m.m0;
}

std::vector<cplx> forward(const SparseFunction& u, std::span<const double> freqs) {
  std::vector<cplx> out;
  out.reserve(freqs.size());
  for (double z : freqs) {
    cplx v = transform_affine(u.slope(), u.offset(), u.T(), z);
    for (const auto& a : u.jumps())
      v += (a.sign * a.weight / u.alpha()) * transform_shape(AtomKind::Jump, a.position, u.T(), z);
    for (const auto& a : u.kinks())
      v += (a.sign * a.weight / u.beta()) * transform_shape(AtomKind::Kink, a.position, u.T(), z);
    out.push_back(v);
  }
  return out;
}

std::vector<cplx> residual(const SparseFunction& u, const MeasurementSetup& setup) {
  auto r = forward(u, setup.frequencies);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] -= setup.data[j];
  return r;
}

double misfit(const SparseFunction& u, const MeasurementSetup& setup) {
  return 0.5 * norm2(residual(u, setup));
}

TrigPoly gradient_function(std::span<const cplx> r, std::span<const double> freqs) {
  if (r.size() != freqs.size()) throw std::invalid_argument("gradient_function: size mismatch");
  TrigPoly g;
  g.freqs.assign(freqs.begin(), freqs.end());
  for (const auto& z : r) {
    g.cos.push_back(z.real());
    g.sin.push_back(-z.imag());
  }
  return g;
}

void MeasurementSetup::validate() const {
  if (!(std::isfinite(T) && T > 0.0)) throw std::invalid_argument("measurements: T must be > 0");
  if (frequencies.empty()) throw std::invalid_argument("measurements: need at least one frequency");
  if (data.size() != frequencies.size())
    throw std::invalid_argument("measurements: data and frequencies differ in length");
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (!std::isfinite(frequencies[i])) throw std::invalid_argument("measurements: non-finite frequency");
    if (!std::isfinite(data[i].real()) || !std::isfinite(data[i].imag()))
      throw std::invalid_argument("measurements: non-finite data");
    for (std::size_t j = 0; j < i; ++j)
      if (frequencies[i] == frequencies[j]) throw std::invalid_argument("measurements: repeated frequency");
  }
  // H restricted to span{1, x} must be injective.
  Eigen::MatrixXd A(2 * size(), 2);
  for (std::size_t j = 0; j < size(); ++j) {
    const cplx h1 = transform_affine(0.0, 1.0, T, frequencies[j]);
    const cplx hx = transform_affine(1.0, 0.0, T, frequencies[j]);
    A(2 * j, 0) = h1.real();
    A(2 * j + 1, 0) = h1.imag();
    A(2 * j, 1) = hx.real();
    A(2 * j + 1, 1) = hx.imag();
  }
  const Eigen::Matrix2d G = A.transpose() * A;
  if (!(G.determinant() > 1e-12 * G.trace() * G.trace()))
    throw std::invalid_argument("measurements: H is not injective on affine functions");
}

MeasurementSetup synthesize(const SparseFunction& truth, std::span<const double> freqs,
                            double noise_level, std::uint64_t seed) {
  if (!(noise_level >= 0.0) || !std::isfinite(noise_level))
    throw std::invalid_argument("synthesize: noise level must be finite and >= 0");
  MeasurementSetup s;
  s.T = truth.T();
  s.frequencies.assign(freqs.begin(), freqs.end());
  s.data = forward(truth, freqs);
  if (noise_level == 0.0) return s;
  const double clean = std::sqrt(norm2(s.data));
  if (clean == 0.0) throw std::invalid_argument("synthesize: zero measurements cannot carry relative noise");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> eps(freqs.size());
  for (auto& e : eps) {
    const double re = normal(gen);
    const double im = normal(gen);
    e = cplx(re, im) / std::sqrt(2.0);
  }
  const double scale = noise_level * clean / std::sqrt(norm2(eps));
  for (std::size_t j = 0; j < eps.size(); ++j) s.data[j] += scale * eps[j];
  return s;
}

std::vector<double> equispaced_frequencies(std::size_t count, double spacing) {
  std::vector<double> f(count);
  for (std::size_t j = 0; j < count; ++j) f[j] = double(j + 1) * spacing;
  return f;
}

double gradient_lipschitz(std::span<const double> freqs, double T) {
  const std::size_t M = freqs.size();
  Eigen::MatrixXd G(2 * M, 2 * M);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j) {
      const double a = freqs[i], b = freqs[j];
      G(2 * i, 2 * j) = 0.5 * (int_cos(a - b, T) + int_cos(a + b, T));
      G(2 * i + 1, 2 * j + 1) = 0.5 * (int_cos(a - b, T) - int_cos(a + b, T));
      G(2 * i, 2 * j + 1) = 0.5 * (int_sin(b + a, T) + int_sin(b - a, T));  // cos(ax) sin(bx)
      G(2 * i + 1, 2 * j) = 0.5 * (int_sin(a + b, T) + int_sin(a - b, T));  // sin(ax) cos(bx)
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

FourierFidelity::FourierFidelity(MeasurementSetup setup) : setup_(std::move(setup)) {
  setup_.validate();
}

double FourierFidelity::value(const SparseFunction& u) const { return misfit(u, setup_); }

double FourierFidelity::gradient_inner(const SparseFunction& u, const SparseFunction& v) const {
  const auto r = residual(u, setup_);
  const auto hv = forward(v, setup_.frequencies);
  double s = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) s += (std::conj(r[j]) * hv[j]).real();
  return s;
}

LinearModel FourierFidelity::linear_model(std::span<const SparseFunction> basis) const {
  const std::size_t M = setup_.size();
  LinearModel m;
  m.A.resize(2 * M, Eigen::Index(basis.size()));
  m.y.resize(2 * M);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto h = forward(basis[i], setup_.frequencies);
    for (std::size_t j = 0; j < M; ++j) {
      m.A(2 * j, i) = h[j].real();
      m.A(2 * j + 1, i) = h[j].imag();
    }
  }
  for (std::size_t j = 0; j < M; ++j) {
    m.y(2 * j) = setup_.data[j].real();
    m.y(2 * j + 1) = setup_.data[j].imag();
  }
  return m;
}

TrigPoly FourierFidelity::gradient(const SparseFunction& u) const {
  const auto r = residual(u, setup_);
  return gradient_function(r, setup_.frequencies);
}

}  // namespace tgv1d
