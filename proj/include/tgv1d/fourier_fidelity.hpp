// Restricted Fourier measurements Hu = ((Fu)(zeta_1), ..., (Fu)(zeta_M)) with
// (Fu)(zeta) = int_0^T u(x) exp(-i zeta x) dx, the misfit
// 1/2 sum_j |(Hu)_j - m_j|^2 and its gradient in closed form.
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "tgv1d/fidelity.hpp"
#include "tgv1d/function_space.hpp"

namespace tgv1d {

using cplx = std::complex<double>;

// sum_j cos[j] cos(freqs[j] x) + sin[j] sin(freqs[j] x) + sum_k poly[k] x^k
struct TrigPoly {
  std::vector<double> freqs;
  std::vector<double> cos;
  std::vector<double> sin;
  std::vector<double> poly;

  double operator()(double x) const;
  TrigPoly derivative() const;
  bool is_zero() const;
  /// Sum of |coefficient| * (frequency or degree)^order, a crude size bound
  /// for the order-th derivative on [0,1]-scaled arguments.
  double coefficient_scale(int order) const;
};

struct MeasurementSetup {
  double T = 1.0;
  std::vector<double> frequencies;
  std::vector<cplx> data;

  std::size_t size() const { return frequencies.size(); }
  /// Throws std::invalid_argument on M = 0, mismatched sizes, non-finite or
  /// repeated frequencies, or when H is not injective on affine functions.
  void validate() const;
};

/// Fourier transform of the unit shape S_x or K_x on (0,T).
cplx transform_shape(AtomKind kind, double position, double T, double zeta);
/// Fourier transform of a x + b on (0,T).
cplx transform_affine(double slope, double offset, double T, double zeta);

std::vector<cplx> forward(const SparseFunction& u, std::span<const double> freqs);
/// Hu - m^d
std::vector<cplx> residual(const SparseFunction& u, const MeasurementSetup& setup);
double misfit(const SparseFunction& u, const MeasurementSetup& setup);
TrigPoly gradient_function(std::span<const cplx> residual, std::span<const double> freqs);

/// m^d = Hu + eps with a seeded complex Gaussian eps rescaled so that
/// |eps| / |Hu| = noise_level exactly.
MeasurementSetup synthesize(const SparseFunction& truth, std::span<const double> freqs,
                            double noise_level, std::uint64_t seed);

/// Frequencies j * spacing, j = 1..count.
std::vector<double> equispaced_frequencies(std::size_t count, double spacing);

/// Largest eigenvalue of the Gram matrix of {cos(zeta_j x), sin(zeta_j x)} on
/// (0,T), i.e. the Lipschitz constant of the misfit gradient.
double gradient_lipschitz(std::span<const double> freqs, double T);

class FourierFidelity : public TrigGradientFidelity {
 public:
  explicit FourierFidelity(MeasurementSetup setup);
  double T() const override { return setup_.T; }
  double value(const SparseFunction& u) const override;
  double gradient_inner(const SparseFunction& u, const SparseFunction& v) const override;
  LinearModel linear_model(std::span<const SparseFunction> basis) const override;
  TrigPoly gradient(const SparseFunction& u) const override;
  const MeasurementSetup& setup() const { return setup_; }

 private:
  MeasurementSetup setup_;
};

}  // namespace tgv1d
