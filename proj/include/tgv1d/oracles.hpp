// Brute-force references for the tests: adaptive quadrature, dense scans and
// a counterexample where the weight subproblem overestimates TGV.
#pragma once

#include <complex>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "tgv1d/fidelity.hpp"
#include "tgv1d/function_space.hpp"

namespace tgv1d::oracle {

/// Adaptive Gauss-Kronrod integral of f over [a,b], split at breaks.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breaks = {}, double tol = 1e-14);

/// int_0^T u v dx from point evaluations.
double l2_inner(const SparseFunction& u, const SparseFunction& v);
/// int_0^T u(x) exp(-i zeta x) dx from point evaluations.
std::complex<double> fourier(const SparseFunction& u, double zeta);

struct ScanMax {
  double position = 0.0;
  double abs_value = 0.0;
};
/// max |f| over n equispaced points of [0,T].
ScanMax dense_scan_max(const std::function<double(double)>& f, double T, std::size_t n);

struct ScanResult {
  double value = 0.0;
  ExtremalAtom atom;
};
/// min <g, v> over atoms v = +-S_x/alpha, +-K_x/beta with x on an n-point grid
/// (kinks only inside the extremal strip), refined around the best points.
/// Inner products come from quadrature of g alone.
ScanResult linear_min_scan(const std::function<double(double)>& g, const TgvParams& params,
                           std::size_t n);

struct CounterexampleFixture {
  TgvParams params;
  double x1 = 6.0;
  double x2 = 6.25;
  double lambda1 = 2.0;
  double lambda2 = 2.0;
  SparseFunction u1;  // K_{x1}/beta
  SparseFunction u2;  // -K_{x2}/beta
  SparseFunction ubar;
  PiecewisePolynomial w1, w2, l1, l2;
  Eigen::Matrix4d system;
  Eigen::Vector4d rhs;
  Eigen::Vector4d gamma;
  PiecewisePolynomial phi;
  PiecewisePolynomial data;  // u_d = ubar - phi
  double orthogonality_residual = 0.0;
  double condition = 0.0;
};

/// Requires |lambda2 - lambda1| < 0.25 and lambda1 + lambda2 > 3.75
/// (std::invalid_argument otherwise); std::runtime_error on a singular system.
CounterexampleFixture build_counterexample(double lambda1 = 2.0, double lambda2 = 2.0);

}  // namespace tgv1d::oracle
