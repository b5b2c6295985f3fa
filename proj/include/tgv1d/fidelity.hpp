// Smooth data terms f(u) as seen by the weight subproblem and the outer solver.
#pragma once

#include <span>

#include <Eigen/Dense>

#include "tgv1d/function_space.hpp"

namespace tgv1d {

struct TrigPoly;

// f restricted to span(basis) is  1/2 |A theta - y|^2 + offset.
struct LinearModel {
  Eigen::MatrixXd A;
  Eigen::VectorXd y;
  double offset = 0.0;
};

class Fidelity {
 public:
  virtual ~Fidelity() = default;
  virtual double T() const = 0;
  virtual double value(const SparseFunction& u) const = 0;
  /// <grad f(u), v>_{L2}
  virtual double gradient_inner(const SparseFunction& u, const SparseFunction& v) const = 0;
  virtual LinearModel linear_model(std::span<const SparseFunction> basis) const = 0;
};

// Fidelities whose gradient is a trigonometric polynomial, which is what the
// dual-variable machinery needs.
class TrigGradientFidelity : public Fidelity {
 public:
  virtual TrigPoly gradient(const SparseFunction& u) const = 0;
};

// f(u) = 1/2 |u - u_d|^2_{L2} with piecewise polynomial data.
class L2Fidelity : public Fidelity {
 public:
  explicit L2Fidelity(PiecewisePolynomial data);
  double T() const override { return data_.T(); }
  double value(const SparseFunction& u) const override;
  double gradient_inner(const SparseFunction& u, const SparseFunction& v) const override;
  LinearModel linear_model(std::span<const SparseFunction> basis) const override;
  const PiecewisePolynomial& data() const { return data_; }

 private:
  PiecewisePolynomial data_;
};

}  // namespace tgv1d
