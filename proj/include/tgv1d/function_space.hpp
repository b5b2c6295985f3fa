// Sparse piecewise-affine functions on (0,T) built from jump and kink atoms.
//
//   u(x) = (1/alpha) sum_j s_j l_j S_{x_j}(x) + (1/beta) sum_j s_j l_j K_{x_j}(x) + a x + b
//
// with the unit jump S_x = 1_(x,T) and the unit kink
//
//   K_x(t) = (x - t) on (0,x)   if x <  T/2
//   K_x(t) = (t - x) on (x,T)   if x >= T/2.
//
// Every value here is immutable once built and can be shared between threads.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tgv1d {

struct TgvParams {
  double alpha = 1.0;
  double beta = 1.0;
  double T = 1.0;

  /// Throws std::invalid_argument unless alpha, beta and T are finite and > 0.
  void validate() const;
  /// beta/alpha, the minimal boundary distance of an extremal kink.
  double kink_margin() const { return beta / alpha; }
};

enum class AtomKind { Jump, Kink };

const char* to_string(AtomKind kind);
AtomKind atom_kind_from_string(const std::string& s);

struct ExtremalAtom {
  AtomKind kind = AtomKind::Jump;
  double position = 0.0;
  int sign = 1;

  /// Strict extremality test: jumps always, kinks only when
  /// dist(position, {0,T}) > beta/alpha.
  bool is_extremal(const TgvParams& p) const;

  friend bool operator==(const ExtremalAtom&, const ExtremalAtom&) = default;
};

/// Value of the unit shape (S_x or K_x, sign ignored) at t. At a jump the
/// right limit is returned.
double unit_shape(AtomKind kind, double position, double T, double t);

struct AtomTerm {
  double position = 0.0;
  int sign = 1;
  double weight = 0.0;
};

class PiecewisePolynomial;

class SparseFunction {
 public:
  SparseFunction() = default;
  /// Affine function a x + b.
  SparseFunction(const TgvParams& params, double slope, double offset);
  /// Normalizes: sorts by position, merges atoms of one kind whose positions
  /// differ by at most merge_tol (signed-weight addition), drops zero weights.
  /// Throws std::invalid_argument on a negative weight or a sign outside
  /// {-1,+1}, std::domain_error on a position outside (0,T).
  SparseFunction(const TgvParams& params, std::vector<AtomTerm> jumps, std::vector<AtomTerm> kinks,
                 double slope, double offset, double merge_tol = 0.0);

  const TgvParams& params() const { return params_; }
  double T() const { return params_.T; }
  double alpha() const { return params_.alpha; }
  double beta() const { return params_.beta; }
  double slope() const { return slope_; }
  double offset() const { return offset_; }
  const std::vector<AtomTerm>& jumps() const { return jumps_; }
  const std::vector<AtomTerm>& kinks() const { return kinks_; }
  std::size_t atom_count() const { return jumps_.size() + kinks_.size(); }
  bool is_affine() const { return jumps_.empty() && kinks_.empty(); }

  /// Sum of all atom weights (the conic TGV upper bound).
  double weight_sum() const;

  /// Pointwise value; right limit at a jump. Throws std::domain_error for x
  /// outside [0,T].
  double operator()(double x) const;

  SparseFunction scaled(double c) const;
  SparseFunction plus_affine(double slope, double offset) const;
  /// Requires identical parameters (std::invalid_argument otherwise).
  SparseFunction operator+(const SparseFunction& other) const;
  SparseFunction operator-(const SparseFunction& other) const { return *this + other.scaled(-1.0); }

  /// Exact representation as a piecewise polynomial on the atom partition.
  PiecewisePolynomial to_piecewise() const;

 private:
  TgvParams params_{};
  std::vector<AtomTerm> jumps_;
  std::vector<AtomTerm> kinks_;
  double slope_ = 0.0;
  double offset_ = 0.0;
};

/// Builds a normalized function from extremal atoms and nonnegative weights.
/// Throws std::invalid_argument on length mismatch or negative weight.
SparseFunction assemble(std::span<const ExtremalAtom> atoms, std::span<const double> weights,
                        double slope, double offset, const TgvParams& params);

/// The single atom sign * shape / (alpha or beta) with unit weight.
SparseFunction unit_atom_function(const ExtremalAtom& atom, const TgvParams& params);

// Du = sum of point masses + piecewise constant density.
struct DerivativeMeasure {
  struct PointMass {
    double position;
    double mass;
  };
  std::vector<PointMass> atoms;
  /// 0 = t_0 < t_1 < ... < t_m = T.
  std::vector<double> density_breakpoints;
  /// density_values[i] is the density on (t_i, t_{i+1}).
  std::vector<double> density_values;

  double total_singular_mass() const;
  double density_at(double x) const;
};

DerivativeMeasure derivative(const SparseFunction& u);

/// Exact L2(0,T) inner product. Throws std::invalid_argument when T differs.
double l2_inner(const SparseFunction& u, const SparseFunction& v);
double l2_norm(const SparseFunction& u);

// Piecewise polynomial on a partition of [0,T]; piece i is stored in the
// local variable s = x - breakpoints[i] with ascending coefficients.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;
  /// breakpoints: strictly increasing, size = pieces.size() + 1.
  PiecewisePolynomial(std::vector<double> breakpoints, std::vector<std::vector<double>> pieces);

  /// Polynomial given in the global variable x on [from, to], zero elsewhere on [0,T].
  static PiecewisePolynomial global_on(double T, double from, double to, std::vector<double> coeffs);
  /// Constant zero on [0,T].
  static PiecewisePolynomial zero(double T);

  double T() const { return breakpoints_.back(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<std::vector<double>>& pieces() const { return pieces_; }

  /// Right-continuous evaluation; the last piece is closed at T.
  double operator()(double x) const;

  /// Same function on a finer partition (points outside (0,T) ignored).
  PiecewisePolynomial refined(std::span<const double> extra_breakpoints) const;

  PiecewisePolynomial scaled(double c) const;
  PiecewisePolynomial operator+(const PiecewisePolynomial& other) const;
  PiecewisePolynomial operator-(const PiecewisePolynomial& other) const {
    return *this + other.scaled(-1.0);
  }

  double integral() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<std::vector<double>> pieces_;
};

double l2_inner(const PiecewisePolynomial& u, const PiecewisePolynomial& v);

}  // namespace tgv1d
