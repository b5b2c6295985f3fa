#include "tgv1d/function_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tgv1d {

void TgvParams::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(alpha) || !ok(beta) || !ok(T))
    throw std::invalid_argument("TgvParams: alpha, beta and T must be finite and positive");
}

const char* to_string(AtomKind kind) { return kind == AtomKind::Jump ? "jump" : "kink"; }

AtomKind atom_kind_from_string(const std::string& s) {
  if (s == "jump" || s == "Jump" || s == "S") return AtomKind::Jump;
  if (s == "kink" || s == "Kink" || s == "K") return AtomKind::Kink;
  throw std::invalid_argument("unknown atom kind '" + s + "'");
}

bool ExtremalAtom::is_extremal(const TgvParams& p) const {
  if (!(position > 0.0 && position < p.T)) return false;
  if (kind == AtomKind::Jump) return true;
  return std::min(position, p.T - position) > p.kink_margin();
}

double unit_shape(AtomKind kind, double position, double T, double t) {
  if (kind == AtomKind::Jump) return t >= position ? 1.0 : 0.0;
  if (position < 0.5 * T) return t < position ? position - t : 0.0;
  return t > position ? t - position : 0.0;
}

namespace {

void check_terms(const std::vector<AtomTerm>& terms, double T, const char* what) {
  for (const auto& t : terms) {
    if (t.sign != 1 && t.sign != -1)
      throw std::invalid_argument(std::string(what) + " atom sign must be -1 or +1");
    if (!(t.weight >= 0.0) || !std::isfinite(t.weight))
      throw std::invalid_argument(std::string(what) + " atom weight must be finite and >= 0");
    if (!(t.position > 0.0 && t.position < T))
      throw std::domain_error(std::string(what) + " atom position " + std::to_string(t.position) +
                              " outside (0,T)");
  }
}

std::vector<AtomTerm> normalize(std::vector<AtomTerm> terms, double merge_tol) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const AtomTerm& l, const AtomTerm& r) { return l.position < r.position; });
  std::vector<AtomTerm> out;
  out.reserve(terms.size());
  std::size_t i = 0;
  while (i < terms.size()) {
    const double start = terms[i].position;
    double signed_weight = 0.0;
    std::size_t j = i;
    for (; j < terms.size() && terms[j].position - start <= merge_tol; ++j)
      signed_weight += terms[j].sign * terms[j].weight;
    if (signed_weight != 0.0)
      out.push_back({start, signed_weight > 0.0 ? 1 : -1, std::abs(signed_weight)});
    i = j;
  }
  return out;
}

// Slope contributed on (0,x) or (x,T) by a kink term with unit scaling 1/beta.
double kink_slope(const AtomTerm& k, double T, double beta) {
  const double c = k.sign * k.weight / beta;
  return k.position < 0.5 * T ? -c : c;
}

}  // namespace

SparseFunction::SparseFunction(const TgvParams& params, double slope, double offset)
    : params_(params), slope_(slope), offset_(offset) {
  params_.validate();
}

SparseFunction::SparseFunction(const TgvParams& params, std::vector<AtomTerm> jumps,
                               std::vector<AtomTerm> kinks, double slope, double offset,
                               double merge_tol)
    : params_(params), slope_(slope), offset_(offset) {
  params_.validate();
  check_terms(jumps, params_.T, "jump");
  check_terms(kinks, params_.T, "kink");
  jumps_ = normalize(std::move(jumps), merge_tol);
  kinks_ = normalize(std::move(kinks), merge_tol);
}

double SparseFunction::weight_sum() const {
  double s = 0.0;
  for (const auto& t : jumps_) s += t.weight;
  for (const auto& t : kinks_) s += t.weight;
  return s;
}

double SparseFunction::operator()(double x) const {
  if (!(x >= 0.0 && x <= params_.T))
    throw std::domain_error("eval: x = " + std::to_string(x) + " outside [0,T]");
  double v = slope_ * x + offset_;
  for (const auto& j : jumps_)
    v += j.sign * j.weight / params_.alpha * unit_shape(AtomKind::Jump, j.position, params_.T, x);
  for (const auto& k : kinks_)
    v += k.sign * k.weight / params_.beta * unit_shape(AtomKind::Kink, k.position, params_.T, x);
  return v;
}

SparseFunction SparseFunction::scaled(double c) const {
  auto flip = [c](std::vector<AtomTerm> terms) {
    for (auto& t : terms) {
      t.weight *= std::abs(c);
      if (c < 0.0) t.sign = -t.sign;
    }
    return terms;
  };
  return SparseFunction(params_, flip(jumps_), flip(kinks_), c * slope_, c * offset_);
}

SparseFunction SparseFunction::plus_affine(double slope, double offset) const {
  SparseFunction out = *this;
  out.slope_ += slope;
  out.offset_ += offset;
  return out;
}

SparseFunction SparseFunction::operator+(const SparseFunction& other) const {
  if (params_.T != other.params_.T || params_.alpha != other.params_.alpha ||
      params_.beta != other.params_.beta)
    throw std::invalid_argument("SparseFunction addition requires identical parameters");
  auto jumps = jumps_;
  jumps.insert(jumps.end(), other.jumps_.begin(), other.jumps_.end());
  auto kinks = kinks_;
  kinks.insert(kinks.end(), other.kinks_.begin(), other.kinks_.end());
  return SparseFunction(params_, std::move(jumps), std::move(kinks), slope_ + other.slope_,
                        offset_ + other.offset_);
}

PiecewisePolynomial SparseFunction::to_piecewise() const {
  const double T = params_.T;
  std::vector<double> bp{0.0, T};
  for (const auto& j : jumps_) bp.push_back(j.position);
  for (const auto& k : kinks_) bp.push_back(k.position);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  std::vector<std::vector<double>> pieces;
  pieces.reserve(bp.size() - 1);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double mid = 0.5 * (bp[i] + bp[i + 1]);
    double slope = slope_;
    for (const auto& k : kinks_) {
      const bool active = k.position < 0.5 * T ? mid < k.position : mid > k.position;
      if (active) slope += kink_slope(k, T, params_.beta);
    }
    pieces.push_back({(*this)(bp[i]), slope});
  }
  return PiecewisePolynomial(std::move(bp), std::move(pieces));
}

SparseFunction assemble(std::span<const ExtremalAtom> atoms, std::span<const double> weights,
                        double slope, double offset, const TgvParams& params) {
  if (atoms.size() != weights.size())
    throw std::invalid_argument("assemble: atoms and weights differ in length");
  std::vector<AtomTerm> jumps, kinks;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("assemble: negative weight");
    AtomTerm t{atoms[i].position, atoms[i].sign, weights[i]};
    (atoms[i].kind == AtomKind::Jump ? jumps : kinks).push_back(t);
  }
  return SparseFunction(params, std::move(jumps), std::move(kinks), slope, offset);
}

SparseFunction unit_atom_function(const ExtremalAtom& atom, const TgvParams& params) {
  const double w = 1.0;
  return assemble(std::span(&atom, 1), std::span(&w, 1), 0.0, 0.0, params);
}

double DerivativeMeasure::total_singular_mass() const {
  double s = 0.0;
  for (const auto& a : atoms) s += std::abs(a.mass);
  return s;
}

double DerivativeMeasure::density_at(double x) const {
  auto it = std::upper_bound(density_breakpoints.begin(), density_breakpoints.end(), x);
  std::size_t i = it == density_breakpoints.begin() ? 0 : std::size_t(it - density_breakpoints.begin()) - 1;
  i = std::min(i, density_values.size() - 1);
  return density_values[i];
}

DerivativeMeasure derivative(const SparseFunction& u) {
  DerivativeMeasure d;
  for (const auto& j : u.jumps()) d.atoms.push_back({j.position, j.sign * j.weight / u.alpha()});
  d.density_breakpoints.push_back(0.0);
  for (const auto& k : u.kinks()) d.density_breakpoints.push_back(k.position);
  d.density_breakpoints.push_back(u.T());
  for (std::size_t i = 0; i + 1 < d.density_breakpoints.size(); ++i) {
    const double mid = 0.5 * (d.density_breakpoints[i] + d.density_breakpoints[i + 1]);
    double v = u.slope();
    for (const auto& k : u.kinks()) {
      const bool active = k.position < 0.5 * u.T() ? mid < k.position : mid > k.position;
      if (active) v += kink_slope(k, u.T(), u.beta());
    }
    d.density_values.push_back(v);
  }
  return d;
}

double l2_inner(const SparseFunction& u, const SparseFunction& v) {
  if (u.T() != v.T()) throw std::invalid_argument("l2_inner: functions live on different intervals");
  return l2_inner(u.to_piecewise(), v.to_piecewise());
}

double l2_norm(const SparseFunction& u) { return std::sqrt(std::max(0.0, l2_inner(u, u))); }

// ---------------------------------------------------------------------------

namespace {

// Coefficients of p(s + delta) from those of p(s).
std::vector<double> taylor_shift(std::vector<double> c, double delta) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = n - 1; k > i; --k) c[k - 1] += delta * c[k];
  return c;
}

double integrate_poly(const std::vector<double>& c, double len) {
  double s = 0.0, power = len;
  for (std::size_t k = 0; k < c.size(); ++k, power *= len) s += c[k] * power / double(k + 1);
  return s;
}

std::vector<double> merged_breakpoints(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breakpoints,
                                         std::vector<std::vector<double>> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (breakpoints_.size() < 2 || breakpoints_.size() != pieces_.size() + 1)
    throw std::invalid_argument("PiecewisePolynomial: need pieces.size() + 1 breakpoints");
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] < breakpoints_[i + 1]))
      throw std::invalid_argument("PiecewisePolynomial: breakpoints must increase strictly");
}

PiecewisePolynomial PiecewisePolynomial::global_on(double T, double from, double to,
                                                   std::vector<double> coeffs) {
  if (!(0.0 <= from && from < to && to <= T))
    throw std::invalid_argument("PiecewisePolynomial::global_on: need 0 <= from < to <= T");
  std::vector<double> bp{0.0};
  std::vector<std::vector<double>> pieces;
  if (from > 0.0) {
    bp.push_back(from);
    pieces.push_back({0.0});
  }
  bp.push_back(to);
  pieces.push_back(taylor_shift(std::move(coeffs), from));
  if (to < T) {
    bp.push_back(T);
    pieces.push_back({0.0});
  }
  return PiecewisePolynomial(std::move(bp), std::move(pieces));
}

PiecewisePolynomial PiecewisePolynomial::zero(double T) { return PiecewisePolynomial({0.0, T}, {{0.0}}); }

double PiecewisePolynomial::operator()(double x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  std::size_t i = it == breakpoints_.begin() ? 0 : std::size_t(it - breakpoints_.begin()) - 1;
  i = std::min(i, pieces_.size() - 1);
  const double s = x - breakpoints_[i];
  double v = 0.0;
  for (auto c = pieces_[i].rbegin(); c != pieces_[i].rend(); ++c) v = v * s + *c;
  return v;
}

PiecewisePolynomial PiecewisePolynomial::refined(std::span<const double> extra) const {
  std::vector<double> add;
  for (double x : extra)
    if (x > breakpoints_.front() && x < breakpoints_.back()) add.push_back(x);
  std::sort(add.begin(), add.end());
  const auto bp = merged_breakpoints(breakpoints_, add);
  if (bp.size() == breakpoints_.size()) return *this;

  std::vector<std::vector<double>> pieces;
  pieces.reserve(bp.size() - 1);
  std::size_t src = 0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    while (src + 1 < pieces_.size() && breakpoints_[src + 1] <= bp[i]) ++src;
    pieces.push_back(taylor_shift(pieces_[src], bp[i] - breakpoints_[src]));
  }
  return PiecewisePolynomial(bp, std::move(pieces));
}

PiecewisePolynomial PiecewisePolynomial::scaled(double c) const {
  auto out = *this;
  for (auto& p : out.pieces_)
    for (auto& v : p) v *= c;
  return out;
}

PiecewisePolynomial PiecewisePolynomial::operator+(const PiecewisePolynomial& other) const {
  if (T() != other.T() || breakpoints_.front() != other.breakpoints_.front())
    throw std::invalid_argument("PiecewisePolynomial addition requires the same interval");
  const auto a = refined(other.breakpoints_);
  const auto b = other.refined(breakpoints_);
  auto pieces = a.pieces_;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& q = b.pieces_[i];
    if (pieces[i].size() < q.size()) pieces[i].resize(q.size(), 0.0);
    for (std::size_t k = 0; k < q.size(); ++k) pieces[i][k] += q[k];
  }
  return PiecewisePolynomial(a.breakpoints_, std::move(pieces));
}

double PiecewisePolynomial::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    s += integrate_poly(pieces_[i], breakpoints_[i + 1] - breakpoints_[i]);
  return s;
}

double l2_inner(const PiecewisePolynomial& u, const PiecewisePolynomial& v) {
  if (u.T() != v.T()) throw std::invalid_argument("l2_inner: functions live on different intervals");
  const auto a = u.refined(v.breakpoints());
  const auto b = v.refined(u.breakpoints());
  double s = 0.0;
  for (std::size_t i = 0; i < a.pieces().size(); ++i) {
    const auto& p = a.pieces()[i];
    const auto& q = b.pieces()[i];
    std::vector<double> prod(p.size() + q.size() - 1, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k)
      for (std::size_t l = 0; l < q.size(); ++l) prod[k + l] += p[k] * q[l];
    s += integrate_poly(prod, a.breakpoints()[i + 1] - a.breakpoints()[i]);
  }
  return s;
}

}  // namespace tgv1d
