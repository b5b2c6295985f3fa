#include "tgv1d/fidelity.hpp"

#include <stdexcept>

namespace tgv1d {

L2Fidelity::L2Fidelity(PiecewisePolynomial data) : data_(std::move(data)) {}

double L2Fidelity::value(const SparseFunction& u) const {
  const auto r = u.to_piecewise() - data_;
  return 0.5 * l2_inner(r, r);
}

double L2Fidelity::gradient_inner(const SparseFunction& u, const SparseFunction& v) const {
  return l2_inner(u.to_piecewise() - data_, v.to_piecewise());
}

LinearModel L2Fidelity::linear_model(std::span<const SparseFunction> basis) const {
  const auto n = Eigen::Index(basis.size());
  std::vector<PiecewisePolynomial> pp;
  for (const auto& b : basis) pp.push_back(b.to_piecewise());
  Eigen::MatrixXd G(n, n);
  Eigen::VectorXd c(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c(i) = l2_inner(pp[i], data_);
    for (Eigen::Index j = 0; j <= i; ++j) G(i, j) = G(j, i) = l2_inner(pp[i], pp[j]);
  }
  // G = V diag(ev) V^T; f = 1/2 |diag(sqrt ev) V^T theta - y|^2 + offset.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  const double cutoff = 1e-14 * std::max(1.0, es.eigenvalues().maxCoeff());
  LinearModel m;
  m.A = Eigen::MatrixXd::Zero(n, n);
  m.y = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd vc = es.eigenvectors().transpose() * c;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double ev = es.eigenvalues()(k);
    if (ev <= cutoff) continue;
    const double s = std::sqrt(ev);
    m.A.row(k) = s * es.eigenvectors().col(k).transpose();
    m.y(k) = vc(k) / s;
  }
  m.offset = 0.5 * (l2_inner(data_, data_) - m.y.squaredNorm());
  return m;
}

}  // namespace tgv1d
