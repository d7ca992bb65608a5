#include "debranges/gram.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "debranges/errors.hpp"

namespace debranges {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

cplx ipow(cplx base, int n) {
  cplx r{1.0, 0.0};
  for (int k = 0; k < n; ++k) r *= base;
  return r;
}

[[noreturn]] void throw_dependence(double cond, const char* why) {
  std::ostringstream os;
  os.precision(6);
  os << "evaluators at the imposed zeros are linearly dependent (" << why
     << ", condition estimate " << cond << ")";
  throw LinearDependenceError(os.str(), cond);
}

}  // namespace

GramSystem GramSystem::build(const StructureFunction& space, const ZeroSequence& zeros) {
  GramSystem gs(space, zeros);
  const auto n = static_cast<Eigen::Index>(zeros.size());
  if (n == 0) return gs;

  const int kmax = zeros.max_confluence();
  if (2 * kmax > space.max_derivative_order())
    throw UnsupportedOrderError(2 * kmax, space.max_derivative_order());

  const auto& z = zeros.points();
  const auto& k = zeros.confluence();
  MatrixXc G(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      G(i, j) = detail::mixed_partial_unchecked(space, k[i], k[j], z[j], z[i]);
  gs.matrix_ = 0.5 * (G + G.adjoint());

  Eigen::SelfAdjointEigenSolver<MatrixXc> eig(gs.matrix_, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || !std::isfinite(lmax)) {
    gs.condition_ = std::numeric_limits<double>::infinity();
    throw_dependence(gs.condition_, "non-positive eigenvalue");
  }
  gs.condition_ = lmax / lmin;
  if (gs.condition_ > kDependenceThreshold) throw_dependence(gs.condition_, "condition above threshold");

  gs.llt_.compute(gs.matrix_);
  if (gs.llt_.info() != Eigen::Success) throw_dependence(gs.condition_, "non-positive pivot");

  double det = 1.0;
  const MatrixXc L = gs.llt_.matrixL();
  for (Eigen::Index i = 0; i < n; ++i) det *= std::norm(L(i, i));
  gs.det_ = det;
  return gs;
}

VectorXc GramSystem::solve(const VectorXc& rhs) const {
  if (size() == 0) return rhs;
  return llt_.solve(rhs);
}

MatrixXc GramSystem::solve(const MatrixXc& rhs) const {
  if (size() == 0) return rhs;
  return llt_.solve(rhs);
}

std::vector<cplx> solve_beta(const GramSystem& gs, cplx z) {
  const auto& zs = gs.zeros();
  const auto n = static_cast<Eigen::Index>(zs.size());
  VectorXc rhs(n);
  for (Eigen::Index i = 0; i < n; ++i)
    rhs(i) = detail::mixed_partial_unchecked(gs.space(), zs.confluence()[i], 0, z, zs[i]);
  const VectorXc beta = gs.solve(rhs);
  return {beta.data(), beta.data() + beta.size()};
}

double sigma_desingularization_radius(cplx zero) noexcept { return 1e-3 * (1.0 + std::abs(zero)); }

namespace detail {

Anchor locate(const ZeroSequence& zs, cplx p) {
  const auto& groups = zs.groups();
  std::size_t best = groups.size();
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double d = std::abs(p - groups[g].value);
    if (d <= sigma_desingularization_radius(groups[g].value) && d < best_dist) {
      best = g;
      best_dist = d;
    }
  }
  Anchor a;
  if (best == groups.size()) {
    a.center = p;
    for (const cplx& zj : zs.points()) a.deflated *= (p - zj);
    return a;
  }
  a.center = groups[best].value;
  a.multiplicity = groups[best].multiplicity;
  a.offset = p - a.center;
  a.deflated = zs.deflated_product(best, p);
  return a;
}

}  // namespace detail

cplx sigma_kernel(const GramSystem& gs, cplx z, cplx w) {
  const auto& zs = gs.zeros();
  const auto& sf = gs.space();
  const auto n = static_cast<Eigen::Index>(zs.size());
  if (n == 0) return kernel(sf, z, w);

  const detail::Anchor az = detail::locate(zs, z);
  const detail::Anchor aw = detail::locate(zs, w);
  const int kmax = zs.max_confluence();
  const int needed = std::max({az.multiplicity + aw.multiplicity, az.multiplicity + kmax, aw.multiplicity + kmax});
  if (needed > sf.max_derivative_order()) throw UnsupportedOrderError(needed, sf.max_derivative_order());

  // Taylor orders beyond the leading one; none needed when sitting exactly on a zero.
  const int extra_q = (az.multiplicity > 0 && az.offset != cplx{}) ? detail::kDesingularizationTerms : 0;
  const int extra_p = (aw.multiplicity > 0 && aw.offset != cplx{}) ? detail::kDesingularizationTerms : 0;
  const int q0 = az.multiplicity;
  const int p0 = aw.multiplicity;

  // beta^{(q)} = G^{-1} [d^q/d(conj z)^q (Z_i, Z_z)]
  MatrixXc rhs(n, extra_q + 1);
  for (int q = 0; q <= extra_q; ++q)
    for (Eigen::Index i = 0; i < n; ++i)
      rhs(i, q) = detail::mixed_partial_unchecked(sf, zs.confluence()[i], q0 + q, az.center, zs[i]);
  const MatrixXc beta = gs.solve(rhs);

  cplx sum{};
  for (int p = 0; p <= extra_p; ++p) {
    VectorXc basis(n);
    for (Eigen::Index j = 0; j < n; ++j)
      basis(j) = detail::mixed_partial_unchecked(sf, p0 + p, zs.confluence()[j], zs[j], aw.center);
    const cplx wpow = ipow(aw.offset, p);
    for (int q = 0; q <= extra_q; ++q) {
      const cplx t = detail::mixed_partial_unchecked(sf, p0 + p, q0 + q, az.center, aw.center) -
                     basis.cwiseProduct(beta.col(q)).sum();
      sum += t / (factorial(p0 + p) * factorial(q0 + q)) * wpow * ipow(std::conj(az.offset), q);
    }
  }
  return sum / (std::conj(az.deflated) * aw.deflated);
}

cplx dense_determinant(const MatrixXc& m) {
  if (m.rows() != m.cols()) throw DomainError("determinant of a non-square matrix");
  switch (m.rows()) {
    case 0:
      return 1.0;
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    default:
      return Eigen::PartialPivLU<MatrixXc>(m).determinant();
  }
}

cplx sigma_kernel_det(const GramSystem& gs, cplx z, cplx w) {
  const auto& zs = gs.zeros();
  const auto& sf = gs.space();
  for (const cplx& zi : zs.points()) {
    if (z == zi || w == zi) throw DomainError("sigma_kernel_det is undefined on the imposed zeros");
  }
  const auto n = static_cast<Eigen::Index>(zs.size());
  MatrixXc B(n + 1, n + 1);
  B.topLeftCorner(n, n) = gs.matrix();
  for (Eigen::Index i = 0; i < n; ++i) {
    B(i, n) = detail::mixed_partial_unchecked(sf, zs.confluence()[i], 0, z, zs[i]);
    B(n, i) = detail::mixed_partial_unchecked(sf, 0, zs.confluence()[i], zs[i], w);
  }
  B(n, n) = kernel(sf, z, w);
  const cplx ratio = dense_determinant(B) / dense_determinant(gs.matrix());
  return gamma(zs, w) * std::conj(gamma(zs, z)) * ratio;
}

}  // namespace debranges
