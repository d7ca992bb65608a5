#ifndef DEBRANGES_GRAM_HPP
#define DEBRANGES_GRAM_HPP

#include <Eigen/Dense>
#include <vector>

#include "debranges/kernels.hpp"
#include "debranges/sigma.hpp"

namespace debranges {

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// Condition estimates above this are reported as linear dependence.
inline constexpr double kDependenceThreshold = 1e12;

/**
 * Gram matrix of the evaluators at the imposed zeros,
 *   G(i, j) = (Z_i, Z_j) = d^{k_i}/dw^{k_i} d^{k_j}/d(conj z)^{k_j} Z(z_j, z_i),
 * Hermitian-symmetrized and Cholesky-factorized.
 *
 * build() refuses systems whose condition estimate exceeds
 * kDependenceThreshold or whose factorization meets a non-positive pivot.
 */
class GramSystem {
 public:
  static GramSystem build(const StructureFunction& space, const ZeroSequence& zeros);

  const StructureFunction& space() const noexcept { return space_; }
  const ZeroSequence& zeros() const noexcept { return zeros_; }
  const MatrixXc& matrix() const noexcept { return matrix_; }
  std::size_t size() const noexcept { return zeros_.size(); }

  /// det G (real and positive for a valid system); 1 for the empty system.
  double det() const noexcept { return det_; }
  /// 2-norm condition number from the extreme eigenvalues; 1 when empty.
  double condition_estimate() const noexcept { return condition_; }

  VectorXc solve(const VectorXc& rhs) const;
  MatrixXc solve(const MatrixXc& rhs) const;

 private:
  GramSystem(StructureFunction space, ZeroSequence zeros)
      : space_(std::move(space)), zeros_(std::move(zeros)) {}

  StructureFunction space_;
  ZeroSequence zeros_;
  MatrixXc matrix_;
  Eigen::LLT<MatrixXc> llt_;
  double det_ = 1.0;
  double condition_ = 1.0;
};

/// Coefficients beta with sum_j beta_j Z_j[z_i] = Z_z[z_i] for every i.
std::vector<cplx> solve_beta(const GramSystem& gs, cplx z);

/// K_z^sigma(w) through the linear-solve route,
///   gamma(w) conj(gamma(z)) (Z_z(w) - sum_j beta_j(z) Z_j(w)),
/// with the limit taken analytically when z or w sits at (or within
/// sigma_desingularization_radius of) an imposed zero.
cplx sigma_kernel(const GramSystem& gs, cplx z, cplx w);

/// Same value through the bordered (n+1)x(n+1) determinant divided by det G.
/// Test-only route; z or w in sigma is a DomainError.
cplx sigma_kernel_det(const GramSystem& gs, cplx z, cplx w);

/// Radius around an imposed zero inside which evaluation switches to the
/// Taylor (L'Hopital) form.
double sigma_desingularization_radius(cplx zero) noexcept;

/// Determinant of a small dense matrix: closed form up to 2x2, partial-pivot
/// LU beyond.
cplx dense_determinant(const MatrixXc& m);

namespace detail {

/// Where a point sits relative to sigma: either a regular point (multiplicity
/// 0, offset 0, deflated = prod (p - z_j)), or within the radius of a group.
struct Anchor {
  cplx center;
  int multiplicity = 0;
  cplx offset{};
  cplx deflated{1.0, 0.0};
};

Anchor locate(const ZeroSequence& zs, cplx p);

/// Number of extra Taylor orders used inside the de-singularization radius.
inline constexpr int kDesingularizationTerms = 6;

}  // namespace detail

}  // namespace debranges

#endif  // DEBRANGES_GRAM_HPP
