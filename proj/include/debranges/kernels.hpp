#ifndef DEBRANGES_KERNELS_HPP
#define DEBRANGES_KERNELS_HPP

#include <complex>
#include <limits>
#include <variant>
#include <vector>

namespace debranges {

using cplx = std::complex<double>;

inline constexpr int kUnlimitedOrder = std::numeric_limits<int>::max();

/// E(z) = exp(-i x z), generating the Paley-Wiener space of exponential type x.
struct PaleyWiener {
  double x;
};

/// E(z) = prod (z - w_j) with every root strictly in the lower half-plane.
/// The generated space is the polynomials of degree < deg E.
struct PolynomialHB {
  std::vector<cplx> roots;
};

/**
 * A Hermite-Biehler structure function E together with the highest
 * derivative order it is trusted to supply.
 *
 * Instances are immutable; use the named constructors, which validate the
 * family parameters.
 */
class StructureFunction {
 public:
  using Family = std::variant<PaleyWiener, PolynomialHB>;

  static StructureFunction paley_wiener(double x, int max_derivative_order = kUnlimitedOrder);
  static StructureFunction polynomial_hb(std::vector<cplx> roots, int max_derivative_order = 16);

  const Family& family() const noexcept { return family_; }
  int max_derivative_order() const noexcept { return max_order_; }

  bool is_paley_wiener() const noexcept { return std::holds_alternative<PaleyWiener>(family_); }
  /// Exponential type for PW, 0 otherwise.
  double pw_type() const noexcept;
  /// Degree of E for the polynomial family, -1 for PW.
  int degree() const noexcept;

 private:
  StructureFunction(Family f, int max_order) : family_(std::move(f)), max_order_(max_order) {}

  Family family_;
  int max_order_;
};

// Derivatives of E and of E*(w) = conj(E(conj w)). Throw UnsupportedOrderError
// when order > max_derivative_order.
cplx eval_E(const StructureFunction& sf, cplx w, int order = 0);
cplx eval_E_star(const StructureFunction& sf, cplx w, int order = 0);

/// Reproducing kernel Z_z(w) of H(E):
///   (conj E(z) E(w) - conj E*(z) E*(w)) / (i (conj z - w)),
/// with the removable singularity at w = conj z evaluated by series.
cplx kernel(const StructureFunction& sf, cplx z, cplx w);

/// d^a/dw^a d^b/d(conj z)^b of Z_z(w). Requires a + b <= max_derivative_order.
/// PW uses the moment integral i^a (-i)^b int_{-x}^{x} t^{a+b} e^{i(w - conj z)t} dt
/// in closed form; the polynomial family uses kernel_mixed_partial_leibniz.
cplx kernel_mixed_partial(const StructureFunction& sf, int a, int b, cplx z, cplx w);

/// The family-agnostic route: Leibniz expansion of the quotient form of the
/// kernel away from the diagonal, bivariate Taylor expansion near it.
/// Available for every family so the PW closed form can be checked against it.
cplx kernel_mixed_partial_leibniz(const StructureFunction& sf, int a, int b, cplx z, cplx w);

/// |E(z)|^2 - |E*(z)|^2; strictly positive for Im z > 0. Im z <= 0 is a DomainError.
double hb_margin(const StructureFunction& sf, cplx z);

/// int_{-1}^{1} s^m e^{i mu s} ds, series-protected near mu = 0.
cplx sinc_moment(int m, cplx mu);

namespace detail {
// Unchecked derivatives (no budget enforcement); exact for both families.
cplx E_derivative(const StructureFunction& sf, cplx w, int order);
cplx E_star_derivative(const StructureFunction& sf, cplx w, int order);
cplx mixed_partial_unchecked(const StructureFunction& sf, int a, int b, cplx z, cplx w);
}  // namespace detail

}  // namespace debranges

#endif  // DEBRANGES_KERNELS_HPP
