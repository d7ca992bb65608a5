#include "debranges/kernels.hpp"

#include <array>
#include <cmath>
#include <string>

#include "debranges/errors.hpp"

namespace debranges {

namespace {

constexpr cplx kI{0.0, 1.0};

// Below this |mu| the order-0 moment 2 sin(mu)/mu is summed as a degree-8 series.
constexpr double kSincSeriesRadius = 1e-3;

// Near-diagonal radius (in units of |conj z - w| * scale) for the Taylor route.
constexpr double kTaylorRadius = 0.5;
// Extra Taylor orders for PW on the generic route; (0.5)^40 / 40! is far below eps.
constexpr int kPwTaylorExtra = 40;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
  return c;
}

double falling_factorial(int n, int k) {
  double f = 1.0;
  for (int j = 0; j < k; ++j) f *= (n - j);
  return f;
}

cplx ipow(cplx base, int n) {
  cplx r{1.0, 0.0};
  for (int k = 0; k < n; ++k) r *= base;
  return r;
}

void check_order(const StructureFunction& sf, int order) {
  if (order < 0) throw DomainError("negative derivative order " + std::to_string(order));
  if (order > sf.max_derivative_order())
    throw UnsupportedOrderError(order, sf.max_derivative_order());
}

// m-th derivative of prod_j (w - r_j): expand prod_j ((w - r_j) + t) in t and
// read off m! [t^m].
cplx polynomial_derivative(const std::vector<cplx>& roots, cplx w, int m) {
  const int d = static_cast<int>(roots.size());
  if (m > d) return 0.0;
  std::vector<cplx> coeff(d + 1, cplx{});
  coeff[0] = 1.0;
  for (int j = 0; j < d; ++j) {
    const cplx a = w - roots[j];
    for (int k = j + 1; k >= 1; --k) coeff[k] = coeff[k] * a + coeff[k - 1];
    coeff[0] *= a;
  }
  return factorial(m) * coeff[m];
}

cplx pw_mixed_partial(double x, int a, int b, cplx z, cplx w) {
  const int m = a + b;
  const cplx mu = x * (w - std::conj(z));
  return ipow(kI, a) * ipow(-kI, b) * std::pow(x, m + 1) * sinc_moment(m, mu);
}

cplx leibniz_far(const StructureFunction& sf, int a, int b, cplx z, cplx w) {
  const cplx u = std::conj(z);
  const cplx delta = u - w;
  cplx sum{};
  for (int r = 0; r <= a; ++r) {
    const cplx Ew = detail::E_derivative(sf, w, r);
    const cplx Esw = detail::E_star_derivative(sf, w, r);
    for (int s = 0; s <= b; ++s) {
      const cplx Esu = detail::E_star_derivative(sf, u, s);
      const cplx Eu = detail::E_derivative(sf, u, s);
      const cplx numer = Esu * Ew - Eu * Esw;
      const int p = (a - r) + (b - s);
      const double sign = ((b - s) % 2 == 0) ? 1.0 : -1.0;
      sum += binomial(a, r) * binomial(b, s) * numer * sign * factorial(p) / ipow(delta, p + 1);
    }
  }
  return sum / kI;
}

// Bivariate Taylor expansion about (u, w) = (w, w). With
//   M(s, r) = E*^(s)(w) E^(r)(w) - E^(s)(w) E*^(r)(w)
// the quotient N(u, w) / (u - w) is a polynomial in (p, q) = (u - w0, w - w0);
// only monomials with q-degree a survive d^a/dq^a at q = 0.
cplx taylor_near(const StructureFunction& sf, int a, int b, cplx z, cplx w) {
  const cplx delta = std::conj(z) - w;
  const int s_max = sf.is_paley_wiener() ? a + b + 1 + kPwTaylorExtra : sf.degree();
  if (s_max < a + 1) return 0.0;

  std::vector<cplx> E(s_max + 1), Es(s_max + 1);
  for (int k = 0; k <= s_max; ++k) {
    E[k] = detail::E_derivative(sf, w, k);
    Es[k] = detail::E_star_derivative(sf, w, k);
  }

  cplx sum{};
  const double a_fact = factorial(a);
  for (int r = 0; r <= a; ++r) {
    for (int s = std::max(a + 1, a + b + 1 - r); s <= s_max; ++s) {
      const cplx M = Es[s] * E[r] - E[s] * Es[r];
      const int alpha = r + s - 1 - a;
      sum += M / (factorial(s) * factorial(r)) * a_fact * falling_factorial(alpha, b) *
             ipow(delta, alpha - b);
    }
  }
  return sum / kI;
}

}  // namespace

StructureFunction StructureFunction::paley_wiener(double x, int max_derivative_order) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("Paley-Wiener type x must be positive and finite");
  if (max_derivative_order < 0) throw DomainError("max_derivative_order must be nonnegative");
  return StructureFunction(PaleyWiener{x}, max_derivative_order);
}

StructureFunction StructureFunction::polynomial_hb(std::vector<cplx> roots, int max_derivative_order) {
  if (roots.empty()) throw DomainError("polynomial structure function needs at least one root");
  for (const auto& r : roots) {
    if (!(r.imag() < 0.0) || !std::isfinite(r.real()))
      throw DomainError("polynomial structure function roots must lie in the open lower half-plane");
  }
  if (max_derivative_order < 0) throw DomainError("max_derivative_order must be nonnegative");
  return StructureFunction(PolynomialHB{std::move(roots)}, max_derivative_order);
}

double StructureFunction::pw_type() const noexcept {
  if (const auto* pw = std::get_if<PaleyWiener>(&family_)) return pw->x;
  return 0.0;
}

int StructureFunction::degree() const noexcept {
  if (const auto* p = std::get_if<PolynomialHB>(&family_)) return static_cast<int>(p->roots.size());
  return -1;
}

namespace detail {

cplx E_derivative(const StructureFunction& sf, cplx w, int order) {
  if (const auto* pw = std::get_if<PaleyWiener>(&sf.family())) {
    return ipow(-kI * pw->x, order) * std::exp(-kI * pw->x * w);
  }
  return polynomial_derivative(std::get<PolynomialHB>(sf.family()).roots, w, order);
}

cplx E_star_derivative(const StructureFunction& sf, cplx w, int order) {
  return std::conj(E_derivative(sf, std::conj(w), order));
}

cplx mixed_partial_unchecked(const StructureFunction& sf, int a, int b, cplx z, cplx w) {
  if (sf.is_paley_wiener()) return pw_mixed_partial(sf.pw_type(), a, b, z, w);
  const cplx delta = std::conj(z) - w;
  if (std::abs(delta) < kTaylorRadius) return taylor_near(sf, a, b, z, w);
  return leibniz_far(sf, a, b, z, w);
}

}  // namespace detail

cplx eval_E(const StructureFunction& sf, cplx w, int order) {
  check_order(sf, order);
  return detail::E_derivative(sf, w, order);
}

cplx eval_E_star(const StructureFunction& sf, cplx w, int order) {
  check_order(sf, order);
  return detail::E_star_derivative(sf, w, order);
}

cplx kernel(const StructureFunction& sf, cplx z, cplx w) {
  return detail::mixed_partial_unchecked(sf, 0, 0, z, w);
}

cplx kernel_mixed_partial(const StructureFunction& sf, int a, int b, cplx z, cplx w) {
  if (a < 0 || b < 0) throw DomainError("negative derivative order");
  check_order(sf, a + b);
  return detail::mixed_partial_unchecked(sf, a, b, z, w);
}

cplx kernel_mixed_partial_leibniz(const StructureFunction& sf, int a, int b, cplx z, cplx w) {
  if (a < 0 || b < 0) throw DomainError("negative derivative order");
  check_order(sf, a + b);
  const double scale = sf.is_paley_wiener() ? sf.pw_type() : 1.0;
  if (std::abs(std::conj(z) - w) * scale < kTaylorRadius) return taylor_near(sf, a, b, z, w);
  return leibniz_far(sf, a, b, z, w);
}

double hb_margin(const StructureFunction& sf, cplx z) {
  if (!(z.imag() > 0.0)) throw DomainError("hb_margin requires Im z > 0");
  return std::norm(detail::E_derivative(sf, z, 0)) - std::norm(detail::E_star_derivative(sf, z, 0));
}

cplx sinc_moment(int m, cplx mu) {
  if (m < 0) throw DomainError("negative moment order");
  const double amu = std::abs(mu);

  if (m == 0) {
    if (amu < kSincSeriesRadius) {
      // 2 (1 - mu^2/3! + mu^4/5! - mu^6/7! + mu^8/9!)
      const cplx m2 = mu * mu;
      return 2.0 * (1.0 + m2 * (-1.0 / 6.0 + m2 * (1.0 / 120.0 + m2 * (-1.0 / 5040.0 + m2 / 362880.0))));
    }
    return 2.0 * std::sin(mu) / mu;
  }

  if (amu < 0.5 * m + 1.0) {
    // sum_k (i mu)^k / k! * int s^{m+k}; odd moments vanish.
    const cplx imu = kI * mu;
    cplx factor{1.0, 0.0};
    cplx sum{};
    for (int k = 0; k < 400; ++k) {
      if (k > 0) factor *= imu / static_cast<double>(k);
      const int n = m + k;
      if (n % 2 == 0) sum += factor * (2.0 / (n + 1));
      if (k > amu && std::abs(factor) * 2.0 / (n + 1) <= 1e-18 * std::abs(sum)) break;
      if (factor == cplx{}) break;
    }
    return sum;
  }

  // Integration by parts: J_k = (e^{i mu} - (-1)^k e^{-i mu}) / (i mu) - k J_{k-1} / (i mu).
  const cplx imu = kI * mu;
  const cplx ep = std::exp(imu);
  const cplx em = std::exp(-imu);
  cplx J = 2.0 * std::sin(mu) / mu;
  for (int k = 1; k <= m; ++k) {
    const cplx boundary = (k % 2 == 0) ? ep - em : ep + em;
    J = (boundary - static_cast<double>(k) * J) / imu;
  }
  return J;
}

}  // namespace debranges
