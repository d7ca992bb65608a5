#include "debranges/structure.hpp"

#include <algorithm>
#include <cmath>

#include "debranges/errors.hpp"

namespace debranges {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

cplx base_derivative(const StructureFunction& sf, Which which, cplx w, int order) {
  return which == Which::E_sigma ? detail::E_derivative(sf, w, order)
                                 : detail::E_star_derivative(sf, w, order);
}

std::vector<cplx> to_vector(const VectorXc& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

SigmaStructureFunction::SigmaStructureFunction(StructureFunction base, ZeroSequence zeros,
                                               std::vector<cplx> coeffs_E, std::vector<cplx> coeffs_F,
                                               double condition_estimate)
    : base_(std::move(base)),
      zeros_(std::move(zeros)),
      coeffs_E_(std::move(coeffs_E)),
      coeffs_F_(std::move(coeffs_F)),
      condition_(condition_estimate) {
  if (coeffs_E_.size() != zeros_.size() || coeffs_F_.size() != zeros_.size())
    throw DomainError("coefficient count must match the number of zeros");
}

cplx SigmaStructureFunction::incomplete_derivative(Which which, cplx w, int order) const {
  const auto& c = which == Which::E_sigma ? coeffs_E_ : coeffs_F_;
  cplx p = base_derivative(base_, which, w, order);
  for (std::size_t j = 0; j < zeros_.size(); ++j)
    p -= c[j] * detail::mixed_partial_unchecked(base_, order, zeros_.confluence()[j], zeros_[j], w);
  return p;
}

cplx SigmaStructureFunction::incomplete(Which which, cplx w) const {
  return incomplete_derivative(which, w, 0);
}

cplx SigmaStructureFunction::eval(Which which, cplx w) const {
  const detail::Anchor a = detail::locate(zeros_, w);
  if (a.multiplicity == 0) return incomplete(which, w) / a.deflated;

  const int needed = a.multiplicity + zeros_.max_confluence();
  if (needed > base_.max_derivative_order()) throw UnsupportedOrderError(needed, base_.max_derivative_order());

  const int extra = a.offset != cplx{} ? detail::kDesingularizationTerms : 0;
  cplx sum{};
  cplx power{1.0, 0.0};
  for (int l = 0; l <= extra; ++l) {
    const int order = a.multiplicity + l;
    sum += incomplete_derivative(which, a.center, order) / factorial(order) * power;
    power *= a.offset;
  }
  return sum / a.deflated;
}

SigmaStructureFunction derive(const GramSystem& gs) {
  const auto& zs = gs.zeros();
  const auto& sf = gs.space();
  const auto n = static_cast<Eigen::Index>(zs.size());
  MatrixXc rhs(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs(i, 0) = detail::E_derivative(sf, zs[i], zs.confluence()[i]);
    rhs(i, 1) = detail::E_star_derivative(sf, zs[i], zs.confluence()[i]);
  }
  const MatrixXc coeffs = gs.solve(rhs);
  return SigmaStructureFunction(sf, zs, to_vector(coeffs.col(0)), to_vector(coeffs.col(1)),
                                gs.condition_estimate());
}

SigmaStructureFunction derive_iterative(const StructureFunction& space, const ZeroSequence& zeros) {
  if (!zeros.distinct()) throw DomainError("derive_iterative needs distinct zeros; use derive");

  const std::size_t n = zeros.size();
  std::vector<cplx> c, d;
  double cond = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const ZeroSequence prefix = canonicalize(std::span(zeros.points()).first(k));
    const GramSystem gs = GramSystem::build(space, prefix);
    const SigmaStructureFunction current(space, prefix, c, d, gs.condition_estimate());

    const cplx zk = zeros[k];
    const double kernel_diag = sigma_kernel(gs, zk, zk).real();
    if (!(kernel_diag > 0.0))
      throw LinearDependenceError("intermediate evaluator vanishes; zero space reached", gs.condition_estimate());
    const cplx g = std::conj(gamma(prefix, zk));
    const cplx lambda_E = current.eval(Which::E_sigma, zk) * g / kernel_diag;
    const cplx lambda_F = current.eval(Which::F_sigma, zk) * g / kernel_diag;

    // p_k = p_{k-1} - lambda (Z_k - sum_j beta_j Z_j)
    const std::vector<cplx> beta = solve_beta(gs, zk);
    for (std::size_t j = 0; j < k; ++j) {
      c[j] -= lambda_E * beta[j];
      d[j] -= lambda_F * beta[j];
    }
    c.push_back(lambda_E);
    d.push_back(lambda_F);
    cond = std::max(cond, gs.condition_estimate());
  }
  if (n > 0) cond = std::max(cond, GramSystem::build(space, zeros).condition_estimate());
  return SigmaStructureFunction(space, zeros, std::move(c), std::move(d), cond);
}

std::vector<double> EpsilonOracle::schedule() const {
  std::vector<double> eps;
  eps.reserve(levels_.size());
  for (const auto& l : levels_) eps.push_back(l.eps);
  return eps;
}

cplx EpsilonOracle::incomplete(Which which, cplx w) const {
  std::vector<cplx> values;
  for (const auto& l : levels_) values.push_back(l.structure.incomplete(which, w));
  return extrapolate_to_zero(schedule(), values);
}

cplx EpsilonOracle::eval(Which which, cplx w) const { return gamma(zeros_, w) * incomplete(which, w); }

cplx EpsilonOracle::gram_entry(std::size_t i, std::size_t j) const {
  if (i >= zeros_.size() || j >= zeros_.size()) throw DomainError("gram_entry index out of range");
  const int ki = zeros_.confluence()[i];
  const int kj = zeros_.confluence()[j];
  std::vector<cplx> values;
  for (const auto& level : levels_) {
    const double eps = level.eps;
    cplx sum{};
    double bl = 1.0;
    for (int l = 0; l <= ki; ++l) {
      if (l > 0) bl = bl * (ki - l + 1) / l;
      double bm = 1.0;
      for (int m = 0; m <= kj; ++m) {
        if (m > 0) bm = bm * (kj - m + 1) / m;
        const double sign = ((l + m) % 2 == 0) ? 1.0 : -1.0;
        sum += sign * bl * bm * kernel(space_, zeros_[j] - m * eps, zeros_[i] - l * eps);
      }
    }
    values.push_back(sum / std::pow(eps, ki + kj));
  }
  return extrapolate_to_zero(schedule(), values);
}

cplx EpsilonOracle::kernel_incomplete(cplx z, cplx w) const {
  std::vector<cplx> values;
  for (const auto& level : levels_) {
    const std::vector<cplx> alpha = solve_beta(level.gram, z);
    cplx k = kernel(space_, z, w);
    for (std::size_t j = 0; j < alpha.size(); ++j) k -= alpha[j] * kernel(space_, level.split[j], w);
    values.push_back(k);
  }
  return extrapolate_to_zero(schedule(), values);
}

EpsilonOracle derive_epsilon_oracle(const StructureFunction& space, const ZeroSequence& zeros,
                                    std::span<const double> eps_schedule) {
  if (eps_schedule.empty()) throw InvalidScheduleError("empty epsilon schedule");
  std::vector<EpsilonOracle::Level> levels;
  for (double eps : eps_schedule) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidScheduleError("epsilon values must be positive");
    std::vector<cplx> split(zeros.size());
    for (std::size_t i = 0; i < zeros.size(); ++i) split[i] = zeros[i] - static_cast<double>(zeros.confluence()[i]) * eps;
    ZeroSequence split_zs = canonicalize(split);
    if (!split_zs.distinct()) throw InvalidScheduleError("split zeros collide for the given epsilon");
    GramSystem gs = GramSystem::build(space, split_zs);
    SigmaStructureFunction ssf = derive(gs);
    levels.push_back({eps, std::move(split_zs), std::move(gs), std::move(ssf)});
  }
  for (std::size_t a = 0; a < levels.size(); ++a)
    for (std::size_t b = a + 1; b < levels.size(); ++b)
      if (levels[a].eps == levels[b].eps) throw InvalidScheduleError("epsilon values must be distinct");
  return EpsilonOracle(space, zeros, std::move(levels));
}

}  // namespace debranges
