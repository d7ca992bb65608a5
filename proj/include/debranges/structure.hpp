#ifndef DEBRANGES_STRUCTURE_HPP
#define DEBRANGES_STRUCTURE_HPP

#include <span>
#include <vector>

#include "debranges/gram.hpp"
#include "debranges/kernels.hpp"
#include "debranges/sigma.hpp"

namespace debranges {

enum class Which { E_sigma, F_sigma };

/**
 * The structure function E_sigma of H(sigma), stored as the base E plus
 * correction coefficients:
 *
 *   p_E(w) = E(w) - sum_j c_j Z_j(w),   E_sigma(w) = gamma(w) p_E(w)
 *   p_F(w) = F(w) - sum_j d_j Z_j(w),   F_sigma(w) = gamma(w) p_F(w)
 *
 * with F = E*. The incomplete forms p_E, p_F vanish on sigma with
 * multiplicity.
 */
class SigmaStructureFunction {
 public:
  SigmaStructureFunction(StructureFunction base, ZeroSequence zeros, std::vector<cplx> coeffs_E,
                         std::vector<cplx> coeffs_F, double condition_estimate = 1.0);

  const StructureFunction& base() const noexcept { return base_; }
  const ZeroSequence& zeros() const noexcept { return zeros_; }
  const std::vector<cplx>& coeffs_E() const noexcept { return coeffs_E_; }
  const std::vector<cplx>& coeffs_F() const noexcept { return coeffs_F_; }
  double condition_estimate() const noexcept { return condition_; }

  /// p(w), the incomplete form (entire, vanishing on sigma).
  cplx incomplete(Which which, cplx w) const;
  /// order-th derivative of the incomplete form.
  cplx incomplete_derivative(Which which, cplx w, int order) const;
  /// gamma(w) p(w); near a zero of multiplicity m the leading factor
  /// (w - zeta)^m is cancelled analytically.
  cplx eval(Which which, cplx w) const;

 private:
  StructureFunction base_;
  ZeroSequence zeros_;
  std::vector<cplx> coeffs_E_;
  std::vector<cplx> coeffs_F_;
  double condition_;
};

/// Solves G c = (E[z_i])_i and G d = (F[z_i])_i on the shared factorization.
SigmaStructureFunction derive(const GramSystem& gs);

/// Adds distinct zeros one at a time with the single-zero formula in each
/// intermediate space, re-expressing the result on the original evaluators.
/// Repeated zeros are a DomainError.
SigmaStructureFunction derive_iterative(const StructureFunction& space, const ZeroSequence& zeros);

/**
 * Confluence oracle: repeated zeros are split to z_i - k_i eps for every eps
 * in the schedule, each split problem is solved with distinct zeros, and the
 * results are extrapolated to eps = 0.
 */
class EpsilonOracle {
 public:
  struct Level {
    double eps;
    ZeroSequence split;
    GramSystem gram;
    SigmaStructureFunction structure;
  };

  EpsilonOracle(StructureFunction space, ZeroSequence zeros, std::vector<Level> levels)
      : space_(std::move(space)), zeros_(std::move(zeros)), levels_(std::move(levels)) {}

  const std::vector<Level>& levels() const noexcept { return levels_; }
  const ZeroSequence& zeros() const noexcept { return zeros_; }

  /// Extrapolated incomplete form e_sigma (or f_sigma).
  cplx incomplete(Which which, cplx w) const;
  /// gamma_sigma(w) times the extrapolated incomplete form; w off sigma.
  cplx eval(Which which, cplx w) const;
  /// Extrapolated Z_j^eps[z_i^eps] (0-based indices).
  cplx gram_entry(std::size_t i, std::size_t j) const;
  /// Extrapolated incomplete kernel k^eps(z, w).
  cplx kernel_incomplete(cplx z, cplx w) const;

 private:
  std::vector<double> schedule() const;

  StructureFunction space_;
  ZeroSequence zeros_;
  std::vector<Level> levels_;
};

EpsilonOracle derive_epsilon_oracle(const StructureFunction& space, const ZeroSequence& zeros,
                                    std::span<const double> eps_schedule);

}  // namespace debranges

#endif  // DEBRANGES_STRUCTURE_HPP
