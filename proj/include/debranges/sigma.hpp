#ifndef DEBRANGES_SIGMA_HPP
#define DEBRANGES_SIGMA_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "debranges/kernels.hpp"

namespace debranges {

/// A maximal run of equal zeros inside a ZeroSequence.
struct ZeroGroup {
  cplx value;
  std::size_t first;  // index of the first occurrence
  int multiplicity;
};

/**
 * The finite list of imposed zeros, with equal values stored contiguously.
 *
 * confluence()[i] is the offset of i inside its run: index i - k_i is the
 * first index holding the same value. Built only through canonicalize().
 */
class ZeroSequence {
 public:
  ZeroSequence() = default;

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  const std::vector<cplx>& points() const noexcept { return points_; }
  const std::vector<int>& confluence() const noexcept { return confluence_; }
  const std::vector<ZeroGroup>& groups() const noexcept { return groups_; }

  cplx operator[](std::size_t i) const { return points_[i]; }
  int max_confluence() const noexcept;
  bool distinct() const noexcept { return groups_.size() == points_.size(); }

  /// prod over zeros outside group g of (w - z_j).
  cplx deflated_product(std::size_t group, cplx w) const;

  friend ZeroSequence canonicalize(std::span<const cplx> points);

 private:
  std::vector<cplx> points_;
  std::vector<int> confluence_;
  std::vector<ZeroGroup> groups_;
};

/// Complex equality used for multiplicity bookkeeping (bitwise on both parts).
bool same_zero(cplx a, cplx b) noexcept;

/// Groups bitwise-equal values contiguously, in order of first appearance.
ZeroSequence canonicalize(std::span<const cplx> points);

/// 1 / prod (z - z_i). PoleError if z is one of the zeros.
cplx gamma(const ZeroSequence& zs, cplx z);

/// f(w, order) -> order-th derivative of f at w.
using AnalyticFunction = std::function<cplx(cplx, int)>;
using PlainFunction = std::function<cplx(cplx)>;

/// f[z_i] = f^{(k_i)}(z_i). The index is 0-based.
cplx bracket(const AnalyticFunction& f, const ZeroSequence& zs, std::size_t i);

/// eps^{-k_i} sum_l (-1)^l C(k_i, l) f(z_i - l eps), the one-sided difference
/// that tends to bracket() as eps -> 0.
cplx bracket_eps(const PlainFunction& f, const ZeroSequence& zs, std::size_t i, double eps);

/// Richardson extrapolation to eps = 0 for values with an error expansion in
/// integer powers of eps (Neville's scheme on the given nodes). With two nodes
/// this is the classical first-order elimination.
cplx extrapolate_to_zero(std::span<const double> eps, std::span<const cplx> values);

}  // namespace debranges

#endif  // DEBRANGES_SIGMA_HPP
