#include "debranges/sigma.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

#include "debranges/errors.hpp"

namespace debranges {

bool same_zero(cplx a, cplx b) noexcept {
  return std::bit_cast<std::uint64_t>(a.real()) == std::bit_cast<std::uint64_t>(b.real()) &&
         std::bit_cast<std::uint64_t>(a.imag()) == std::bit_cast<std::uint64_t>(b.imag());
}

int ZeroSequence::max_confluence() const noexcept {
  int k = 0;
  for (int c : confluence_) k = std::max(k, c);
  return k;
}

cplx ZeroSequence::deflated_product(std::size_t group, cplx w) const {
  const ZeroGroup& g = groups_.at(group);
  cplx p{1.0, 0.0};
  for (std::size_t j = 0; j < points_.size(); ++j) {
    if (j >= g.first && j < g.first + static_cast<std::size_t>(g.multiplicity)) continue;
    p *= (w - points_[j]);
  }
  return p;
}

ZeroSequence canonicalize(std::span<const cplx> points) {
  ZeroSequence zs;
  std::vector<std::pair<cplx, int>> runs;
  for (const cplx& p : points) {
    auto it = std::find_if(runs.begin(), runs.end(), [&](const auto& r) { return same_zero(r.first, p); });
    if (it == runs.end())
      runs.emplace_back(p, 1);
    else
      ++it->second;
  }
  for (const auto& [value, count] : runs) {
    zs.groups_.push_back({value, zs.points_.size(), count});
    for (int k = 0; k < count; ++k) {
      zs.points_.push_back(value);
      zs.confluence_.push_back(k);
    }
  }
  return zs;
}

cplx gamma(const ZeroSequence& zs, cplx z) {
  cplx denom{1.0, 0.0};
  for (const cplx& zi : zs.points()) {
    if (z == zi) throw PoleError("gamma evaluated at an imposed zero");
    denom *= (z - zi);
  }
  return 1.0 / denom;
}

cplx bracket(const AnalyticFunction& f, const ZeroSequence& zs, std::size_t i) {
  if (i >= zs.size()) throw DomainError("bracket index out of range");
  return f(zs[i], zs.confluence()[i]);
}

cplx bracket_eps(const PlainFunction& f, const ZeroSequence& zs, std::size_t i, double eps) {
  if (i >= zs.size()) throw DomainError("bracket index out of range");
  if (!(eps > 0.0)) throw DomainError("bracket_eps needs eps > 0");
  const int k = zs.confluence()[i];
  cplx sum{};
  double binom = 1.0;
  for (int l = 0; l <= k; ++l) {
    if (l > 0) binom = binom * (k - l + 1) / l;
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binom * f(zs[i] - static_cast<double>(l) * eps);
  }
  return sum / std::pow(eps, k);
}

cplx extrapolate_to_zero(std::span<const double> eps, std::span<const cplx> values) {
  if (eps.size() != values.size() || eps.empty())
    throw DomainError("extrapolation needs matching, nonempty node and value lists");
  std::vector<cplx> t(values.begin(), values.end());
  const std::size_t n = t.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double h0 = eps[i];
      const double h1 = eps[i + level];
      if (h0 == h1) throw InvalidScheduleError("extrapolation nodes must be distinct");
      // value of the interpolant through nodes i..i+level at eps = 0
      t[i] = (h0 * t[i + 1] - h1 * t[i]) / (h0 - h1);
    }
  }
  return t[0];
}

}  // namespace debranges
