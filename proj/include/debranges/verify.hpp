#ifndef DEBRANGES_VERIFY_HPP
#define DEBRANGES_VERIFY_HPP

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "debranges/kernels.hpp"
#include "debranges/sigma.hpp"

namespace debranges {

/// Outcome of one numerical identity check. passed == (max_rel_residual <= tolerance).
struct CheckReport {
  std::string check_id;
  std::size_t samples = 0;
  double max_rel_residual = 0.0;
  double tolerance = 0.0;
  double condition_estimate = 1.0;
  bool passed = false;
  /// Extra named quantities (margins, per-reading residuals).
  std::vector<std::pair<std::string, double>> metrics;
  std::string note;
};

namespace checks {
inline constexpr const char* kTheorem2 = "theorem2";
inline constexpr const char* kN1Star = "n1_star";
inline constexpr const char* kN1Bilinear = "n1_bilinear";
inline constexpr const char* kN1Kernel = "n1_kernel";
inline constexpr const char* kPwNorm = "pw_det_norm";
inline constexpr const char* kPwStar = "pw_det_star";
inline constexpr const char* kHbInheritance = "hb_inheritance";
inline constexpr const char* kProjection = "projection";
inline constexpr const char* kDeriveRoutes = "derive_routes";
inline constexpr const char* kConfluence = "confluence_limit";
}  // namespace checks

/// Every check id, in suite order.
std::vector<std::string> check_ids();

/// Base tolerance per check id; each check scales it by max(1, cond / 1e4).
class Tolerances {
 public:
  Tolerances();
  double base(const std::string& check_id) const;
  void set(const std::string& check_id, double value);

 private:
  std::map<std::string, double> base_;
};

double scaled_tolerance(double base, double condition_estimate);

/**
 * Seeded sampler. Uniform doubles are (mt19937_64() >> 11) * 2^-53, so the
 * stream is identical on every platform for a given seed.
 */
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed);
  double uniform();
  /// Uniform point in the disk |p| <= radius.
  cplx disk(double radius);
  /// Uniform point in the upper half of the disk, Im > 0.
  cplx upper_half_disk(double radius);

 private:
  std::mt19937_64 engine_;
};

CheckReport check_theorem2(const StructureFunction& space, std::span<const cplx> zeros, std::size_t sample_count,
                           std::uint64_t seed, double base_tolerance = 1e-8);

std::vector<CheckReport> check_n1_identities(const StructureFunction& space, cplx z1, std::size_t sample_count,
                                             std::uint64_t seed, double base_tolerance = 1e-10);

/// Both determinant identities of the Paley-Wiener example, assembled directly
/// from the sinc entries. The pw_det_star report records which conjugation
/// reading of the second identity holds.
std::vector<CheckReport> check_pw_example(double x, std::span<const cplx> zeros, std::span<const cplx> z_samples,
                                          double base_tolerance = 1e-9);

CheckReport check_hb_inheritance(const StructureFunction& space, std::span<const cplx> zeros,
                                 std::size_t sample_count, std::uint64_t seed);

/// Orthogonality of the projection residual at the zeros, plus agreement of
/// the solve and determinant kernel routes at the w samples.
CheckReport check_projection(const StructureFunction& space, std::span<const cplx> zeros, cplx z,
                             std::span<const cplx> w_samples, double base_tolerance = 1e-9);

/// derive vs derive_iterative coefficients (distinct zeros only).
CheckReport check_derive_routes(const StructureFunction& space, std::span<const cplx> zeros,
                                double base_tolerance = 1e-9);

/// Epsilon-split extrapolation vs analytic confluent Gram entries, kernels and
/// incomplete forms.
CheckReport check_confluence(const StructureFunction& space, std::span<const cplx> zeros, std::uint64_t seed,
                             double base_tolerance = 1e-5);

/// The default suite for one (space, sigma) configuration. Checks that do not
/// apply (n1 identities for n != 1, PW determinants off PW, ...) are skipped.
std::vector<CheckReport> run_default_suite(const StructureFunction& space, std::span<const cplx> zeros,
                                           std::uint64_t seed, const Tolerances& tolerances = {});

}  // namespace debranges

#endif  // DEBRANGES_VERIFY_HPP
