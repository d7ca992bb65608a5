#include "debranges/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "debranges/errors.hpp"
#include "debranges/gram.hpp"
#include "debranges/structure.hpp"

namespace debranges {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kSampleRadius = 3.0;
constexpr double kDiagonalExclusion = 1e-3;
// Relative HB margin that counts as strictly positive (well above rounding).
constexpr double kMarginFloor = 1e-14;

const std::vector<double> kDefaultSchedule{1e-2, 5e-3, 2.5e-3};

struct Residual {
  double max = 0.0;
  void add(double r) {
    if (std::isnan(r))
      max = std::numeric_limits<double>::infinity();
    else
      max = std::max(max, r);
  }
};

double rel(cplx a, cplx b, double scale) { return std::abs(a - b) / std::max(1.0, scale); }

CheckReport make_report(const std::string& id, std::size_t samples, double residual, double base_tol,
                        double cond) {
  CheckReport r;
  r.check_id = id;
  r.samples = samples;
  r.max_rel_residual = residual;
  r.condition_estimate = cond;
  r.tolerance = scaled_tolerance(base_tol, cond);
  r.passed = residual <= r.tolerance;
  return r;
}

// Dimension of H(E) when finite (polynomial family), -1 otherwise.
int space_dimension(const StructureFunction& sf) { return sf.is_paley_wiener() ? -1 : sf.degree(); }

cplx conj_reflect(const SigmaStructureFunction& ssf, Which which, cplx w) {
  return std::conj(ssf.eval(which, std::conj(w)));
}

// (z, w) pairs in the sampling disk, away from the w = conj z diagonal.
std::pair<cplx, cplx> sample_pair(Sampler& s) {
  for (;;) {
    const cplx z = s.disk(kSampleRadius);
    const cplx w = s.disk(kSampleRadius);
    if (std::abs(std::conj(z) - w) >= kDiagonalExclusion) return {z, w};
  }
}

bool on_zero(std::span<const cplx> zeros, cplx p) {
  return std::any_of(zeros.begin(), zeros.end(), [&](cplx z) { return z == p; });
}

}  // namespace

std::vector<std::string> check_ids() {
  return {checks::kTheorem2, checks::kN1Star,    checks::kN1Bilinear,     checks::kN1Kernel,
          checks::kPwNorm,   checks::kPwStar,    checks::kHbInheritance,  checks::kProjection,
          checks::kDeriveRoutes, checks::kConfluence};
}

Tolerances::Tolerances()
    : base_{{checks::kTheorem2, 1e-8},   {checks::kN1Star, 1e-10},      {checks::kN1Bilinear, 1e-10},
            {checks::kN1Kernel, 1e-10},  {checks::kPwNorm, 1e-9},       {checks::kPwStar, 1e-9},
            {checks::kHbInheritance, 1.0}, {checks::kProjection, 1e-9}, {checks::kDeriveRoutes, 1e-9},
            {checks::kConfluence, 1e-5}} {}

double Tolerances::base(const std::string& check_id) const {
  auto it = base_.find(check_id);
  if (it == base_.end()) throw DomainError("unknown check id '" + check_id + "'");
  return it->second;
}

void Tolerances::set(const std::string& check_id, double value) {
  if (!base_.contains(check_id)) throw DomainError("unknown check id '" + check_id + "'");
  if (!(value >= 0.0)) throw DomainError("tolerance for '" + check_id + "' must be nonnegative");
  base_[check_id] = value;
}

double scaled_tolerance(double base, double condition_estimate) {
  return base * std::max(1.0, condition_estimate / 1e4);
}

Sampler::Sampler(std::uint64_t seed) : engine_(seed) {}

double Sampler::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

cplx Sampler::disk(double radius) {
  const double r = radius * std::sqrt(uniform());
  const double theta = 2.0 * std::numbers::pi * uniform();
  return std::polar(r, theta);
}

cplx Sampler::upper_half_disk(double radius) {
  for (;;) {
    const double r = radius * std::sqrt(uniform());
    const double theta = std::numbers::pi * uniform();
    const cplx p = std::polar(r, theta);
    if (p.imag() > 0.0) return p;
  }
}

CheckReport check_theorem2(const StructureFunction& space, std::span<const cplx> zeros, std::size_t sample_count,
                           std::uint64_t seed, double base_tolerance) {
  const GramSystem gs = GramSystem::build(space, canonicalize(zeros));
  const SigmaStructureFunction ssf = derive(gs);
  Sampler sampler(seed);
  Residual res;
  for (std::size_t k = 0; k < sample_count; ++k) {
    const auto [z, w] = sample_pair(sampler);
    const cplx K = sigma_kernel(gs, z, w);
    // E_sigma^* taken literally as conj(E_sigma(conj .)).
    const cplx Ez = ssf.eval(Which::E_sigma, z);
    const cplx Ew = ssf.eval(Which::E_sigma, w);
    const cplx Esz = conj_reflect(ssf, Which::E_sigma, z);
    const cplx Esw = conj_reflect(ssf, Which::E_sigma, w);
    const cplx rhs = (std::conj(Ez) * Ew - std::conj(Esz) * Esw) / (kI * (std::conj(z) - w));
    res.add(rel(K, rhs, std::abs(K)));
  }
  return make_report(checks::kTheorem2, sample_count, res.max, base_tolerance, gs.condition_estimate());
}

std::vector<CheckReport> check_n1_identities(const StructureFunction& space, cplx z1, std::size_t sample_count,
                                             std::uint64_t seed, double base_tolerance) {
  const cplx pts[] = {z1};
  const GramSystem gs = GramSystem::build(space, canonicalize(pts));
  const SigmaStructureFunction ssf = derive(gs);
  const double cond = gs.condition_estimate();
  const cplx e1 = detail::E_derivative(space, z1, 0);
  const cplx f1 = detail::E_star_derivative(space, z1, 0);

  Sampler sampler(seed);
  Residual star, bilinear, kern;
  for (std::size_t k = 0; k < sample_count; ++k) {
    auto [z, w] = sample_pair(sampler);

    // calF(w) = calE^*(w)
    const cplx Fw = ssf.eval(Which::F_sigma, w);
    const cplx Estar = conj_reflect(ssf, Which::E_sigma, w);
    star.add(rel(Fw, Estar, std::max(std::abs(Fw), std::abs(Estar))));

    // conj(e1) calE(w) - conj(f1) calF(w) = -i Z_1(w)
    const cplx Ew = ssf.eval(Which::E_sigma, w);
    const cplx lhs = std::conj(e1) * Ew - std::conj(f1) * Fw;
    const cplx Z1w = kernel(space, z1, w);
    bilinear.add(rel(lhs, -kI * Z1w,
                     std::max({std::abs(std::conj(e1) * Ew), std::abs(std::conj(f1) * Fw), std::abs(Z1w)})));

    // gamma_1(w) conj(gamma_1(z)) / (Z1, Z1) * 2x2 bordered determinant = quotient in calE, calF
    if (z == z1 || w == z1) continue;
    const cplx det_side = sigma_kernel_det(gs, z, w);
    const cplx Ez = ssf.eval(Which::E_sigma, z);
    const cplx Fz = ssf.eval(Which::F_sigma, z);
    const cplx d = std::conj(z) - w;
    const cplx quotient = (std::conj(Ez) * Ew - std::conj(Fz) * Fw) / (kI * d);
    const double scale =
        std::max({std::abs(det_side), (std::abs(Ez * Ew) + std::abs(Fz * Fw)) / std::abs(d)});
    kern.add(rel(det_side, quotient, scale));
  }
  return {make_report(checks::kN1Star, sample_count, star.max, base_tolerance, cond),
          make_report(checks::kN1Bilinear, sample_count, bilinear.max, base_tolerance, cond),
          make_report(checks::kN1Kernel, sample_count, kern.max, base_tolerance, cond)};
}

std::vector<CheckReport> check_pw_example(double x, std::span<const cplx> zeros, std::span<const cplx> z_samples,
                                          double base_tolerance) {
  const StructureFunction pw = StructureFunction::paley_wiener(x);
  const ZeroSequence zs = canonicalize(zeros);
  if (!zs.distinct()) throw DomainError("the Paley-Wiener determinant example needs distinct zeros");
  for (const cplx& p : zeros)
    if (p.imag() == 0.0) throw DomainError("the Paley-Wiener determinant example needs non-real zeros");

  const auto n = static_cast<Eigen::Index>(zs.size());
  const double cond = GramSystem::build(pw, zs).condition_estimate();

  // sinc entry 2 sin((conj a - b) x) / (conj a - b) = Z_a(b)
  auto entry = [&](cplx a, cplx b) { return kernel(pw, a, b); };
  MatrixXc A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = entry(zs[j], zs[i]);
  const cplx Gn = dense_determinant(A);

  auto bordered = [&](cplx z, auto last_column) {
    MatrixXc B(n + 1, n + 1);
    B.topLeftCorner(n, n) = A;
    for (Eigen::Index i = 0; i < n; ++i) {
      B(i, n) = last_column(zs[i]);
      B(n, i) = entry(zs[i], z);
    }
    B(n, n) = last_column(z);
    return dense_determinant(B);
  };
  auto e_n = [&](cplx z) { return bordered(z, [&](cplx p) { return std::exp(-kI * x * p); }); };
  auto f_n = [&](cplx z) { return bordered(z, [&](cplx p) { return std::exp(kI * x * p); }); };

  Residual norm_res, conj_reading, literal_reading;
  for (const cplx& z : z_samples) {
    if (z.imag() == 0.0) throw DomainError("Paley-Wiener example samples must be non-real");
    for (const cplx& p : zeros)
      if (z == p || z == std::conj(p)) throw DomainError("sample coincides with a zero or its conjugate");

    const cplx Gzz = bordered(z, [&](cplx p) { return entry(z, p); });
    const cplx en = e_n(z);
    const cplx fn = f_n(z);
    const cplx lhs = Gzz * Gn;
    const cplx rhs = (std::norm(en) - std::norm(fn)) / (2.0 * z.imag());
    norm_res.add(rel(lhs, rhs, std::max(std::abs(lhs), (std::norm(en) + std::norm(fn)) / (2.0 * std::abs(z.imag())))));

    cplx blaschke{1.0, 0.0};
    for (const cplx& p : zeros) blaschke *= (z - p) / (z - std::conj(p));
    const cplx en_reflected = e_n(std::conj(z));
    const cplx with_conj = blaschke * std::conj(en_reflected);
    const cplx literal = blaschke * en_reflected;
    conj_reading.add(rel(fn, with_conj, std::max(std::abs(fn), std::abs(with_conj))));
    literal_reading.add(rel(fn, literal, std::max(std::abs(fn), std::abs(literal))));
  }

  CheckReport norm = make_report(checks::kPwNorm, z_samples.size(), norm_res.max, base_tolerance, cond);

  const double tol = scaled_tolerance(base_tolerance, cond);
  const bool conj_holds = conj_reading.max <= tol;
  const bool literal_holds = literal_reading.max <= tol;
  CheckReport star = make_report(checks::kPwStar, z_samples.size(),
                                 std::min(conj_reading.max, literal_reading.max), base_tolerance, cond);
  star.metrics = {{"residual_conjugated_reading", conj_reading.max},
                  {"residual_literal_reading", literal_reading.max}};
  if (conj_holds && literal_holds)
    star.note = "both readings hold on these samples";
  else if (conj_holds)
    star.note = "holds with conj(e_n(conj z)); literal e_n(conj z) fails";
  else if (literal_holds)
    star.note = "holds with literal e_n(conj z); conjugated reading fails";
  else
    star.note = "neither reading holds";
  return {norm, star};
}

CheckReport check_hb_inheritance(const StructureFunction& space, std::span<const cplx> zeros,
                                 std::size_t sample_count, std::uint64_t seed) {
  const ZeroSequence zs = canonicalize(zeros);
  const GramSystem gs = GramSystem::build(space, zs);
  const SigmaStructureFunction ssf = derive(gs);
  Sampler sampler(seed);
  double min_margin = std::numeric_limits<double>::infinity();
  double min_rel_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sample_count; ++k) {
    const cplx z = sampler.upper_half_disk(kSampleRadius);
    const double a = std::norm(ssf.eval(Which::E_sigma, z));
    const double b = std::norm(conj_reflect(ssf, Which::E_sigma, z));
    const double margin = a - b;
    min_margin = std::min(min_margin, margin);
    min_rel_margin = std::min(min_rel_margin, (a + b) > 0.0 ? margin / (a + b) : 0.0);
    if (std::isnan(margin)) min_rel_margin = -std::numeric_limits<double>::infinity();
  }

  const double cond = gs.condition_estimate();
  const int dim = space_dimension(space);
  const bool zero_space = dim >= 0 && static_cast<int>(zs.size()) >= dim;
  // residual = floor / min relative margin: <= 1 exactly when every margin is
  // strictly positive above rounding.
  double residual = min_rel_margin > 0.0 ? kMarginFloor / min_rel_margin : std::numeric_limits<double>::infinity();
  CheckReport r;
  r.check_id = checks::kHbInheritance;
  r.samples = sample_count;
  r.condition_estimate = cond;
  r.tolerance = 1.0;
  r.metrics = {{"min_margin", min_margin}, {"min_rel_margin", min_rel_margin}};
  if (zero_space) {
    // No nonzero vector exists, so the strict inequality has nothing to say.
    r.note = "vacuous: H(sigma) is the zero space, E_sigma is constant";
    residual = 0.0;
  }
  r.max_rel_residual = residual;
  r.passed = residual <= r.tolerance;
  return r;
}

CheckReport check_projection(const StructureFunction& space, std::span<const cplx> zeros, cplx z,
                             std::span<const cplx> w_samples, double base_tolerance) {
  const ZeroSequence zs = canonicalize(zeros);
  const GramSystem gs = GramSystem::build(space, zs);
  const std::vector<cplx> beta = solve_beta(gs, z);

  // r[z_i] = Z_z[z_i] - sum_j beta_j Z_j[z_i], entries recomputed from the kernel
  double rhs_norm = 0.0;
  double orth = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const int ki = zs.confluence()[i];
    const cplx rhs = detail::mixed_partial_unchecked(space, ki, 0, z, zs[i]);
    cplx r = rhs;
    for (std::size_t j = 0; j < zs.size(); ++j)
      r -= beta[j] * detail::mixed_partial_unchecked(space, ki, zs.confluence()[j], zs[j], zs[i]);
    rhs_norm = std::max(rhs_norm, std::abs(rhs));
    orth = std::max(orth, std::abs(r));
  }
  Residual res;
  res.add(orth / std::max(1.0, rhs_norm));

  std::size_t route_samples = 0;
  if (!on_zero(zs.points(), z)) {
    for (const cplx& w : w_samples) {
      if (on_zero(zs.points(), w)) continue;
      const cplx a = sigma_kernel(gs, z, w);
      const cplx b = sigma_kernel_det(gs, z, w);
      // both routes cancel down to k = Z - sum beta Z_j; measure against the unprojected size
      const double unprojected = std::abs(gamma(zs, w) * gamma(zs, z) * kernel(space, z, w));
      res.add(rel(a, b, std::max(std::abs(a), unprojected)));
      ++route_samples;
    }
  }
  CheckReport r = make_report(checks::kProjection, zs.size() + route_samples, res.max, base_tolerance,
                              gs.condition_estimate());
  r.metrics = {{"orthogonality_residual", orth / std::max(1.0, rhs_norm)}};
  return r;
}

CheckReport check_derive_routes(const StructureFunction& space, std::span<const cplx> zeros, double base_tolerance) {
  const ZeroSequence zs = canonicalize(zeros);
  const GramSystem gs = GramSystem::build(space, zs);
  const SigmaStructureFunction direct = derive(gs);
  const SigmaStructureFunction iterative = derive_iterative(space, zs);

  auto vec_rel = [](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      diff = std::max(diff, std::abs(a[j] - b[j]));
      scale = std::max(scale, std::abs(a[j]));
    }
    return scale > 0.0 ? diff / scale : diff;
  };
  Residual res;
  res.add(vec_rel(direct.coeffs_E(), iterative.coeffs_E()));
  res.add(vec_rel(direct.coeffs_F(), iterative.coeffs_F()));
  return make_report(checks::kDeriveRoutes, zs.size(), res.max, base_tolerance, gs.condition_estimate());
}

CheckReport check_confluence(const StructureFunction& space, std::span<const cplx> zeros, std::uint64_t seed,
                             double base_tolerance) {
  const ZeroSequence zs = canonicalize(zeros);
  const GramSystem gs = GramSystem::build(space, zs);
  const SigmaStructureFunction ssf = derive(gs);
  const EpsilonOracle oracle = derive_epsilon_oracle(space, zs, kDefaultSchedule);

  Residual gram_res, kernel_res, e_res;
  double gram_scale = 0.0;
  for (Eigen::Index i = 0; i < gs.matrix().rows(); ++i)
    for (Eigen::Index j = 0; j < gs.matrix().cols(); ++j) gram_scale = std::max(gram_scale, std::abs(gs.matrix()(i, j)));
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (std::size_t j = 0; j < zs.size(); ++j)
      gram_res.add(rel(oracle.gram_entry(i, j), gs.matrix()(i, j), gram_scale));

  Sampler sampler(seed);
  const std::size_t kPoints = 8;
  for (std::size_t k = 0; k < kPoints; ++k) {
    const cplx z = sampler.disk(2.0);
    const cplx w = sampler.disk(2.0);
    // incomplete kernel k^sigma(z, w) = conj(prod(z - z_i)) prod(w - z_i) K^sigma(z, w)
    const cplx analytic = sigma_kernel(gs, z, w) / (std::conj(gamma(zs, z)) * gamma(zs, w));
    const cplx approx = oracle.kernel_incomplete(z, w);
    kernel_res.add(rel(approx, analytic, std::abs(analytic)));
    for (Which which : {Which::E_sigma, Which::F_sigma}) {
      const cplx exact = ssf.incomplete(which, w);
      e_res.add(rel(oracle.incomplete(which, w), exact, std::abs(exact)));
    }
  }
  const double worst = std::max({gram_res.max, kernel_res.max, e_res.max});
  CheckReport r = make_report(checks::kConfluence, zs.size() * zs.size() + 3 * kPoints, worst, base_tolerance,
                              gs.condition_estimate());
  r.metrics = {{"gram_residual", gram_res.max}, {"kernel_residual", kernel_res.max}, {"incomplete_residual", e_res.max}};
  return r;
}

std::vector<CheckReport> run_default_suite(const StructureFunction& space, std::span<const cplx> zeros,
                                           std::uint64_t seed, const Tolerances& tol) {
  const ZeroSequence zs = canonicalize(zeros);
  std::vector<CheckReport> out;
  out.push_back(check_theorem2(space, zs.points(), 200, seed, tol.base(checks::kTheorem2)));
  if (zs.size() == 1) {
    auto n1 = check_n1_identities(space, zs[0], 50, seed, tol.base(checks::kN1Star));
    n1[1].tolerance = scaled_tolerance(tol.base(checks::kN1Bilinear), n1[1].condition_estimate);
    n1[2].tolerance = scaled_tolerance(tol.base(checks::kN1Kernel), n1[2].condition_estimate);
    for (auto& r : n1) r.passed = r.max_rel_residual <= r.tolerance;
    out.insert(out.end(), n1.begin(), n1.end());
  }
  if (space.is_paley_wiener() && zs.distinct() &&
      std::none_of(zs.points().begin(), zs.points().end(), [](cplx p) { return p.imag() == 0.0; })) {
    std::vector<cplx> samples;
    for (cplx z : {cplx{0.0, 2.0}, cplx{0.5, 1.5}, cplx{-0.7, 2.5}}) {
      const bool clash = std::any_of(zs.points().begin(), zs.points().end(),
                                     [&](cplx p) { return z == p || z == std::conj(p); });
      if (!clash) samples.push_back(z);
    }
    auto pw = check_pw_example(space.pw_type(), zs.points(), samples, tol.base(checks::kPwNorm));
    pw[1].tolerance = scaled_tolerance(tol.base(checks::kPwStar), pw[1].condition_estimate);
    pw[1].passed = pw[1].max_rel_residual <= pw[1].tolerance;
    out.insert(out.end(), pw.begin(), pw.end());
  }
  CheckReport hb = check_hb_inheritance(space, zs.points(), 100, seed);
  hb.tolerance = tol.base(checks::kHbInheritance);
  hb.passed = hb.max_rel_residual <= hb.tolerance;
  out.push_back(hb);

  Sampler sampler(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<cplx> ws;
  for (int k = 0; k < 20; ++k) ws.push_back(sampler.disk(kSampleRadius));
  out.push_back(check_projection(space, zs.points(), cplx{0.3, 1.7}, ws, tol.base(checks::kProjection)));

  if (zs.distinct())
    out.push_back(check_derive_routes(space, zs.points(), tol.base(checks::kDeriveRoutes)));
  else
    out.push_back(check_confluence(space, zs.points(), seed, tol.base(checks::kConfluence)));
  return out;
}

}  // namespace debranges
