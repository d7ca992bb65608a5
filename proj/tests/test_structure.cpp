#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "debranges/errors.hpp"
#include "debranges/structure.hpp"
#include "oracles.hpp"

using namespace debranges;

namespace {
const cplx I{0.0, 1.0};
const double e = std::exp(1.0);

GramSystem make(const StructureFunction& sf, std::vector<cplx> z) { return GramSystem::build(sf, canonicalize(z)); }

cplx random_disk(std::mt19937_64& g, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  for (;;) {
    cplx p{u(g), u(g)};
    if (std::abs(p) <= r) return p;
  }
}

StructureFunction poly6() {
  return StructureFunction::polynomial_hb({-I, 0.5 - 2.0 * I, -1.0 - 0.5 * I, -1.5 * I, 2.0 - I, -0.3 - 3.0 * I});
}

double rel_vec(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num = std::max(num, std::abs(a[k] - b[k]));
    den = std::max(den, std::abs(b[k]));
  }
  return num / den;
}
}  // namespace

TEST_CASE("derive examples") {
  auto pw = StructureFunction::paley_wiener(1.0);
  auto empty = derive(make(pw, {}));
  CHECK(empty.coeffs_E().empty());
  CHECK(empty.eval(Which::E_sigma, 0.4 - 0.2 * I) == eval_E(pw, 0.4 - 0.2 * I));

  auto one = derive(make(pw, {I}));
  REQUIRE(one.coeffs_E().size() == 1);
  CHECK(std::abs(one.coeffs_E()[0] - e / std::sinh(2.0)) < 1e-15);
  CHECK(std::abs(one.coeffs_E()[0] - 0.7494862009516033) < 1e-15);
  CHECK(std::abs(one.coeffs_F()[0] - 1.0 / (e * std::sinh(2.0))) < 1e-15);
}

TEST_CASE("E_sigma examples for PW, sigma = [i]") {
  auto pw = StructureFunction::paley_wiener(1.0);
  auto ssf = derive(make(pw, {I}));
  // hand-assembled single-zero formula at w = 0:
  // (E(0) - E(i) Z_i(0) / Z_i(i)) / (0 - i) with Z_i(0) = 2 sinh 1, Z_i(i) = sinh 2
  const cplx hand = (1.0 - e * 2.0 * std::sinh(1.0) / std::sinh(2.0)) / (-I);
  const cplx pinned{0.0, -0.76159415595576485};  // -i tanh 1
  CHECK(std::abs(hand - pinned) < 1e-15);
  CHECK(std::abs(ssf.eval(Which::E_sigma, 0.0) - pinned) < 1e-15);

  // at the zero itself: direct gamma * p on a ray, extrapolated
  const std::vector<double> sched{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  std::vector<cplx> vals;
  for (double d : sched) vals.push_back(ssf.incomplete(Which::E_sigma, I + d) / d);
  const cplx ref = extrapolate_to_zero(sched, vals);
  const cplx at = ssf.eval(Which::E_sigma, I);
  CHECK(std::abs(at) > 0.1);
  CHECK(std::abs(at - ref) < 1e-8 * std::abs(ref));
  // equals the derivative of the incomplete form
  CHECK(std::abs(at - ssf.incomplete_derivative(Which::E_sigma, I, 1)) < 1e-14 * std::abs(at));
}

TEST_CASE("incomplete forms vanish on sigma with multiplicity") {
  for (const auto& sf : {StructureFunction::paley_wiener(1.0), StructureFunction::paley_wiener(2.0), poly6()}) {
    for (const auto& sigma : std::vector<std::vector<cplx>>{
             {I}, {I, 2.0 * I}, {I, I}, {I, I, 2.0 * I}, {I, 1.0 + I, -1.0 + 2.0 * I, 0.5 * I}, {2.0, I}}) {
      auto gs = make(sf, sigma);
      auto ssf = derive(gs);
      const auto& zs = gs.zeros();
      for (Which which : {Which::E_sigma, Which::F_sigma}) {
        double data = 1.0;
        for (std::size_t i = 0; i < zs.size(); ++i) {
          const cplx b = which == Which::E_sigma ? eval_E(sf, zs[i], zs.confluence()[i])
                                                 : eval_E_star(sf, zs[i], zs.confluence()[i]);
          data = std::max(data, std::abs(b));
        }
        for (std::size_t i = 0; i < zs.size(); ++i)
          CHECK(std::abs(ssf.incomplete_derivative(which, zs[i], zs.confluence()[i])) <=
                1e-9 * data * std::max(1.0, gs.condition_estimate() / 1e4));
      }
    }
  }
}

TEST_CASE("star relation F_sigma = E_sigma*") {
  std::mt19937_64 g(10);
  for (const auto& sf : {StructureFunction::paley_wiener(1.0), poly6()}) {
    for (const auto& sigma : std::vector<std::vector<cplx>>{{I}, {I, I, 2.0 * I}, {1.0 + I, -0.5 + 2.0 * I, 3.0}}) {
      auto ssf = derive(make(sf, sigma));
      for (int t = 0; t < 100; ++t) {
        const cplx w = random_disk(g, 3.0);
        const cplx f = ssf.eval(Which::F_sigma, w);
        const cplx es = std::conj(ssf.eval(Which::E_sigma, std::conj(w)));
        CHECK(std::abs(f - es) <= 1e-10 * std::max(1.0, std::abs(f)));
      }
    }
  }
}

TEST_CASE("eval seam is continuous and matches direct gamma * p outside the radius") {
  auto pw = StructureFunction::paley_wiener(1.0);
  // the direct route just outside the radius cancels like eps / r^m
  for (auto [sigma, tol] : std::vector<std::pair<std::vector<cplx>, double>>{{{I, 2.0 * I}, 1e-10}, {{I, I, 2.0 * I}, 1e-7}}) {
    auto ssf = derive(make(pw, sigma));
    const double r = sigma_desingularization_radius(I);
    for (cplx dir : {cplx{1.0, 0.0}, cplx{0.0, -1.0}, cplx{0.8, 0.6}}) {
      const cplx in = ssf.eval(Which::E_sigma, I + r * (1.0 - 1e-9) * dir);
      const cplx out = ssf.eval(Which::E_sigma, I + r * (1.0 + 1e-9) * dir);
      CHECK(std::abs(in - out) <= tol * std::abs(in));
      const cplx w = I + 5.0 * r * dir;
      const cplx direct = ssf.incomplete(Which::E_sigma, w) * gamma(ssf.zeros(), w);
      CHECK(std::abs(ssf.eval(Which::E_sigma, w) - direct) <= tol * std::abs(direct));
    }
  }
}

TEST_CASE("derive_iterative examples and agreement") {
  auto pw = StructureFunction::paley_wiener(1.0);
  auto a = derive(make(pw, {I}));
  auto b = derive_iterative(pw, canonicalize(std::vector<cplx>{I}));
  CHECK(rel_vec(b.coeffs_E(), a.coeffs_E()) < 1e-15);
  CHECK(rel_vec(b.coeffs_F(), a.coeffs_F()) < 1e-15);

  auto e0 = derive_iterative(pw, ZeroSequence{});
  CHECK(e0.coeffs_E().empty());
  CHECK(e0.eval(Which::E_sigma, 0.7) == eval_E(pw, 0.7));

  for (const auto& sf : {pw, StructureFunction::paley_wiener(2.0), poly6()}) {
    for (const auto& sigma : std::vector<std::vector<cplx>>{
             {I, 2.0 * I}, {I, 1.0 + I, -1.0 + 2.0 * I}, {0.5 + I, -1.0 + 0.5 * I, 2.0 * I, 1.5 + 1.5 * I}, {1.0, I}}) {
      auto gs = make(sf, sigma);
      auto d = derive(gs);
      auto it = derive_iterative(sf, gs.zeros());
      const double tol = 1e-9 * std::max(1.0, gs.condition_estimate() / 1e4);
      CHECK(rel_vec(it.coeffs_E(), d.coeffs_E()) <= tol);
      CHECK(rel_vec(it.coeffs_F(), d.coeffs_F()) <= tol);
    }
  }
  CHECK_THROWS_AS(derive_iterative(pw, canonicalize(std::vector<cplx>{I, I})), DomainError);
}

TEST_CASE("epsilon oracle") {
  auto pw = StructureFunction::paley_wiener(1.0);
  const std::vector<double> sched{1e-2, 5e-3, 2.5e-3};

  // distinct sigma: no splitting, every level equals derive
  auto zs = canonicalize(std::vector<cplx>{I, 2.0 * I});
  auto eo = derive_epsilon_oracle(pw, zs, sched);
  auto d = derive(GramSystem::build(pw, zs));
  for (const auto& lvl : eo.levels()) CHECK(rel_vec(lvl.structure.coeffs_E(), d.coeffs_E()) < 1e-15);
  CHECK(std::abs(eo.incomplete(Which::E_sigma, 0.3) - d.incomplete(Which::E_sigma, 0.3)) < 1e-13);

  for (const auto& sigma : std::vector<std::vector<cplx>>{{I, I}, {I, I, 2.0 * I}}) {
    auto cz = canonicalize(sigma);
    auto gs = GramSystem::build(pw, cz);
    auto conf = derive(gs);
    auto o = derive_epsilon_oracle(pw, cz, sched);
    for (cplx w : {cplx{0.0}, cplx{1.0, -0.5}, cplx{-2.0, 1.0}}) {
      const cplx exact = conf.incomplete(Which::E_sigma, w);
      CHECK(std::abs(o.incomplete(Which::E_sigma, w) - exact) <= 1e-5 * std::max(1.0, std::abs(exact)));
      const cplx fexact = conf.incomplete(Which::F_sigma, w);
      CHECK(std::abs(o.incomplete(Which::F_sigma, w) - fexact) <= 1e-5 * std::max(1.0, std::abs(fexact)));
    }
    for (std::size_t i = 0; i < cz.size(); ++i)
      for (std::size_t j = 0; j < cz.size(); ++j) {
        const cplx g = kernel_mixed_partial(pw, cz.confluence()[i], cz.confluence()[j], cz[j], cz[i]);
        CHECK(std::abs(o.gram_entry(i, j) - g) <= 1e-5 * std::max(1.0, std::abs(g)));
      }
  }
}

TEST_CASE("epsilon oracle schedule validation") {
  auto pw = StructureFunction::paley_wiener(1.0);
  auto zs = canonicalize(std::vector<cplx>{I, I, I - 0.01});
  const std::vector<double> bad{1e-2, 5e-3};
  CHECK_THROWS_AS(derive_epsilon_oracle(pw, zs, bad), InvalidScheduleError);
  const std::vector<double> neg{1e-2, -1e-3};
  CHECK_THROWS_AS(derive_epsilon_oracle(pw, canonicalize(std::vector<cplx>{I, I}), neg), InvalidScheduleError);
  const std::vector<double> dup{1e-2, 1e-2};
  CHECK_THROWS_AS(derive_epsilon_oracle(pw, canonicalize(std::vector<cplx>{I, I}), dup), InvalidScheduleError);
}

TEST_CASE("E_sigma kernel identity, star and HB margin") {
  std::mt19937_64 g(42);
  for (const auto& sf : {StructureFunction::paley_wiener(1.0), poly6()}) {
    for (const auto& sigma : std::vector<std::vector<cplx>>{
             {I}, {I, I}, {I, I, 1.0 + I}, {I, 1.0 + I, -1.0 + 2.0 * I, 0.5 * I, 2.0 + 2.0 * I}}) {
      auto gs = make(sf, sigma);
      auto ssf = derive(gs);
      const double tol = 1e-8 * std::max(1.0, gs.condition_estimate() / 1e4);
      for (int t = 0; t < 200; ++t) {
        const cplx z = random_disk(g, 3.0), w = random_disk(g, 3.0);
        if (std::abs(std::conj(z) - w) < 1e-3) continue;
        const cplx K = sigma_kernel(gs, z, w);
        const cplx Ez = ssf.eval(Which::E_sigma, z), Ew = ssf.eval(Which::E_sigma, w);
        const cplx Fz = ssf.eval(Which::F_sigma, z), Fw = ssf.eval(Which::F_sigma, w);
        const cplx rhs = (std::conj(Ez) * Ew - std::conj(Fz) * Fw) / (I * (std::conj(z) - w));
        CHECK(std::abs(K - rhs) <= tol * std::max(1.0, std::abs(K)));
        if (z.imag() > 0.0) CHECK(std::norm(Ez) - std::norm(Fz) > 0.0);
      }
    }
  }
}
