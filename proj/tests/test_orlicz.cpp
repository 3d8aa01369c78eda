#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "simplexop/error.hpp"
#include "simplexop/harness.hpp"
#include "simplexop/orlicz.hpp"

using namespace simplexop;

namespace {

ScalarField constant(double c) {
  return {[c](Point) { return c; }, "const", Smoothness::constant};
}
ScalarField affine() { return {[](Point x) { return x.x1 + x.x2; }, "affine", Smoothness::affine}; }

ScalarField scaled(const ScalarField& f, double c) {
  return {[f, c](Point x) { return c * f(x); }, f.label};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("modular examples") {
  const QuadratureSpec spec;
  const NFunction sq = power_nfunction(2.0);
  CHECK(modular(sq, constant(1.0), 2.0, spec) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(modular(sq, constant(0.0), 3.0, spec) == 0.0);
  CHECK(modular(exp_minus_nfunction(), constant(0.0), 7.0, spec) == 0.0);
  CHECK(modular(sq, affine(), 1.0, spec) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(modular(sq, affine(), 0.0, spec), ParameterError);
}

TEST_CASE("orlicz_norm examples") {
  const QuadratureSpec spec;
  const NFunction sq = power_nfunction(2.0);
  const NormResult one = orlicz_norm(sq, constant(1.0), spec);
  CHECK(one.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(one.alpha_star == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK(one.bracket_lo < one.alpha_star);
  CHECK(one.alpha_star < one.bracket_hi);
  CHECK_FALSE(one.quad_flag);

  CHECK(orlicz_norm(sq, affine(), spec).value == doctest::Approx(1.0).epsilon(1e-12));

  const NormResult zero = orlicz_norm(make_nfunction("powerlog:p=2"), constant(0.0), spec);
  CHECK(zero.value == 0.0);
  CHECK(zero.alpha_star == std::numeric_limits<double>::infinity());
}

TEST_CASE("norm result invariant") {
  const QuadratureSpec spec;
  for (const auto& key : builtin_nfunction_keys()) {
    const NFunction nf = make_nfunction(key);
    for (const auto& fk : {"affine", "quadratic", "lipschitz", "oscillatory"}) {
      const NormResult r = orlicz_norm(nf, builtin_field(fk), spec);
      CAPTURE(key);
      CAPTURE(fk);
      CHECK(r.value > 0.0);
      CHECK(rel(r.value, (1.0 + r.modular_at_alpha) / r.alpha_star) <= 1e-12);
    }
  }
}

TEST_CASE("power closed form") {
  const QuadratureSpec spec;
  CHECK(power_norm_closed_form(2.0, constant(1.0), spec) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(power_norm_closed_form(2.0, affine(), spec) == doctest::Approx(1.0).epsilon(1e-14));
  const double p3 = power_norm_closed_form(3.0, constant(1.0), spec);
  CHECK(p3 == doctest::Approx(3.0 * std::pow(2.0, -2.0 / 3.0) * std::pow(0.5, 1.0 / 3.0)).epsilon(1e-14));
  CHECK(p3 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(rel(orlicz_norm(power_nfunction(3.0), constant(1.0), spec).value, p3) <= 1e-10);
  CHECK_THROWS_AS(power_norm_factor(1.0), ParameterError);
}

TEST_CASE("power-family agreement across built-in fields") {
  const QuadratureSpec spec;
  for (double p : {1.5, 2.0, 3.0}) {
    for (const auto& fk : builtin_field_keys()) {
      const ScalarField f = builtin_field(fk);
      const double a = orlicz_norm(power_nfunction(p), f, spec).value;
      const double b = power_norm_closed_form(p, f, spec);
      CAPTURE(p);
      CAPTURE(fk);
      CHECK(rel(a, b) <= 1e-6);
    }
  }
}

TEST_CASE("dual lower bound") {
  const QuadratureSpec spec;
  const NFunction sq = power_nfunction(2.0);
  CHECK(dual_lower_bound(sq, constant(1.0), constant(2.0), spec) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dual_lower_bound(sq, affine(), constant(0.0), spec) == 0.0);
  CHECK(dual_lower_bound(sq, constant(1.0), constant(2.0 * std::sqrt(2.0)), spec) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(dual_lower_bound(sq, constant(1.0), constant(3.0), spec), ConstraintViolationError);
}

TEST_CASE("duality sandwich") {
  const QuadratureSpec spec;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (const auto& key : {"power:p=1.5", "power:p=2", "power:p=3", "expm:"}) {
    const NFunction nf = make_nfunction(key);
    const ScalarField f = builtin_field("quadratic");
    const double norm = orlicz_norm(nf, f, spec).value;
    for (int i = 0; i < 10; ++i) {
      const double a = coef(rng), b = coef(rng), c = coef(rng);
      ScalarField g{[=](Point x) { return a + b * x.x1 + c * x.x2 * x.x2; }, "witness"};
      // scale the witness down until it is feasible
      const NFunction psi = complement_of(nf);
      double lam = 1.0;
      while (modular(psi, g, lam, spec) > 1.0) {
        lam *= 0.5;
      }
      g = scaled(g, lam);
      CHECK(dual_lower_bound(nf, f, g, spec) <= norm + 1e-8);
    }
  }
}

TEST_CASE("homogeneity and triangle inequality") {
  const QuadratureSpec spec;
  for (const auto& key : builtin_nfunction_keys()) {
    const NFunction nf = make_nfunction(key);
    for (const auto& fk : builtin_field_keys()) {
      const ScalarField f = builtin_field(fk);
      const double base = orlicz_norm(nf, f, spec).value;
      for (double c : {-2.0, 0.5, 10.0}) {
        CAPTURE(key);
        CAPTURE(fk);
        CAPTURE(c);
        CHECK(rel(orlicz_norm(nf, scaled(f, c), spec).value, std::abs(c) * base) <= 1e-8);
      }
    }
    const auto keys = builtin_field_keys();
    for (std::size_t i = 0; i < keys.size(); ++i) {
      for (std::size_t j = i + 1; j < keys.size(); ++j) {
        const ScalarField f = builtin_field(keys[i]);
        const ScalarField g = builtin_field(keys[j]);
        const ScalarField sum{[f, g](Point x) { return f(x) - 3.0 * g(x); }, "sum"};
        CHECK(orlicz_norm(nf, sum, spec).value <=
              orlicz_norm(nf, f, spec).value + 3.0 * orlicz_norm(nf, g, spec).value + 1e-8);
      }
    }
  }
}

TEST_CASE("gauge is unimodal around its minimiser") {
  const QuadratureSpec spec;
  for (const auto& key : builtin_nfunction_keys()) {
    const NFunction nf = make_nfunction(key);
    const ScalarField f = builtin_field("oscillatory");
    const NormResult r = orlicz_norm(nf, f, spec);
    std::vector<double> g;
    for (int i = 0; i < 50; ++i) {
      const double a = r.alpha_star * std::exp(-3.0 + 6.0 * i / 49.0);
      g.push_back((1.0 + modular(nf, f, a, spec)) / a);
    }
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
      CHECK_FALSE((g[i] > g[i - 1] + 1e-10 && g[i] > g[i + 1] + 1e-10));
    }
    CHECK(r.value <= *std::min_element(g.begin(), g.end()) + 1e-12);
  }
}

TEST_CASE("sampled fields") {
  const SimplexRule rule = simplex_rule(6, 2);
  const SampledField s = SampledField::sample([](Point x) { return x.x1 + x.x2; }, rule);
  CHECK(s.integral() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(orlicz_norm(power_nfunction(2.0), s).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lp_norm(2.0, s) == doctest::Approx(0.5).epsilon(1e-14));
  const SampledField z = SampledField::sample([](Point) { return 0.0; }, rule);
  CHECK(z.null());
  CHECK(orlicz_norm(power_nfunction(3.0), z).value == 0.0);

  // a field whose every scaling overflows the modular
  const SampledField huge = SampledField::sample([](Point) { return 1e300; }, rule);
  CHECK_THROWS_AS(orlicz_norm(power_nfunction(3.0), huge), NormOverflowError);
}
