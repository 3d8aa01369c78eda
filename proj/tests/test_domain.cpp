#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "simplexop/domain.hpp"
#include "simplexop/error.hpp"

using namespace simplexop;

namespace {

ScalarField coord1() { return {[](Point x) { return x.x1; }, "x1", Smoothness::affine}; }

double factorial(int k) { return std::tgamma(k + 1.0); }

}  // namespace

TEST_CASE("extend_eval reflects and periodises") {
  const ScalarField f = coord1();
  CHECK(extend_eval(f, {0.7, 0.6}) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(extend_eval(f, {1.2, 0.1}) == doctest::Approx(0.2).epsilon(1e-14));
  const ScalarField five{[](Point) { return 5.0; }, "five", Smoothness::constant};
  CHECK(extend_eval(five, {-3.7, 12.4}) == 5.0);
  // the anti-diagonal keeps the core value
  CHECK(extend_eval(f, {0.25, 0.75}) == 0.25);
}

TEST_CASE("extend_eval is exactly 1-periodic") {
  // Dyadic sample points keep y + 1 exact, so both sides see identical residues.
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> pick(-(10L << 32), 10L << 32);
  const ScalarField f{[](Point x) { return std::sin(3.0 * x.x1) + x.x2 * x.x2; }, "g"};
  for (int i = 0; i < 1000; ++i) {
    const Point y{std::ldexp(static_cast<double>(pick(rng)), -32),
                  std::ldexp(static_cast<double>(pick(rng)), -32)};
    CHECK(extend_eval(f, y) == extend_eval(f, y + Point{1.0, 0.0}));
    CHECK(extend_eval(f, y) == extend_eval(f, y + Point{0.0, 1.0}));
  }
}

TEST_CASE("reflection identity on the unit square") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ScalarField f{[](Point x) { return std::exp(x.x1) - 3.0 * x.x2; }, "g"};
  int reflected = 0;
  for (int i = 0; i < 1000; ++i) {
    const Point y{unit(rng), unit(rng)};
    if (y.x1 + y.x2 > 1.0) {
      ++reflected;
      CHECK(extend_eval(f, y) == f.core({1.0 - y.x1, 1.0 - y.x2}));
    } else {
      CHECK(extend_eval(f, y) == f.core(y));
    }
  }
  CHECK(reflected > 400);
}

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {2, 5, 6, 12}) {
    const GaussRule& g = gauss_legendre(n);
    double sum = 0.0;
    for (double w : g.weights) {
      sum += w;
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double q = 0.0;
      for (int i = 0; i < n; ++i) {
        q += g.weights[i] * std::pow(g.nodes[i], deg);
      }
      const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1.0);
      CHECK(q == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), DomainError);
  CHECK_THROWS_AS(gauss_legendre(65), DomainError);
}

TEST_CASE("integrate_simplex examples") {
  const QuadratureSpec spec;
  const QuadResult one = integrate_simplex([](Point) { return 1.0; }, spec);
  CHECK(one.converged);
  CHECK(one.value == doctest::Approx(0.5).epsilon(1e-14));

  auto lin = [](Point x) { return x.x1 + x.x2; };
  auto sq = [](Point x) { return (x.x1 + x.x2) * (x.x1 + x.x2); };
  CHECK(oracle::simplex_sum(lin) == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
  CHECK(oracle::simplex_sum(sq) == doctest::Approx(0.25).epsilon(1e-5));
  CHECK(integrate_simplex(lin, spec).value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(integrate_simplex(sq, spec).value == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("integrate_simplex is exact on monomials of degree <= 4") {
  const QuadratureSpec spec;
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; a + b <= 4; ++b) {
      const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
      const QuadResult q = integrate_simplex(
          [a, b](Point x) { return std::pow(x.x1, a) * std::pow(x.x2, b); }, spec);
      CAPTURE(a);
      CAPTURE(b);
      CHECK(std::abs(q.value / exact - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("integrate_simplex error paths") {
  QuadratureSpec spec;
  CHECK_THROWS_AS(integrate_simplex([](Point) { return NAN; }, spec), IntegrandError);
  spec.refinement_levels = 2;
  spec.rel_tol = 1e-15;
  const QuadResult kink = integrate_simplex([](Point x) { return std::abs(x.x1 - 0.3); }, spec);
  CHECK_FALSE(kink.converged);
  CHECK(kink.delta > 0.0);
  CHECK(kink.value == doctest::Approx(oracle::simplex_sum([](Point x) { return std::abs(x.x1 - 0.3); }))
                          .epsilon(1e-4));
  QuadratureSpec bad;
  bad.order = 1;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = QuadratureSpec{};
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("simplex rule nodes are interior") {
  const SimplexRule rule = simplex_rule(6, 2);
  CHECK(rule.size() == 16u * 36u);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Point x = rule.nodes[i];
    CHECK(x.x1 > 0.0);
    CHECK(x.x2 > 0.0);
    CHECK(x.x1 + x.x2 < 1.0);
    total += rule.weights[i];
  }
  CHECK(total == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("integrate_rect") {
  auto one = [](Point) { return 1.0; };
  CHECK(integrate_rect(one, {0.0, 0.5, 0.0, 0.5}, 5) == doctest::Approx(0.25).epsilon(1e-15));
  // n = 1: a = 1/(n+1); int_0^a int_0^a u1 = a^3 / 2
  const double a = 0.5;
  CHECK(integrate_rect([](Point u) { return u.x1; }, {0.0, a, 0.0, a}, 5) ==
        doctest::Approx(0.5 * a * a * a).epsilon(1e-15));
  CHECK(0.5 * a * a * a == 1.0 / 16.0);
  CHECK(integrate_rect([](Point u) { return u.x1 * u.x2; }, {0.0, 1.0, 0.0, 1.0}, 5) ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(integrate_rect(one, {0.5, 0.0, 0.0, 1.0}, 5), DomainError);
}

TEST_CASE("integrate_rect is exact on bilinear integrands") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double c0 = unit(rng), c1 = unit(rng), c2 = unit(rng), c3 = unit(rng);
    const double x0 = unit(rng) * 0.5, x1 = x0 + unit(rng) * 0.5;
    const double y0 = unit(rng) * 0.5, y1 = y0 + unit(rng) * 0.5;
    auto g = [=](Point u) { return c0 + c1 * u.x1 + c2 * u.x2 + c3 * u.x1 * u.x2; };
    const double dx = x1 - x0, dy = y1 - y0;
    const double exact = c0 * dx * dy + c1 * 0.5 * (x1 * x1 - x0 * x0) * dy +
                         c2 * 0.5 * (y1 * y1 - y0 * y0) * dx +
                         c3 * 0.25 * (x1 * x1 - x0 * x0) * (y1 * y1 - y0 * y0);
    const double q = integrate_rect(g, {x0, x1, y0, y1}, 3);
    CHECK(std::abs(q - exact) <= 1e-14 * std::abs(exact));
  }
}

TEST_CASE("MKZ cells") {
  const RectCell c = mkz_cell(1, 0, 0);
  CHECK(c.x1_lo == 0.0);
  CHECK(c.x1_hi == 0.5);
  CHECK(c.x2_hi == 0.5);
  CHECK(c.measure() == 0.25);
  CHECK(mkz_cell_measure(1, 0, 0) == 0.25);

  const RectCell d = mkz_cell(2, 1, 0);
  CHECK(d.x1_lo == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
  CHECK(d.x1_hi == 0.5);
  CHECK(d.x2_lo == 0.0);
  CHECK(d.x2_hi == 0.25);
  CHECK(d.measure() == doctest::Approx((1.0 / 6.0) * 0.25).epsilon(1e-15));
  CHECK(mkz_cell_measure(2, 1, 0) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pn(1, 60);
  std::uniform_int_distribution<long> pk(0, 80);
  for (int i = 0; i < 50; ++i) {
    const int n = pn(rng);
    const long k1 = pk(rng), k2 = pk(rng);
    const RectCell cell = mkz_cell(n, k1, k2);
    CHECK(cell.valid());
    CHECK(cell.x1_hi + cell.x2_hi <= 1.0);
    CHECK(cell.measure() == doctest::Approx(mkz_cell_measure(n, k1, k2)).epsilon(1e-11));
  }
  CHECK_THROWS_AS(mkz_cell(0, 0, 0), DomainError);
}

TEST_CASE("Stancu cells") {
  const RectCell c = stancu_cell(2, 0, 0);
  CHECK(c.x1_hi == 0.25);
  CHECK(c.x2_hi == 0.25);
  CHECK(c.measure() == 1.0 / 16.0);
  const RectCell d = stancu_cell(2, 3, 0);
  CHECK(d.x1_lo == 0.75);
  CHECK(d.x1_hi == 1.0);
  CHECK(d.x2_lo == 0.0);
  CHECK(d.x2_hi == 0.25);
  for (int s : {1, 2, 3}) {
    CHECK(stancu_cell(12, 2, 4).measure() ==
          doctest::Approx(stancu_cell(12, 2 + s, 4).measure()).epsilon(1e-14));
    CHECK(stancu_cell(12, 2, 4).measure() ==
          doctest::Approx(stancu_cell(12, 2, 4 + s).measure()).epsilon(1e-14));
  }
}
