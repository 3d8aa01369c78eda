#include "simplexop/domain.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "simplexop/error.hpp"

namespace simplexop {

namespace {

constexpr int kMaxGaussOrder = 64;

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) {
        break;
      }
    }
    rule.nodes[i - 1] = -z;
    rule.nodes[n - i] = z;
    rule.weights[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - i] = rule.weights[i - 1];
  }
  if (n % 2 == 1) {
    rule.nodes[m - 1] = 0.0;
  }
  return rule;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (order < 2 || order > kMaxGaussOrder) {
    throw ParameterError("quadrature order must lie in [2, 64]");
  }
  if (refinement_levels < 0 || refinement_levels > 10) {
    throw ParameterError("refinement_levels must lie in [0, 10]");
  }
  if (!(rel_tol > 0.0)) {
    throw ParameterError("rel_tol must be positive");
  }
  if (sample_level < 0 || sample_level > 8) {
    throw ParameterError("sample_level must lie in [0, 8]");
  }
}

const GaussRule& gauss_legendre(int order) {
  static const std::array<GaussRule, kMaxGaussOrder + 1> rules = [] {
    std::array<GaussRule, kMaxGaussOrder + 1> out;
    for (int n = 1; n <= kMaxGaussOrder; ++n) {
      out[n] = compute_gauss_legendre(n);
    }
    return out;
  }();
  if (order < 1 || order > kMaxGaussOrder) {
    throw DomainError("gauss_legendre: order must lie in [1, 64]");
  }
  return rules[order];
}

SimplexRule simplex_rule(int order, int level) {
  const GaussRule& g = gauss_legendre(order);
  const int cells = 1 << level;
  const double h = 1.0 / cells;
  SimplexRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(cells) * cells * order * order);
  rule.weights.reserve(rule.nodes.capacity());
  for (int ct = 0; ct < cells; ++ct) {
    for (int cw = 0; cw < cells; ++cw) {
      for (int i = 0; i < order; ++i) {
        const double t = h * (ct + 0.5 * (g.nodes[i] + 1.0));
        const double wt = 0.5 * h * g.weights[i];
        for (int j = 0; j < order; ++j) {
          const double w = h * (cw + 0.5 * (g.nodes[j] + 1.0));
          const double ww = 0.5 * h * g.weights[j];
          rule.nodes.push_back({t * (1.0 - w), t * w});
          rule.weights.push_back(wt * ww * t);
        }
      }
    }
  }
  return rule;
}

double extend_eval(const ScalarField& f, Point y) {
  double r1 = y.x1 - std::floor(y.x1);
  double r2 = y.x2 - std::floor(y.x2);
  // y - floor(y) can round up to 1 for tiny negative y.
  if (r1 >= 1.0) {
    r1 = 0.0;
  }
  if (r2 >= 1.0) {
    r2 = 0.0;
  }
  if (r1 + r2 <= 1.0) {
    return f.core({r1, r2});
  }
  return f.core({1.0 - r1, 1.0 - r2});
}

double integrate_rule(const std::function<double(Point)>& g, const SimplexRule& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = g(rule.nodes[i]);
    if (!std::isfinite(v)) {
      throw IntegrandError("integrand is not finite at a simplex quadrature node");
    }
    sum += rule.weights[i] * v;
  }
  return sum;
}

QuadResult integrate_simplex(const std::function<double(Point)>& g, const QuadratureSpec& spec) {
  spec.validate();
  QuadResult out;
  double prev = integrate_rule(g, simplex_rule(spec.order, 0));
  out.value = prev;
  out.levels_used = 0;
  if (spec.refinement_levels == 0) {
    out.converged = true;
    return out;
  }
  for (int level = 1; level <= spec.refinement_levels; ++level) {
    const double cur = integrate_rule(g, simplex_rule(spec.order, level));
    out.value = cur;
    out.delta = std::abs(cur - prev);
    out.levels_used = level;
    if (out.delta <= spec.rel_tol * std::abs(cur)) {
      out.converged = true;
      return out;
    }
    prev = cur;
  }
  return out;
}

double integrate_rect(const std::function<double(Point)>& g, const RectCell& cell, int order) {
  if (!cell.valid()) {
    throw DomainError("integrate_rect: inverted cell");
  }
  const GaussRule& rule = gauss_legendre(order);
  const double c1 = 0.5 * (cell.x1_lo + cell.x1_hi);
  const double h1 = 0.5 * (cell.x1_hi - cell.x1_lo);
  const double c2 = 0.5 * (cell.x2_lo + cell.x2_hi);
  const double h2 = 0.5 * (cell.x2_hi - cell.x2_lo);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) {
    const double u1 = c1 + h1 * rule.nodes[i];
    double row = 0.0;
    for (int j = 0; j < order; ++j) {
      const double v = g({u1, c2 + h2 * rule.nodes[j]});
      if (!std::isfinite(v)) {
        throw IntegrandError("integrand is not finite at a rectangle quadrature node");
      }
      row += rule.weights[j] * v;
    }
    sum += rule.weights[i] * row;
  }
  return sum * h1 * h2;
}

double cell_mean(const std::function<double(Point)>& g, const RectCell& cell, int order) {
  const GaussRule& rule = gauss_legendre(order);
  const double c1 = 0.5 * (cell.x1_lo + cell.x1_hi);
  const double h1 = 0.5 * (cell.x1_hi - cell.x1_lo);
  const double c2 = 0.5 * (cell.x2_lo + cell.x2_hi);
  const double h2 = 0.5 * (cell.x2_hi - cell.x2_lo);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) {
    const double u1 = c1 + h1 * rule.nodes[i];
    double row = 0.0;
    for (int j = 0; j < order; ++j) {
      row += rule.weights[j] * g({u1, c2 + h2 * rule.nodes[j]});
    }
    sum += rule.weights[i] * row;
  }
  // Gauss weights on [-1,1]^2 sum to 4.
  const double mean = 0.25 * sum;
  if (!std::isfinite(mean)) {
    throw IntegrandError("integrand is not finite on a cell");
  }
  return mean;
}

RectCell mkz_cell(int n, long k1, long k2) {
  if (n < 1 || k1 < 0 || k2 < 0) {
    throw DomainError("mkz_cell: need n >= 1 and k1, k2 >= 0");
  }
  const double m = static_cast<double>(n) + k1 + k2;
  return {k1 / m, (k1 + 1) / (m + 1), k2 / m, (k2 + 1) / (m + 1)};
}

RectCell stancu_cell(int n, long k, long l) {
  if (n < 1 || k < 0 || l < 0) {
    throw DomainError("stancu_cell: need n >= 1 and k, l >= 0");
  }
  const double d = n + 2.0;
  return {k / d, (k + 1) / d, l / d, (l + 1) / d};
}

double mkz_cell_measure(int n, long k1, long k2) {
  const double m = static_cast<double>(n) + k1 + k2;
  return (n + static_cast<double>(k1)) * (n + static_cast<double>(k2)) /
         (m * m * (m + 1.0) * (m + 1.0));
}

}  // namespace simplexop
