#include "simplexop/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "simplexop/error.hpp"

namespace simplexop {

namespace {

struct ModulusSweep {
  double value = 0.0;
  double t = 0.0;
};

// The sampled second-difference norm, sharing the base samples f(x) across
// all (h, t) pairs of a sweep.
ModulusSweep sweep_direction(const NFunction& nf, const ScalarField& f, Point h, double r,
                             const SimplexRule& rule, const std::vector<double>& base,
                             int t_samples) {
  ModulusSweep best;
  std::vector<double> diff(rule.size());
  for (int j = 1; j <= t_samples; ++j) {
    const double t = r * j / t_samples;
    const Point shift = t * h;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const Point x = rule.nodes[i];
      diff[i] = extend_eval(f, x + shift) + extend_eval(f, x - shift) - 2.0 * base[i];
    }
    const double norm = orlicz_norm(nf, SampledField::from_values(diff, rule)).value;
    if (norm > best.value) {
      best.value = norm;
      best.t = t;
    }
  }
  return best;
}

std::vector<double> base_samples(const ScalarField& f, const SimplexRule& rule) {
  std::vector<double> out(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    out[i] = f.core(rule.nodes[i]);
  }
  return out;
}

void check_modulus_args(double r, int t_samples) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw ParameterError("modulus radius must be finite and >= 0");
  }
  if (t_samples < 1) {
    throw ParameterError("t_samples must be >= 1");
  }
}

}  // namespace

double second_difference(const ScalarField& f, Point x, Point h, double t) {
  const Point shift = t * h;
  return extend_eval(f, x + shift) + extend_eval(f, x - shift) - 2.0 * f.core(x);
}

double directional_modulus2(const NFunction& nf, const ScalarField& f, Point h, double r,
                            const QuadratureSpec& spec, int t_samples) {
  check_modulus_args(r, t_samples);
  if (std::abs(std::hypot(h.x1, h.x2) - 1.0) > 1e-12) {
    throw ParameterError("modulus direction must be a unit vector");
  }
  spec.validate();
  if (r == 0.0) {
    return 0.0;
  }
  const SimplexRule rule = simplex_rule(spec.order, spec.sample_level);
  return sweep_direction(nf, f, h, r, rule, base_samples(f, rule), t_samples).value;
}

ModulusResult full_modulus2(const NFunction& nf, const ScalarField& f, double r,
                            const QuadratureSpec& spec, int n_directions, int t_samples) {
  check_modulus_args(r, t_samples);
  if (n_directions < 4) {
    throw ParameterError("full_modulus2 needs at least 4 directions");
  }
  spec.validate();
  ModulusResult out;
  out.r = r;
  out.directions_sampled = n_directions;
  out.t_samples = t_samples;
  if (r == 0.0) {
    return out;
  }
  const SimplexRule rule = simplex_rule(spec.order, spec.sample_level);
  const std::vector<double> base = base_samples(f, rule);
  for (int k = 0; k < n_directions; ++k) {
    const double angle = std::numbers::pi * k / n_directions;
    const Point h{std::cos(angle), std::sin(angle)};
    const ModulusSweep sweep = sweep_direction(nf, f, h, r, rule, base, t_samples);
    if (sweep.value > out.value) {
      out.value = sweep.value;
      out.argmax_direction = h;
      out.argmax_t = sweep.t;
    }
  }
  return out;
}

double hat_kernel(double r, double s) {
  const double a = std::abs(s);
  return a >= r ? 0.0 : (r - a) / (r * r);
}

namespace {

std::vector<double> kernel_breaks(double center, double r) {
  std::vector<double> breaks{-r, 0.0, r};
  for (double k = std::ceil(center - r); k <= center + r; k += 1.0) {
    const double w = k - center;
    if (w > -r && w < r && w != 0.0) {
      breaks.push_back(w);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  return breaks;
}

}  // namespace

double steklov_eval(const SteklovField& sf, Point x) {
  if (!(sf.r > 0.0)) {
    throw ParameterError("Steklov radius must be positive");
  }
  const GaussRule& g = gauss_legendre(sf.kernel_order);
  const double r = sf.r;
  const std::vector<double> b1 = kernel_breaks(x.x1, r);
  const std::vector<double> b2 = kernel_breaks(x.x2, r);

  // One-dimensional nodes and kernel-weighted weights per axis.
  auto axis_rule = [&](const std::vector<double>& breaks, std::vector<double>& nodes,
                       std::vector<double>& weights) {
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
      const double c = 0.5 * (breaks[p] + breaks[p + 1]);
      const double h = 0.5 * (breaks[p + 1] - breaks[p]);
      for (int i = 0; i < sf.kernel_order; ++i) {
        const double w = c + h * g.nodes[i];
        nodes.push_back(w);
        weights.push_back(h * g.weights[i] * hat_kernel(r, w));
      }
    }
  };
  std::vector<double> n1, w1, n2, w2;
  axis_rule(b1, n1, w1);
  axis_rule(b2, n2, w2);

  double sum = 0.0;
  for (std::size_t i = 0; i < n1.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n2.size(); ++j) {
      row += w2[j] * extend_eval(sf.base, {x.x1 + n1[i], x.x2 + n2[j]});
    }
    sum += w1[i] * row;
  }
  return sum;
}

double steklov_partial(const SteklovField& sf, Point x, SteklovDerivative which) {
  const double d = sf.r / 8.0;
  auto F = [&](double a, double b) { return steklov_eval(sf, {x.x1 + a, x.x2 + b}); };
  switch (which) {
    case SteklovDerivative::d1:
      return (F(d, 0.0) - F(-d, 0.0)) / (2.0 * d);
    case SteklovDerivative::d2:
      return (F(0.0, d) - F(0.0, -d)) / (2.0 * d);
    case SteklovDerivative::d11:
      return (F(d, 0.0) - 2.0 * F(0.0, 0.0) + F(-d, 0.0)) / (d * d);
    case SteklovDerivative::d22:
      return (F(0.0, d) - 2.0 * F(0.0, 0.0) + F(0.0, -d)) / (d * d);
    case SteklovDerivative::d12:
      return (F(d, d) - F(d, -d) - F(-d, d) + F(-d, -d)) / (4.0 * d * d);
  }
  return 0.0;
}

ScalarField steklov_field(const SteklovField& sf) {
  ScalarField out;
  out.label = sf.base.label + "_steklov";
  out.smoothness_hint = Smoothness::smooth;
  out.core = [sf](Point x) { return steklov_eval(sf, x); };
  return out;
}

ScalarField steklov_partial_field(const SteklovField& sf, SteklovDerivative which) {
  ScalarField out;
  out.label = sf.base.label + "_steklov_partial";
  out.smoothness_hint = Smoothness::smooth;
  out.core = [sf, which](Point x) { return steklov_partial(sf, x, which); };
  return out;
}

}  // namespace simplexop
