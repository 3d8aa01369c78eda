#include "simplexop/orlicz.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "simplexop/error.hpp"

namespace simplexop {

namespace {

constexpr double kBracketFactor = 4.0;
constexpr int kMaxBracketSteps = 120;

double gauge(const std::function<double(double)>& modular_at, double alpha) {
  const double m = modular_at(alpha);
  if (std::isnan(m)) {
    return std::numeric_limits<double>::infinity();
  }
  return (1.0 + m) / alpha;
}

}  // namespace

SampledField SampledField::sample(const std::function<double(Point)>& f, const SimplexRule& rule) {
  SampledField out;
  out.values.reserve(rule.size());
  for (const Point& x : rule.nodes) {
    const double v = f(x);
    if (!std::isfinite(v)) {
      throw IntegrandError("sampled field is not finite at a node");
    }
    out.values.push_back(v);
  }
  out.weights = rule.weights;
  return out;
}

SampledField SampledField::from_values(std::vector<double> values, const SimplexRule& rule) {
  if (values.size() != rule.size()) {
    throw DomainError("SampledField: value count does not match the rule");
  }
  SampledField out;
  out.values = std::move(values);
  out.weights = rule.weights;
  return out;
}

bool SampledField::null() const {
  for (double v : values) {
    if (v != 0.0) {
      return false;
    }
  }
  return true;
}

double SampledField::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    s += weights[i] * values[i];
  }
  return s;
}

NormResult minimize_gauge(const std::function<double(double)>& modular_at, double log_tol) {
  // Bracket [lo, hi] around mid on a log scale with g(mid) <= both ends.
  double mid = 0.0;  // log alpha
  double g_mid = gauge(modular_at, 1.0);
  const double step = std::log(kBracketFactor);
  double lo = mid - step;
  double hi = mid + step;
  double g_lo = gauge(modular_at, std::exp(lo));
  double g_hi = gauge(modular_at, std::exp(hi));
  bool any_finite = std::isfinite(g_mid) || std::isfinite(g_lo) || std::isfinite(g_hi);
  int steps = 0;
  while (!(g_mid <= g_lo && g_mid <= g_hi)) {
    if (++steps > kMaxBracketSteps) {
      if (!any_finite) {
        throw NormOverflowError("modular is not finite at any probed scale");
      }
      throw NormOverflowError("could not bracket the minimising scale");
    }
    if (g_lo < g_mid) {
      // descend towards small alpha
      hi = mid;
      g_hi = g_mid;
      mid = lo;
      g_mid = g_lo;
      lo -= step;
      g_lo = gauge(modular_at, std::exp(lo));
    } else {
      lo = mid;
      g_lo = g_mid;
      mid = hi;
      g_mid = g_hi;
      hi += step;
      g_hi = gauge(modular_at, std::exp(hi));
    }
    any_finite = any_finite || std::isfinite(g_lo) || std::isfinite(g_hi) || std::isfinite(g_mid);
  }
  if (!std::isfinite(g_mid)) {
    throw NormOverflowError("modular is not finite at any probed scale");
  }

  NormResult out;
  out.bracket_lo = std::exp(lo);
  out.bracket_hi = std::exp(hi);

  const double inv_phi = 1.0 / std::numbers::phi;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = gauge(modular_at, std::exp(c));
  double gd = gauge(modular_at, std::exp(d));
  while (b - a > log_tol) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = gauge(modular_at, std::exp(c));
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = gauge(modular_at, std::exp(d));
    }
  }
  // Keep the best point ever evaluated; the bracket midpoint may be marginally worse.
  double best = (gc <= gd) ? c : d;
  double g_best = std::min(gc, gd);
  if (g_mid < g_best) {
    best = mid;
    g_best = g_mid;
  }
  out.alpha_star = std::exp(best);
  out.modular_at_alpha = modular_at(out.alpha_star);
  out.value = (1.0 + out.modular_at_alpha) / out.alpha_star;
  return out;
}

double modular(const NFunction& nf, const ScalarField& f, double scale, const QuadratureSpec& spec) {
  if (!(scale > 0.0)) {
    throw ParameterError("modular: scale must be positive");
  }
  return integrate_simplex([&](Point x) { return phi_eval(nf, scale * f(x)); }, spec).value;
}

double modular(const NFunction& nf, const SampledField& f, double scale) {
  if (!(scale > 0.0)) {
    throw ParameterError("modular: scale must be positive");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double v = f.values[i];
    if (v != 0.0) {
      sum += f.weights[i] * nf.phi(scale * std::abs(v));
    }
  }
  return sum;
}

NormResult orlicz_norm(const NFunction& nf, const ScalarField& f, const QuadratureSpec& spec) {
  spec.validate();
  const QuadResult l1 = integrate_simplex([&](Point x) { return std::abs(f(x)); }, spec);
  if (l1.value == 0.0) {
    NormResult out;
    out.alpha_star = std::numeric_limits<double>::infinity();
    return out;
  }
  bool flagged = false;
  NormResult out = minimize_gauge([&](double alpha) {
    const QuadResult q =
        integrate_simplex([&](Point x) { return phi_eval(nf, alpha * f(x)); }, spec);
    flagged = flagged || !q.converged;
    return q.value;
  });
  out.quad_flag = flagged;
  return out;
}

NormResult orlicz_norm(const NFunction& nf, const SampledField& f) {
  if (f.null()) {
    NormResult out;
    out.alpha_star = std::numeric_limits<double>::infinity();
    return out;
  }
  return minimize_gauge([&](double alpha) { return modular(nf, f, alpha); });
}

double lp_norm(double p, const ScalarField& f, const QuadratureSpec& spec) {
  if (!(p >= 1.0)) {
    throw ParameterError("lp_norm: p must be >= 1");
  }
  const QuadResult q =
      integrate_simplex([&](Point x) { return std::pow(std::abs(f(x)), p); }, spec);
  return std::pow(q.value, 1.0 / p);
}

double lp_norm(double p, const SampledField& f) {
  if (!(p >= 1.0)) {
    throw ParameterError("lp_norm: p must be >= 1");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    sum += f.weights[i] * std::pow(std::abs(f.values[i]), p);
  }
  return std::pow(sum, 1.0 / p);
}

double power_norm_factor(double p) {
  if (!(p > 1.0)) {
    throw ParameterError("power norm needs p > 1");
  }
  return p * std::pow(p - 1.0, (1.0 - p) / p);
}

double power_norm_closed_form(double p, const ScalarField& f, const QuadratureSpec& spec) {
  return power_norm_factor(p) * lp_norm(p, f, spec);
}

double power_norm_closed_form(double p, const SampledField& f) {
  return power_norm_factor(p) * lp_norm(p, f);
}

double dual_lower_bound(const NFunction& nf, const ScalarField& f, const ScalarField& g,
                        const QuadratureSpec& spec) {
  const double psi_mass =
      integrate_simplex([&](Point x) { return complementary_eval(nf, std::abs(g(x))); }, spec)
          .value;
  if (psi_mass > 1.0 + 1e-9) {
    throw ConstraintViolationError("dual witness infeasible: int Psi(g) = " +
                                   std::to_string(psi_mass));
  }
  return std::abs(integrate_simplex([&](Point x) { return f(x) * g(x); }, spec).value);
}

}  // namespace simplexop
