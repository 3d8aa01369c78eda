#include "simplexop/operators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "simplexop/error.hpp"

namespace simplexop {

namespace {

// Terms whose weight falls below this are dropped; with unimodal weight
// profiles the dropped mass stays many orders below any tail_eps in use.
constexpr double kNegligibleWeight = 1e-20;
constexpr double kSeamMargin = 1e-9;

double log_multinomial(long total, long a, long b) {
  return std::lgamma(total + 1.0) - std::lgamma(a + 1.0) - std::lgamma(b + 1.0) -
         std::lgamma(static_cast<double>(total - a - b) + 1.0);
}

// exponent * log(base), with 0 * log 0 = 0 and -inf for a zero base otherwise.
double xlogy(long exponent, double base) {
  if (exponent == 0) {
    return 0.0;
  }
  if (base <= 0.0) {
    return -INFINITY;
  }
  return exponent * std::log(base);
}

// Seven-branch weight table shared by stancu_weight() and stancu_apply().
// `basis(k, l)` returns p_{n-s,k,l}(x) and must return 0 for indices outside
// {k, l >= 0, k + l <= n - s}.
template <typename Basis>
double stancu_branch(int n, long k, long l, int s, Point x, const Basis& basis) {
  const double rest = 1.0 - x.x1 - x.x2;
  const bool k_shift = k >= s;
  const bool l_shift = l >= s;
  double w = 0.0;
  if (k + l <= n - s) {
    w += rest * basis(k, l);
    if (k_shift) {
      w += x.x1 * basis(k - s, l);
    }
    if (l_shift) {
      w += x.x2 * basis(k, l - s);
    }
  } else {
    if (k_shift) {
      w += x.x1 * basis(k - s, l);
    }
    if (l_shift) {
      w += x.x2 * basis(k, l - s);
    }
  }
  return w;
}

void check_point(Point x) {
  if (!std::isfinite(x.x1) || !std::isfinite(x.x2) || x.x1 < 0.0 || x.x2 < 0.0 ||
      x.x1 + x.x2 > 1.0 + 1e-15) {
    throw DomainError("operator evaluation point lies outside the simplex");
  }
}

}  // namespace

void OperatorSpec::validate() const {
  if (n < 1) {
    throw ParameterError("operator degree n must be >= 1");
  }
  if (cell_order < 1) {
    throw ParameterError("cell quadrature order must be >= 1");
  }
  if (kind == OperatorKind::stancu) {
    if (s < 0 || 2 * s >= n) {
      throw ParameterError("Stancu shift needs 0 <= s < n/2 (n=" + std::to_string(n) +
                           ", s=" + std::to_string(s) + ")");
    }
  } else {
    if (!(truncation.tail_eps > 0.0 && truncation.tail_eps <= 1e-6)) {
      throw ParameterError("tail_eps must lie in (0, 1e-6]");
    }
    if (truncation.max_degree < 10) {
      throw ParameterError("max_degree must be >= 10");
    }
  }
}

double mkz_weight(int n, long k1, long k2, Point x) {
  if (n < 1 || k1 < 0 || k2 < 0) {
    throw DomainError("mkz_weight: need n >= 1 and k1, k2 >= 0");
  }
  const long m = k1 + k2;
  const double log_w = std::lgamma(n + m + 1.0) - std::lgamma(n + 1.0) - std::lgamma(k1 + 1.0) -
                       std::lgamma(k2 + 1.0) + xlogy(k1, x.x1) + xlogy(k2, x.x2) +
                       xlogy(n + 1L, 1.0 - x.x1 - x.x2);
  return std::exp(log_w);
}

double mkz_coefficient(int n, long k1, long k2) {
  if (n < 1 || k1 < 0 || k2 < 0) {
    throw DomainError("mkz_coefficient: need n >= 1 and k1, k2 >= 0");
  }
  const double m = static_cast<double>(n) + k1 + k2;
  return m * m * (m + 1.0) * (m + 1.0) /
         ((n + static_cast<double>(k1)) * (n + static_cast<double>(k2)));
}

ApplyResult mkz_apply(const ScalarField& f, const OperatorSpec& spec, Point x) {
  spec.validate();
  if (spec.kind != OperatorKind::mkz) {
    throw ParameterError("mkz_apply called with a non-MKZ spec");
  }
  check_point(x);
  const double t = x.x1 + x.x2;
  if (!(t < 1.0 - kSeamMargin)) {
    throw DomainError("mkz_apply: point too close to the anti-diagonal");
  }
  const int n = spec.n;
  const auto& trunc = spec.truncation;
  long cap = trunc.max_degree;
  if (trunc.scale_with_seam) {
    cap = std::max(cap, static_cast<long>(std::ceil(50.0 * n / (1.0 - t))));
  }

  ApplyResult out;
  auto add_term = [&](long k1, long k2, double w) {
    out.value += w * cell_mean(f.core, mkz_cell(n, k1, k2), spec.cell_order);
    out.weight_mass += w;
    ++out.terms_used;
  };

  if (t == 0.0) {
    add_term(0, 0, 1.0);
    return out;
  }

  const double log_t = std::log(t);
  const double log_rest = std::log1p(-t);
  const double a = x.x1 / t;  // share of x1 within a degree level
  const double odds = a / (1.0 - a);
  for (long m = 0; m <= cap; ++m) {
    // Level mass C(n+m, m) t^m (1-t)^(n+1): a negative-binomial pmf in m.
    const double log_level = std::lgamma(n + m + 1.0) - std::lgamma(n + 1.0) -
                             std::lgamma(m + 1.0) + m * log_t + (n + 1.0) * log_rest;
    const double level = std::exp(log_level);
    if (level >= kNegligibleWeight) {
      if (a == 0.0) {
        add_term(0, m, level);
      } else if (a == 1.0) {
        add_term(m, 0, level);
      } else {
        // Binomial(m, a) split of the level, walked outward from its mode.
        const long mode = std::clamp(static_cast<long>(std::floor((m + 1) * a)), 0L, m);
        const double w_mode = level * std::exp(log_multinomial(m, mode, m - mode) +
                                               mode * std::log(a) + (m - mode) * std::log1p(-a));
        double w = w_mode;
        for (long k = mode; k <= m && w >= kNegligibleWeight; ++k) {
          add_term(k, m - k, w);
          w *= static_cast<double>(m - k) / (k + 1.0) * odds;
        }
        if (mode > 0) {
          w = w_mode * mode / (static_cast<double>(m - mode) + 1.0) / odds;
          for (long k = mode - 1; k >= 0 && w >= kNegligibleWeight; --k) {
            add_term(k, m - k, w);
            w *= k / (static_cast<double>(m - k) + 1.0) / odds;
          }
        }
      }
    }
    if (out.weight_mass >= 1.0 - trunc.tail_eps) {
      return out;
    }
  }
  out.truncated = true;
  if (out.weight_mass < 1.0 - 1e-3) {
    throw TruncationError("MKZ series reached degree " + std::to_string(cap) +
                          " with weight mass " + std::to_string(out.weight_mass));
  }
  return out;
}

double bernstein_basis(int n, long k, long l, Point x) {
  if (k < 0 || l < 0 || k + l > n) {
    throw DomainError("bernstein_basis: need k, l >= 0 and k + l <= n");
  }
  const double log_w = log_multinomial(n, k, l) + xlogy(k, x.x1) + xlogy(l, x.x2) +
                       xlogy(n - k - l, 1.0 - x.x1 - x.x2);
  return std::exp(log_w);
}

double stancu_weight(int n, long k, long l, int s, Point x) {
  if (n < 1 || s < 0 || 2 * s >= n) {
    throw ParameterError("stancu_weight: need 0 <= s < n/2");
  }
  if (k < 0 || l < 0 || k + l > n) {
    throw DomainError("stancu_weight: need k, l >= 0 and k + l <= n");
  }
  const int base = n - s;
  return stancu_branch(n, k, l, s, x, [&](long a, long b) {
    return (a < 0 || b < 0 || a + b > base) ? 0.0 : bernstein_basis(base, a, b, x);
  });
}

ApplyResult stancu_apply(const ScalarField& f, const OperatorSpec& spec, Point x) {
  spec.validate();
  if (spec.kind != OperatorKind::stancu) {
    throw ParameterError("stancu_apply called with a non-Stancu spec");
  }
  check_point(x);
  const int n = spec.n;
  const int s = spec.s;
  const int base = n - s;
  // Triangular table of p_{n-s,a,b}(x), row-major over a.
  std::vector<double> table(static_cast<std::size_t>(base + 1) * (base + 2) / 2);
  auto index = [base](long a, long b) {
    return static_cast<std::size_t>(a * (2L * base + 3 - a) / 2 + b);
  };
  for (long a = 0; a <= base; ++a) {
    for (long b = 0; a + b <= base; ++b) {
      table[index(a, b)] = bernstein_basis(base, a, b, x);
    }
  }
  auto basis = [&](long a, long b) {
    return (a < 0 || b < 0 || a + b > base) ? 0.0 : table[index(a, b)];
  };

  ApplyResult out;
  for (long k = 0; k <= n; ++k) {
    for (long l = 0; k + l <= n; ++l) {
      const double w = stancu_branch(n, k, l, s, x, basis);
      out.weight_mass += w;
      if (w == 0.0) {
        continue;
      }
      // (n+2)^2 times the cell integral is the cell mean.
      out.value += w * cell_mean(f.core, stancu_cell(n, k, l), spec.cell_order);
      ++out.terms_used;
    }
  }
  return out;
}

ApplyResult apply(const ScalarField& f, const OperatorSpec& spec, Point x) {
  return spec.kind == OperatorKind::mkz ? mkz_apply(f, spec, x) : stancu_apply(f, spec, x);
}

double moment(const OperatorSpec& spec, Point x, MomentAxis axis, MomentOrder order) {
  ScalarField g;
  g.label = "moment";
  const bool first_axis = axis == MomentAxis::x1;
  switch (order) {
    case MomentOrder::first:
      g.core = [x, first_axis](Point u) { return first_axis ? u.x1 - x.x1 : u.x2 - x.x2; };
      break;
    case MomentOrder::second:
      g.core = [x, first_axis](Point u) {
        const double d = first_axis ? u.x1 - x.x1 : u.x2 - x.x2;
        return d * d;
      };
      break;
    case MomentOrder::abs_mixed:
      g.core = [x](Point u) { return std::abs(u.x1 - x.x1) * std::abs(u.x2 - x.x2); };
      break;
  }
  return apply(g, spec, x).value;
}

const char* to_string(OperatorKind kind) {
  return kind == OperatorKind::mkz ? "mkz" : "stancu";
}

OperatorKind operator_kind_from_string(const std::string& text) {
  if (text == "mkz") {
    return OperatorKind::mkz;
  }
  if (text == "stancu") {
    return OperatorKind::stancu;
  }
  throw ConfigError("unknown operator '" + text + "' (expected mkz or stancu)");
}

}  // namespace simplexop
