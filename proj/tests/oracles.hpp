#pragma once

// Brute-force reference computations for the test suites. Nothing here calls
// into the code paths it is used to check: sums are naive, integrals are
// midpoint/centroid rules, factorials come from long-double lgamma.

#include <cmath>
#include <functional>
#include <vector>

#include "simplexop/domain.hpp"

namespace oracle {

using simplexop::Point;

/// max over a uniform grid on [0, u_max] of u v - phi(u).
inline double legendre_by_grid(const std::function<double(double)>& phi, double v, double u_max,
                               int points = 2'000'000) {
  double best = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double u = u_max * i / points;
    best = std::max(best, u * v - phi(u));
  }
  return best;
}

/// Centroid rule on the uniform N x N triangulation of the simplex.
inline double simplex_sum(const std::function<double(Point)>& g, int n = 600) {
  const double h = 1.0 / n;
  const double area = 0.5 * h * h;
  long double sum = 0.0L;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; i + j < n; ++j) {
      sum += g({(i + 1.0 / 3.0) * h, (j + 1.0 / 3.0) * h});
      if (i + j + 1 < n) {
        sum += g({(i + 2.0 / 3.0) * h, (j + 2.0 / 3.0) * h});
      }
    }
  }
  return static_cast<double>(sum * area);
}

/// Midpoint rule for the mean of g over a rectangle.
inline double rect_mean(const std::function<double(Point)>& g, double a1, double b1, double a2,
                        double b2, int m = 24) {
  long double sum = 0.0L;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      sum += g({a1 + (b1 - a1) * (i + 0.5) / m, a2 + (b2 - a2) * (j + 0.5) / m});
    }
  }
  return static_cast<double>(sum / (static_cast<long double>(m) * m));
}

inline long double log_factorial(long k) { return std::lgamma(static_cast<long double>(k) + 1.0L); }

inline double mkz_weight(int n, long k1, long k2, Point x) {
  const long double t = 1.0L - x.x1 - x.x2;
  const long double log_c = log_factorial(n + k1 + k2) - log_factorial(n) - log_factorial(k1) -
                            log_factorial(k2);
  return static_cast<double>(std::exp(log_c) * std::pow(static_cast<long double>(x.x1), k1) *
                             std::pow(static_cast<long double>(x.x2), k2) * std::pow(t, n + 1));
}

inline double bernstein(int n, long k, long l, Point x) {
  const long double t = 1.0L - x.x1 - x.x2;
  const long double log_c =
      log_factorial(n) - log_factorial(k) - log_factorial(l) - log_factorial(n - k - l);
  return static_cast<double>(std::exp(log_c) * std::pow(static_cast<long double>(x.x1), k) *
                             std::pow(static_cast<long double>(x.x2), l) * std::pow(t, n - k - l));
}

/// The MKZ-Kantorovich sum over all (k1, k2) with k1 + k2 <= max_degree,
/// cell averages by the midpoint rule, cell bounds from the raw definition.
inline double mkz_apply(const std::function<double(Point)>& f, int n, Point x, long max_degree,
                        int mean_points = 8) {
  long double sum = 0.0L;
  for (long m = 0; m <= max_degree; ++m) {
    for (long k1 = 0; k1 <= m; ++k1) {
      const long k2 = m - k1;
      const double w = mkz_weight(n, k1, k2, x);
      if (w == 0.0) {
        continue;
      }
      const double d0 = n + m;
      const double d1 = n + m + 1.0;
      sum += w * rect_mean(f, k1 / d0, (k1 + 1) / d1, k2 / d0, (k2 + 1) / d1, mean_points);
    }
  }
  return static_cast<double>(sum);
}

/// Stancu-Kantorovich weight written out case by case, p_{n-s,.,.} from bernstein().
inline double stancu_weight(int n, long k, long l, int s, Point x) {
  auto p = [&](long a, long b) {
    return (a < 0 || b < 0 || a + b > n - s) ? 0.0 : bernstein(n - s, a, b, x);
  };
  const double r = 1.0 - x.x1 - x.x2;
  if (k + l <= n - s) {
    if (k < s && l < s) return r * p(k, l);
    if (k >= s && l < s) return r * p(k, l) + x.x1 * p(k - s, l);
    if (k < s && l >= s) return r * p(k, l) + x.x2 * p(k, l - s);
    return r * p(k, l) + x.x1 * p(k - s, l) + x.x2 * p(k, l - s);
  }
  if (k >= s && l < s) return x.x1 * p(k - s, l);
  if (k < s && l >= s) return x.x2 * p(k, l - s);
  if (k >= s && l >= s) return x.x1 * p(k - s, l) + x.x2 * p(k, l - s);
  return 0.0;
}

inline double stancu_apply(const std::function<double(Point)>& f, int n, int s, Point x,
                           int mean_points = 8) {
  long double sum = 0.0L;
  const double d = n + 2.0;
  for (long k = 0; k <= n; ++k) {
    for (long l = 0; k + l <= n; ++l) {
      const double w = stancu_weight(n, k, l, s, x);
      if (w != 0.0) {
        sum += w * rect_mean(f, k / d, (k + 1) / d, l / d, (l + 1) / d, mean_points);
      }
    }
  }
  return static_cast<double>(sum);
}

/// Four-fold midpoint sum of (1/r^4) int_{[-r/2, r/2]^4} f(x + u + v) du dv.
inline double steklov_4d(const std::function<double(Point)>& f, Point x, double r, int m = 40) {
  const double h = r / m;
  std::vector<double> nodes(m);
  for (int i = 0; i < m; ++i) {
    nodes[i] = -0.5 * r + (i + 0.5) * h;
  }
  long double sum = 0.0L;
  for (double u1 : nodes) {
    for (double v1 : nodes) {
      for (double u2 : nodes) {
        for (double v2 : nodes) {
          sum += f({x.x1 + u1 + v1, x.x2 + u2 + v2});
        }
      }
    }
  }
  const long double count = static_cast<long double>(m) * m * m * m;
  return static_cast<double>(sum / count);
}

}  // namespace oracle

namespace oracle {

/// Richardson-extrapolated steklov_4d; exact for quadratic f (midpoint error is c h^2).
inline double steklov_4d_extrapolated(const std::function<double(simplexop::Point)>& f,
                                      simplexop::Point x, double r, int m = 20) {
  return (4.0 * steklov_4d(f, x, r, 2 * m) - steklov_4d(f, x, r, m)) / 3.0;
}

}  // namespace oracle
