#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace simplexop {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Point operator-(Point a, Point b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Point operator*(double s, Point a) { return {s * a.x1, s * a.x2}; }
  friend bool operator==(Point a, Point b) = default;
};

enum class Smoothness { constant, affine, smooth, lipschitz, rough };

/// A real function on the simplex {x1, x2 >= 0, x1 + x2 <= 1}.
///
/// Only `core` restricted to the simplex is meaningful; extend_eval() gives the
/// reflected, 1-periodic extension to the whole plane.
struct ScalarField {
  std::function<double(Point)> core;
  std::string label;
  Smoothness smoothness_hint = Smoothness::smooth;

  double operator()(Point x) const { return core(x); }
};

struct RectCell {
  double x1_lo = 0.0;
  double x1_hi = 0.0;
  double x2_lo = 0.0;
  double x2_hi = 0.0;

  double measure() const { return (x1_hi - x1_lo) * (x2_hi - x2_lo); }
  bool valid() const { return x1_lo <= x1_hi && x2_lo <= x2_hi; }
};

struct QuadratureSpec {
  int order = 6;               // Gauss points per axis
  int refinement_levels = 6;   // dyadic levels tried by integrate_simplex
  double rel_tol = 1e-9;
  int sample_level = 3;        // composite level of the fixed rule used for sampled fields

  void validate() const;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `order` points; rules are computed once and cached.
const GaussRule& gauss_legendre(int order);

/// Fixed node set on the simplex: the collapsed-square (Duffy) map
/// x = (t (1 - w), t w), Jacobian t, with a 2^level x 2^level composite tensor
/// Gauss rule in (t, w). All nodes are interior to the simplex.
struct SimplexRule {
  std::vector<Point> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

SimplexRule simplex_rule(int order, int level);

struct QuadResult {
  double value = 0.0;
  double delta = 0.0;       // change between the last two refinement levels
  int levels_used = 0;
  bool converged = false;
};

/// Reduces y modulo 1 into [0,1)^2; points above the anti-diagonal are
/// reflected through x -> 1 - x. The anti-diagonal itself keeps the core value.
double extend_eval(const ScalarField& f, Point y);

/// Integral over the simplex with dyadic refinement until successive levels
/// agree to rel_tol. Throws IntegrandError on a non-finite node value.
QuadResult integrate_simplex(const std::function<double(Point)>& g, const QuadratureSpec& spec);

double integrate_rule(const std::function<double(Point)>& g, const SimplexRule& rule);

/// Tensor Gauss rule on an axis-aligned rectangle (no subdivision).
double integrate_rect(const std::function<double(Point)>& g, const RectCell& cell, int order);

/// Average of g over the cell.
double cell_mean(const std::function<double(Point)>& g, const RectCell& cell, int order);

/// [k1/(n+k1+k2), (k1+1)/(n+k1+k2+1)] x [k2/(n+k1+k2), (k2+1)/(n+k1+k2+1)]
RectCell mkz_cell(int n, long k1, long k2);

/// [k/(n+2), (k+1)/(n+2)] x [l/(n+2), (l+1)/(n+2)]
RectCell stancu_cell(int n, long k, long l);

/// Closed form of the MKZ cell measure, (n+k1)(n+k2) / ((n+m)^2 (n+m+1)^2).
double mkz_cell_measure(int n, long k1, long k2);

inline bool in_simplex(Point x) { return x.x1 >= 0.0 && x.x2 >= 0.0 && x.x1 + x.x2 <= 1.0; }

}  // namespace simplexop
