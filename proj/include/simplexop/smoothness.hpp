#pragma once

#include "simplexop/domain.hpp"
#include "simplexop/nfunctions.hpp"
#include "simplexop/orlicz.hpp"

namespace simplexop {

/// Sampled lower estimate of the second-order modulus sup_h sup_{|t|<=r}
/// ||f(.+th) + f(.-th) - 2f||_Phi.
struct ModulusResult {
  double value = 0.0;
  double r = 0.0;
  int directions_sampled = 0;
  int t_samples = 0;
  Point argmax_direction{1.0, 0.0};
  double argmax_t = 0.0;
};

/// f(x + t h) + f(x - t h) - 2 f(x), shifted arguments read through extend_eval().
double second_difference(const ScalarField& f, Point x, Point h, double t);

/// Max over t in {r j / t_samples : j = 1..t_samples} of the Orlicz norm of the
/// second difference in direction h (|h| = 1), sampled on the spec's fixed rule.
double directional_modulus2(const NFunction& nf, const ScalarField& f, Point h, double r,
                            const QuadratureSpec& spec, int t_samples = 16);

/// Max of directional_modulus2 over the directions at angles pi k / n_directions.
ModulusResult full_modulus2(const NFunction& nf, const ScalarField& f, double r,
                            const QuadratureSpec& spec, int n_directions = 32, int t_samples = 16);

/// Steklov mean f_r of the extended field.
struct SteklovField {
  ScalarField base;
  double r = 0.1;
  int kernel_order = 8;
};

enum class SteklovDerivative { d1, d2, d11, d22, d12 };

/// Density of the sum of two independent uniforms on [-r/2, r/2]:
/// (r - |s|) / r^2 on [-r, r].
double hat_kernel(double r, double s);

/// f_r(x) = int f(x + w) T_r(w1) T_r(w2) dw, the two-variable form of the
/// four-fold average over [-r/2, r/2]^4. Each axis is split at the kernel peak
/// and wherever x_i + w_i crosses an integer (a possible jump of the extension).
double steklov_eval(const SteklovField& sf, Point x);

/// Central differences of f_r with step r/8.
double steklov_partial(const SteklovField& sf, Point x, SteklovDerivative which);

ScalarField steklov_field(const SteklovField& sf);
ScalarField steklov_partial_field(const SteklovField& sf, SteklovDerivative which);

}  // namespace simplexop
