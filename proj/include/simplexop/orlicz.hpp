#pragma once

#include <functional>
#include <vector>

#include "simplexop/domain.hpp"
#include "simplexop/nfunctions.hpp"

namespace simplexop {

/// Orlicz norm from the infimum formula inf_a (1/a)(1 + int Phi(a f)).
///
/// For a numerically null field `value` is 0 and `alpha_star` is +inf.
struct NormResult {
  double value = 0.0;
  double alpha_star = 0.0;
  double modular_at_alpha = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool quad_flag = false;  // some modular evaluation missed its quadrature tolerance
};

/// Values of a field frozen at the nodes of a SimplexRule. Norms of costly
/// fields (operator errors, second differences, Steklov derivatives) are
/// computed from one sampling instead of re-evaluating the field per scale.
struct SampledField {
  std::vector<double> values;
  std::vector<double> weights;

  static SampledField sample(const std::function<double(Point)>& f, const SimplexRule& rule);
  static SampledField from_values(std::vector<double> values, const SimplexRule& rule);

  bool null() const;
  double integral() const;
};

double modular(const NFunction& nf, const ScalarField& f, double scale, const QuadratureSpec& spec);
double modular(const NFunction& nf, const SampledField& f, double scale);

NormResult orlicz_norm(const NFunction& nf, const ScalarField& f, const QuadratureSpec& spec);
NormResult orlicz_norm(const NFunction& nf, const SampledField& f);

/// L^p norm over the simplex.
double lp_norm(double p, const ScalarField& f, const QuadratureSpec& spec);
double lp_norm(double p, const SampledField& f);

/// Orlicz norm for Phi(u) = u^p in closed form: p (p-1)^((1-p)/p) ||f||_p.
double power_norm_factor(double p);
double power_norm_closed_form(double p, const ScalarField& f, const QuadratureSpec& spec);
double power_norm_closed_form(double p, const SampledField& f);

/// |int f g| for a witness g with int Psi(|g|) <= 1 (1e-9 slack), a lower bound
/// of the dual-formula norm. Throws ConstraintViolationError otherwise.
double dual_lower_bound(const NFunction& nf, const ScalarField& f, const ScalarField& g,
                        const QuadratureSpec& spec);

/// g(a) = (1 + modular(a)) / a minimised on log a: geometric bracketing
/// (factor 4) from a = 1, then golden-section to `log_tol` in log a.
NormResult minimize_gauge(const std::function<double(double)>& modular_at, double log_tol = 1e-10);

}  // namespace simplexop
