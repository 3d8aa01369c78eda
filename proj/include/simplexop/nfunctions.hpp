#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace simplexop {

using RealMap = std::function<double(double)>;

/// A convex N-function Phi on [0, inf) with its right derivative.
///
/// `analytic_complement`, when present, is the closed-form Legendre conjugate
/// Psi(v) = sup_u (u v - Phi(u)); otherwise the conjugate is obtained by
/// inverting `phi_prime`.
struct NFunction {
  std::string name;
  RealMap phi;
  RealMap phi_prime;
  std::optional<RealMap> analytic_complement;
  std::map<std::string, double> params;
};

/// Evidence from a sampled scan of Phi(2u)/Phi(u) over u >= u0.
struct Delta2Report {
  bool satisfied = false;
  double c_estimate = 0.0;
  double u0 = 0.0;
  int samples = 0;
  double ratio_at_u0 = 0.0;
  double ratio_at_umax = 0.0;
};

struct Delta2Grid {
  double u_max = 100.0;
  int points = 200;
  double growth_factor = 10.0;
};

struct ComplementOptions {
  /// Largest bracket end tried while searching for phi_prime(u) >= v.
  double bracket_cap = 1e100;
};

/// Phi(|u|). Throws DomainError for non-finite u.
double phi_eval(const NFunction& nf, double u);

/// Psi(v) for v >= 0.
double complementary_eval(const NFunction& nf, double v, const ComplementOptions& opts = {});

/// The inverse of phi_prime at v, i.e. the maximiser of u v - Phi(u).
double phi_prime_inverse(const NFunction& nf, double v, const ComplementOptions& opts = {});

/// Psi packaged as an N-function in its own right (numerical, no closed form).
NFunction complement_of(const NFunction& nf);

Delta2Report check_delta2(const NFunction& nf, double u0, const Delta2Grid& grid = {});

// Built-in families.
NFunction power_nfunction(double p);         // u^p
NFunction scaled_power_nfunction(double p);  // u^p / p
NFunction power_log_nfunction(double p);     // u^p ln(1 + u)
NFunction exp_minus_nfunction();             // e^u - u - 1

/// Parses `family:key=value,...`, e.g. `power:p=2`, `powerlog:p=2`, `expm:`.
NFunction make_nfunction(std::string_view key);

/// Registry keys that every build provides.
std::vector<std::string> builtin_nfunction_keys();

/// Sampled checks of the N-function axioms. Returns human-readable violations;
/// empty means every check passed.
std::vector<std::string> audit_nfunction(const NFunction& nf);

}  // namespace simplexop
