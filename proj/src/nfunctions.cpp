#include "simplexop/nfunctions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "simplexop/error.hpp"

namespace simplexop {

double phi_eval(const NFunction& nf, double u) {
  if (!std::isfinite(u)) {
    throw DomainError("phi_eval: non-finite argument");
  }
  if (u == 0.0) {
    return 0.0;
  }
  return nf.phi(std::abs(u));
}

double phi_prime_inverse(const NFunction& nf, double v, const ComplementOptions& opts) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError("phi_prime_inverse: argument must be finite and >= 0");
  }
  if (v == 0.0) {
    return 0.0;
  }
  double lo = 0.0;
  double hi = 1.0;
  while (nf.phi_prime(hi) < v) {
    lo = hi;
    hi *= 2.0;
    if (hi > opts.bracket_cap) {
      throw UnboundedComplementError("complement of " + nf.name +
                                     " is unbounded: derivative never reaches " +
                                     std::to_string(v));
    }
  }
  // phi_prime is nondecreasing; bisect down to adjacent doubles.
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (nf.phi_prime(mid) < v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double complementary_eval(const NFunction& nf, double v, const ComplementOptions& opts) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError("complementary_eval: argument must be finite and >= 0");
  }
  if (v == 0.0) {
    return 0.0;
  }
  if (nf.analytic_complement) {
    return (*nf.analytic_complement)(v);
  }
  const double u = phi_prime_inverse(nf, v, opts);
  return std::max(0.0, u * v - nf.phi(u));
}

NFunction complement_of(const NFunction& nf) {
  NFunction out;
  out.name = "complement(" + nf.name + ")";
  out.params = nf.params;
  out.phi = [nf](double v) { return complementary_eval(nf, v); };
  out.phi_prime = [nf](double v) { return phi_prime_inverse(nf, v); };
  return out;
}

Delta2Report check_delta2(const NFunction& nf, double u0, const Delta2Grid& grid) {
  if (!(u0 > 0.0) || !(grid.u_max > u0) || grid.points < 100) {
    throw DomainError("check_delta2: need u0 > 0, u_max > u0 and at least 100 grid points");
  }
  Delta2Report report;
  report.u0 = u0;
  report.samples = grid.points;
  const double log_lo = std::log(u0);
  const double log_hi = std::log(grid.u_max);
  double c = 0.0;
  for (int i = 0; i < grid.points; ++i) {
    const double u = (i == 0) ? u0
                     : (i == grid.points - 1)
                         ? grid.u_max
                         : std::exp(log_lo + (log_hi - log_lo) * i / (grid.points - 1));
    const double base = nf.phi(u);
    if (!(base > 0.0)) {
      throw DegenerateNFunctionError("check_delta2: " + nf.name + " vanishes at u > 0");
    }
    const double ratio = nf.phi(2.0 * u) / base;
    const double r = std::isnan(ratio) ? std::numeric_limits<double>::infinity() : ratio;
    c = std::max(c, r);
    if (i == 0) {
      report.ratio_at_u0 = r;
    }
    if (i == grid.points - 1) {
      report.ratio_at_umax = r;
    }
  }
  report.c_estimate = c;
  report.satisfied = std::isfinite(report.ratio_at_umax) &&
                     report.ratio_at_umax <= grid.growth_factor * report.ratio_at_u0;
  return report;
}

NFunction power_nfunction(double p) {
  if (!(p > 1.0)) {
    throw ParameterError("power N-function needs p > 1");
  }
  NFunction nf;
  std::ostringstream name;
  name << "power:p=" << p;
  nf.name = name.str();
  nf.params["p"] = p;
  if (p == 2.0) {
    nf.phi = [](double u) { return u * u; };
    nf.phi_prime = [](double u) { return 2.0 * u; };
  } else if (p == 3.0) {
    nf.phi = [](double u) { return u * u * u; };
    nf.phi_prime = [](double u) { return 3.0 * u * u; };
  } else {
    nf.phi = [p](double u) { return std::pow(u, p); };
    nf.phi_prime = [p](double u) { return p * std::pow(u, p - 1.0); };
  }
  // sup_u (u v - u^p) = (p - 1) (v / p)^(p / (p - 1))
  const double q = p / (p - 1.0);
  nf.analytic_complement = [p, q](double v) { return (p - 1.0) * std::pow(v / p, q); };
  return nf;
}

NFunction scaled_power_nfunction(double p) {
  if (!(p > 1.0)) {
    throw ParameterError("scaled power N-function needs p > 1");
  }
  NFunction nf;
  std::ostringstream name;
  name << "spower:p=" << p;
  nf.name = name.str();
  nf.params["p"] = p;
  nf.phi = [p](double u) { return std::pow(u, p) / p; };
  nf.phi_prime = [p](double u) { return std::pow(u, p - 1.0); };
  const double q = p / (p - 1.0);
  nf.analytic_complement = [q](double v) { return std::pow(v, q) / q; };
  return nf;
}

NFunction power_log_nfunction(double p) {
  if (!(p >= 1.0)) {
    throw ParameterError("power-log N-function needs p >= 1");
  }
  NFunction nf;
  std::ostringstream name;
  name << "powerlog:p=" << p;
  nf.name = name.str();
  nf.params["p"] = p;
  nf.phi = [p](double u) { return std::pow(u, p) * std::log1p(u); };
  nf.phi_prime = [p](double u) {
    if (u == 0.0) {
      return 0.0;
    }
    return p * std::pow(u, p - 1.0) * std::log1p(u) + std::pow(u, p) / (1.0 + u);
  };
  return nf;
}

NFunction exp_minus_nfunction() {
  NFunction nf;
  nf.name = "expm:";
  nf.phi = [](double u) { return std::expm1(u) - u; };
  nf.phi_prime = [](double u) { return std::expm1(u); };
  nf.analytic_complement = [](double v) { return (1.0 + v) * std::log1p(v) - v; };
  return nf;
}

namespace {

std::map<std::string, double> parse_params(std::string_view text, std::string_view key) {
  std::map<std::string, double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) {
      comma = text.size();
    }
    const std::string_view item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) {
      continue;
    }
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("malformed N-function parameter '" + std::string(item) + "' in '" +
                        std::string(key) + "'");
    }
    const std::string name(item.substr(0, eq));
    const std::string value(item.substr(eq + 1));
    try {
      std::size_t used = 0;
      out[name] = std::stod(value, &used);
      if (used != value.size()) {
        throw std::invalid_argument(value);
      }
    } catch (const std::exception&) {
      throw ConfigError("bad numeric value '" + value + "' in '" + std::string(key) + "'");
    }
  }
  return out;
}

double require_param(const std::map<std::string, double>& params, const std::string& name,
                     std::string_view key) {
  const auto it = params.find(name);
  if (it == params.end()) {
    throw ConfigError("N-function key '" + std::string(key) + "' needs parameter " + name);
  }
  return it->second;
}

}  // namespace

NFunction make_nfunction(std::string_view key) {
  const std::size_t colon = key.find(':');
  const std::string family(key.substr(0, colon));
  const auto params = parse_params(
      colon == std::string_view::npos ? std::string_view{} : key.substr(colon + 1), key);
  if (family == "power") {
    return power_nfunction(require_param(params, "p", key));
  }
  if (family == "spower") {
    return scaled_power_nfunction(require_param(params, "p", key));
  }
  if (family == "powerlog") {
    return power_log_nfunction(require_param(params, "p", key));
  }
  if (family == "expm") {
    return exp_minus_nfunction();
  }
  throw ConfigError("unknown N-function family '" + family + "'");
}

std::vector<std::string> builtin_nfunction_keys() {
  return {"power:p=1.5", "power:p=2", "power:p=3", "powerlog:p=2", "expm:"};
}

std::vector<std::string> audit_nfunction(const NFunction& nf) {
  std::vector<std::string> problems;
  if (nf.phi(0.0) != 0.0) {
    problems.push_back("phi(0) != 0");
  }
  // log grid on [1e-4, 1e3]
  std::vector<double> us;
  for (int i = 0; i <= 140; ++i) {
    us.push_back(std::pow(10.0, -4.0 + 7.0 * i / 140.0));
  }
  for (std::size_t i = 1; i < us.size(); ++i) {
    if (nf.phi(us[i]) < nf.phi(us[i - 1])) {
      problems.push_back("phi decreases near u=" + std::to_string(us[i]));
      break;
    }
  }
  // Convexity via second divided differences on the (non-uniform) log grid.
  for (std::size_t i = 1; i + 1 < us.size(); ++i) {
    const double a = us[i - 1], b = us[i], c = us[i + 1];
    const double s1 = (nf.phi(b) - nf.phi(a)) / (b - a);
    const double s2 = (nf.phi(c) - nf.phi(b)) / (c - b);
    if (s2 - s1 < -1e-12 * std::max(1.0, std::abs(s2))) {
      problems.push_back("convexity fails near u=" + std::to_string(b));
      break;
    }
  }
  if (!(nf.phi(1e-6) / 1e-6 < 1e-2)) {
    problems.push_back("phi(u)/u does not vanish at 0+");
  }
  if (!(nf.phi(1e6) / 1e6 > 1e2)) {
    problems.push_back("phi(u)/u does not blow up at infinity");
  }
  for (double u : us) {
    if (u > 50.0) {
      break;
    }
    const double h = 0.1 * u;
    const double lhs = std::abs(nf.phi(u + h) - nf.phi(u) - nf.phi_prime(u) * h);
    const double rhs = nf.phi_prime(u + h) * h;
    if (lhs > rhs * (1.0 + 1e-12) + 1e-300) {
      problems.push_back("phi_prime inconsistent with phi near u=" + std::to_string(u));
      break;
    }
    if (nf.phi_prime(u + h) < nf.phi_prime(u)) {
      problems.push_back("phi_prime decreases near u=" + std::to_string(u));
      break;
    }
  }
  return problems;
}

}  // namespace simplexop
