#pragma once

#include <string>

#include "simplexop/domain.hpp"

namespace simplexop {

enum class OperatorKind { mkz, stancu };

/// Truncation of the infinite MKZ double series.
///
/// Summation runs in increasing total degree until the accumulated weight
/// reaches 1 - tail_eps. The degree cap is max_degree, raised to
/// ceil(50 n / (1 - x1 - x2)) when scale_with_seam is set.
struct TruncationPolicy {
  double tail_eps = 1e-10;
  long max_degree = 1000;
  bool scale_with_seam = true;
};

struct OperatorSpec {
  OperatorKind kind = OperatorKind::mkz;
  int n = 1;
  int s = 0;
  TruncationPolicy truncation;
  int cell_order = 5;

  void validate() const;
};

struct ApplyResult {
  double value = 0.0;
  double weight_mass = 0.0;
  long terms_used = 0;
  bool truncated = false;
};

enum class MomentAxis { x1, x2 };
enum class MomentOrder { first, second, abs_mixed };

// Meyer-Koenig-Zeller-Kantorovich operator.

/// (n+k1+k2)! / (n! k1! k2!) x1^k1 x2^k2 (1-x1-x2)^(n+1), evaluated in log space.
double mkz_weight(int n, long k1, long k2, Point x);

/// (n+m)^2 (n+m+1)^2 / ((n+k1)(n+k2)), m = k1 + k2.
double mkz_coefficient(int n, long k1, long k2);

/// Requires x strictly below the anti-diagonal (x1 + x2 < 1 - 1e-9).
ApplyResult mkz_apply(const ScalarField& f, const OperatorSpec& spec, Point x);

// Stancu-Kantorovich operator.

/// n! / (k! l! (n-k-l)!) x1^k x2^l (1-x1-x2)^(n-k-l). Throws DomainError when
/// k, l < 0 or k + l > n.
double bernstein_basis(int n, long k, long l, Point x);

/// The shifted weight b_{n,k,l,s}: the seven-branch table over
/// (k+l <= n-s or not) x (k >= s) x (l >= s).
double stancu_weight(int n, long k, long l, int s, Point x);

ApplyResult stancu_apply(const ScalarField& f, const OperatorSpec& spec, Point x);

ApplyResult apply(const ScalarField& f, const OperatorSpec& spec, Point x);

/// K((u_a - x_a)^m; x) for m = 1, 2, or K(|u1 - x1| |u2 - x2|; x) for abs_mixed
/// (axis is ignored there).
double moment(const OperatorSpec& spec, Point x, MomentAxis axis, MomentOrder order);

const char* to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& text);

}  // namespace simplexop
