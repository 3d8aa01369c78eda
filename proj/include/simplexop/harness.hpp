#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simplexop/domain.hpp"
#include "simplexop/nfunctions.hpp"
#include "simplexop/operators.hpp"
#include "simplexop/orlicz.hpp"

namespace simplexop {

// Built-in test fields: constant, affine, quadratic, lipschitz, oscillatory.
ScalarField builtin_field(std::string_view key);
std::vector<std::string> builtin_field_keys();

/// The 10-point interior evaluation grid ((2i+1)/10, (2j+1)/10), i + j <= 3.
std::vector<Point> interior_grid();

/// n -> r pairing used for the modulus term of the rate bound.
struct RadiusRule {
  enum class Kind { sqrt_inv_n, inv_n, constant };
  Kind kind = Kind::sqrt_inv_n;
  double value = 0.0;

  double operator()(int n) const;
  static RadiusRule parse(std::string_view text);
  std::string to_string() const;
};

struct ExperimentConfig {
  OperatorKind kind = OperatorKind::mkz;
  TruncationPolicy truncation;
  int cell_order = 5;
  std::vector<std::string> phi_keys{"power:p=2"};
  std::string field_key = "quadratic";
  std::vector<int> n_list{8, 16, 32, 64, 128};
  std::vector<int> s_list{0};
  RadiusRule r_rule;
  std::vector<double> r_list{0.05, 0.1, 0.2};  // radii for the `modulus` command
  QuadratureSpec quadrature;
  int error_sample_level = 1;  // composite level of the rule sampling K f - f
  int n_directions = 32;
  int t_samples = 16;
  std::string output_path;
  std::uint64_t seed = 20240601;
  bool record_timing = true;
  Point point{0.3, 0.3};  // evaluation point for the `apply` command

  // verify-lemmas
  std::vector<int> lemma_bound_n{8, 32};
  std::vector<int> lemma_constant_n{4, 16, 64};
  std::vector<int> lemma_moment_n{16, 32, 64, 128, 256};
  std::vector<int> lemma_stancu_s{0, 3};
  std::vector<std::string> lemma_phi_keys{"power:p=1.5", "power:p=2", "power:p=3", "powerlog:p=2"};

  void validate() const;
  OperatorSpec operator_spec(int n, int s) const;
};

/// Sets one `key = value` entry; throws ConfigError for unknown keys or bad values.
void apply_config_entry(ExperimentConfig& cfg, std::string_view key, std::string_view value);
/// Flat key-value text: one `key = value` per line, `#` starts a comment.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

struct ConvergenceRecord {
  std::string kind;
  int n = 0;
  int s = 0;
  std::string phi;
  std::string field;
  double error_norm = 0.0;
  double f_norm = 0.0;
  double modulus = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  double wall_time_ms = 0.0;

  friend bool operator==(const ConvergenceRecord&, const ConvergenceRecord&) = default;
};

std::string csv_header();
std::string serialize_record(const ConvergenceRecord& rec);
ConvergenceRecord parse_record(std::string_view line);
std::string records_to_csv(const std::vector<ConvergenceRecord>& records);
std::vector<ConvergenceRecord> records_from_csv(std::string_view text);

struct RateFit {
  bool available = false;
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  int pairs_used = 0;
};

/// Least squares of log(error) on log(n); nonpositive errors are dropped and
/// fewer than three remaining pairs give an unavailable fit.
RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs);

/// K f at the nodes of `rule`.
SampledField operator_samples(const ScalarField& f, const OperatorSpec& spec,
                              const SimplexRule& rule);
/// K f - f at the nodes of `rule`.
SampledField operator_error_samples(const ScalarField& f, const OperatorSpec& spec,
                                    const SimplexRule& rule);

struct RateGroup {
  std::string phi;
  int s = 0;
  RateFit fit;
  bool fit_skipped = false;
  std::string note;
};

struct ConvergenceReport {
  std::vector<ConvergenceRecord> records;
  std::vector<RateGroup> fits;
  std::vector<std::string> warnings;
  std::vector<std::string> flagged;  // records aborted by operator errors

  bool ok() const { return flagged.empty(); }
};

ConvergenceReport run_convergence(const ExperimentConfig& cfg);

struct CheckRow {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct LemmaReport {
  std::vector<CheckRow> rows;

  bool all_passed() const;
};

/// Partition of unity, cell identities, constant reproduction, the operator
/// norm bounds 2 (MKZ) and 12 (Stancu), and second-moment decay.
LemmaReport run_verify_lemmas(const ExperimentConfig& cfg);

}  // namespace simplexop

namespace simplexop {

/// One JSON object with a NormResult per configured N-function.
std::string run_norm(const ExperimentConfig& cfg);
/// One JSON object with a ModulusResult per (N-function, r) pair.
std::string run_modulus(const ExperimentConfig& cfg);
/// One JSON object with the ApplyResult for each n (and s) at cfg.point.
std::string run_apply(const ExperimentConfig& cfg);

}  // namespace simplexop
