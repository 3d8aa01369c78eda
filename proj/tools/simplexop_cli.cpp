// Command-line front end: verify-lemmas, converge, norm, modulus, apply.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "simplexop/error.hpp"
#include "simplexop/harness.hpp"

using namespace simplexop;

namespace {

struct CommonFlags {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
};

// Registers the shared flags; every flag maps onto one config key.
void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "flat key = value config file");
  struct FlagKey {
    const char* flag;
    const char* key;
    const char* help;
  };
  static const FlagKey kFlags[] = {
      {"--out", "out", "output path (CSV for converge)"},
      {"--operator", "operator", "mkz | stancu"},
      {"--n", "n", "degree list, e.g. \"8 16 32\""},
      {"--s", "s", "Stancu shift list"},
      {"--phi", "phi", "N-function keys, e.g. \"power:p=2 powerlog:p=2\""},
      {"--field", "field", "constant | affine | quadratic | lipschitz | oscillatory"},
      {"--quad-order", "quad.order", "Gauss points per axis"},
      {"--quad-levels", "quad.levels", "refinement levels"},
      {"--sample-level", "quad.sample_level", "composite level of sampled rules"},
      {"--error-level", "error_level", "composite level for operator error sampling"},
      {"--tail-eps", "tail_eps", "MKZ tail mass tolerance"},
      {"--max-degree", "max_degree", "MKZ degree cap floor"},
      {"--degree-scaling", "degree_scaling", "raise the MKZ cap near the seam (true/false)"},
      {"--directions", "directions", "modulus directions"},
      {"--t-samples", "t_samples", "modulus step samples"},
      {"--r", "r", "radius list for modulus"},
      {"--r-rule", "r_rule", "sqrt_inv_n | inv_n | const:<r>"},
      {"--x", "x", "evaluation point \"x1 x2\" for apply"},
      {"--timing", "timing", "record wall time (true/false)"},
  };
  for (const auto& fk : kFlags) {
    const std::string key = fk.key;
    cmd->add_option_function<std::string>(
        fk.flag, [&flags, key](const std::string& v) { flags.overrides.emplace_back(key, v); },
        fk.help);
  }
}

ExperimentConfig build_config(const CommonFlags& flags, ExperimentConfig base = {}) {
  ExperimentConfig cfg = flags.config_path.empty() ? base : load_config(flags.config_path, base);
  for (const auto& [key, value] : flags.overrides) {
    apply_config_entry(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

void emit(const ExperimentConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write '" + cfg.output_path + "'");
  }
  out << text << '\n';
}

int cmd_verify(const CommonFlags& flags) {
  const ExperimentConfig cfg = build_config(flags);
  const LemmaReport report = run_verify_lemmas(cfg);
  for (const auto& row : report.rows) {
    std::printf("%-32s %s  measured=%.6g  threshold=%.6g  %s\n", row.name.c_str(),
                row.passed ? "PASS" : "FAIL", row.measured, row.threshold, row.detail.c_str());
  }
  return report.all_passed() ? 0 : 1;
}

int cmd_converge(const CommonFlags& flags) {
  const ExperimentConfig cfg = build_config(flags);
  const ConvergenceReport report = run_convergence(cfg);
  for (const auto& w : report.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  for (const auto& f : report.flagged) {
    std::cerr << "flagged: " << f << '\n';
  }
  if (cfg.output_path.empty()) {
    std::cout << records_to_csv(report.records);
  }
  nlohmann::ordered_json fits = nlohmann::ordered_json::array();
  for (const auto& g : report.fits) {
    nlohmann::ordered_json row;
    row["phi"] = g.phi;
    row["s"] = g.s;
    row["fit_available"] = g.fit.available;
    if (g.fit.available) {
      row["slope"] = g.fit.slope;
      row["intercept"] = g.fit.intercept;
      row["max_residual"] = g.fit.max_residual;
    } else {
      row["note"] = g.note;
    }
    fits.push_back(row);
  }
  std::cerr << fits.dump(2) << '\n';
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kantorovich-type operators on the simplex in Orlicz norms"};
  app.require_subcommand(1);

  CommonFlags verify_flags, converge_flags, norm_flags, modulus_flags, apply_flags;
  auto* verify = app.add_subcommand("verify-lemmas", "operator identities, norm bounds, moments");
  auto* converge = app.add_subcommand("converge", "convergence-rate experiment, CSV output");
  auto* norm = app.add_subcommand("norm", "Orlicz norm of a built-in field (JSON)");
  auto* modulus = app.add_subcommand("modulus", "second-order modulus of smoothness (JSON)");
  auto* apply_cmd = app.add_subcommand("apply", "evaluate an operator at one point (JSON)");
  add_common_flags(verify, verify_flags);
  add_common_flags(converge, converge_flags);
  add_common_flags(norm, norm_flags);
  add_common_flags(modulus, modulus_flags);
  add_common_flags(apply_cmd, apply_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version come through here with code 0
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      return cmd_verify(verify_flags);
    }
    if (*converge) {
      return cmd_converge(converge_flags);
    }
    if (*norm) {
      const auto cfg = build_config(norm_flags);
      emit(cfg, run_norm(cfg));
      return 0;
    }
    if (*modulus) {
      const auto cfg = build_config(modulus_flags);
      emit(cfg, run_modulus(cfg));
      return 0;
    }
    if (*apply_cmd) {
      const auto cfg = build_config(apply_flags);
      emit(cfg, run_apply(cfg));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
