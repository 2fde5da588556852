#pragma once

// Run configuration: INI file, then HMF_* environment variables, then
// command-line flags, each layer overriding the previous one.

#include <optional>
#include <string>
#include <vector>

#include "hmflab/model.hpp"

namespace hmf {

struct RunConfig {
  // [model]
  int n_sites = 7;
  int n_sites_a = 6;
  double J = 1.0;
  double Delta = 0.95;
  double hx = 0.2;
  double hz = 0.2;
  FieldMode field_mode = FieldMode::uniform;
  std::uint64_t seed = 42;
  double j_ab = 1.0;

  // [numerics]
  int precision = 106;
  int threads = 1;
  double gap_tol = 1e-10;
  std::optional<double> eps;  // unset means "auto"

  // [scan]
  std::vector<double> betas{0.01, 0.1, 1.0};
  std::vector<std::string> families{"X1", "X1 X2", "X1 X2 Z3"};
  int k_max = 6;
  int conjecture_k_max = 4;  // tuple search cost grows combinatorially in k
  int max_body = 2;
  std::vector<double> j_ab_list{0.01, 0.1, 0.3, 1.0};
  double coupling_beta = 0.1672;
  double window_lo = 1e-3;
  double window_hi = 1e-2;

  // [fit]
  std::vector<std::string> fit_inputs;

  // [output]
  std::string out_dir = "out";
  std::string command;

  [[nodiscard]] ModelSpec model() const;
  [[nodiscard]] Bipartition split() const;
  /// families = all selects every operator in A with at most max_body factors.
  [[nodiscard]] bool all_operators() const { return families.size() == 1 && families[0] == "all"; }
  [[nodiscard]] std::vector<PauliString> family_patterns() const;

  /// Every field as "section.key = value", in a fixed order.
  [[nodiscard]] std::vector<std::string> echo() const;
  void validate() const;
};

/// Parses an INI document; unknown keys are a UsageError naming the key.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Sets one field by "section.key"; used for env and flag overrides.
void set_field(RunConfig& cfg, const std::string& path, const std::string& value);

/// "1e-3, 2e-3" or "logspace(1e-3, 1e-2, 5)".
std::vector<double> parse_real_list(const std::string& path, const std::string& text);

inline constexpr const char* kCodeVersion = "hmflab 1.0.0";

}  // namespace hmf
