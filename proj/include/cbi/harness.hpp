#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cbi/estimate.hpp"
#include "cbi/params.hpp"
#include "cbi/simulate.hpp"

namespace cbi {

struct ExperimentConfig {
  CbiParams params;
  std::vector<std::size_t> n_values;
  std::size_t replicates = 1000;
  int grid_points = 2000;
  std::uint64_t seed = 0;
  Regime regime = Regime::GeneralCritical;
  std::string output_path;
  int substeps_per_unit = 64;
  unsigned workers = 1;

  void validate() const;
};

ExperimentConfig experiment_config_from_json(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);
std::string experiment_config_to_json(const ExperimentConfig& cfg, int indent = -1);

// One replicate's raw outcome, kept for the flat CSV.
struct RawError {
  std::size_t n = 0;
  std::size_t rep = 0;
  std::optional<double> e1;
  std::optional<double> e2;
  bool hn = false;
};

struct PerNStats {
  std::size_t n = 0;
  double hn_fraction = 0.0;
  std::size_t used = 0;
  std::size_t discard_estimate = 0;   // Hn false or rho_hat <= 0
  std::size_t discard_nonfinite = 0;  // replicate aborted by a numeric failure
  double mean[2] = {0.0, 0.0};
  Matrix2 cov = {{{0.0, 0.0}, {0.0, 0.0}}};
  double ks[2] = {0.0, 0.0};
};

struct DistReport {
  ExperimentConfig config;
  std::vector<PerNStats> per_n;
  std::vector<RawError> raw;
  std::string reference_kind;  // "simulated-limit" or "gaussian"
  std::size_t reference_size = 0;
  std::size_t reference_discards = 0;
  bool reference_flagged = false;  // limit-sampler discard rate above 0.1%

  std::string to_json(int indent = 2) const;
  std::string raw_csv() const;
};

// Simulate, estimate, scale errors, and compare each marginal against the
// regime's reference law. Writes nothing; the caller persists the report.
DistReport run_convergence(const ExperimentConfig& cfg);

// Writes report JSON to cfg.output_path and the raw CSV next to it
// (output_path + ".errors.csv"), via temp-file rename.
void write_report(const DistReport& report, const std::string& output_path);

struct DetLimitPerN {
  std::size_t n = 0;
  double median_dev_first = 0.0;   // |n^-2 sum X_{k-1} - betat/2|
  double median_dev_second = 0.0;  // |n^-3 sum X_{k-1}^2 - betat^2/3|
};

struct DetLimitReport {
  double beta_tilde = 0.0;
  std::vector<DetLimitPerN> per_n;
};

// Requires C = 0.
DetLimitReport check_deterministic_limits(const ExperimentConfig& cfg);

struct ScalingPerN {
  std::size_t n = 0;
  double ks = 0.0;           // two-sample KS of X_n/n vs Y_1 (C > 0)
  double max_abs_dev = 0.0;  // max |X_n/n - betat| (C = 0)
  double mean_scaled = 0.0;
};

struct ScalingReport {
  bool degenerate = false;  // C = 0 branch
  double beta_tilde = 0.0;
  std::vector<ScalingPerN> per_n;
};

// Requires critical params.
ScalingReport check_scaling_limit(const ExperimentConfig& cfg);

struct IidPerN {
  std::size_t n = 0;
  double lag1_autocorr = 0.0;
  double band = 0.0;  // 3/sqrt(total residual count)
  double half_ks = 0.0;
  double mean_residual = 0.0;
  double var_residual = 0.0;
};

struct IidReport {
  double v0 = 0.0;
  std::vector<IidPerN> per_n;
};

// Requires C = 0; residuals are computed with the true parameters.
IidReport check_iid_residuals(const ExperimentConfig& cfg);

}  // namespace cbi
