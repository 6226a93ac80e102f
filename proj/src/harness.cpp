#include "cbi/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "cbi/errors.hpp"
#include "cbi/io.hpp"
#include "cbi/parallel.hpp"
#include "cbi/rng.hpp"
#include "cbi/stats.hpp"

namespace cbi {

namespace {

// Substream tag separating reference-law draws from skeleton draws.
constexpr std::uint64_t kReferenceTag = 0x7265666572656e63ULL;

// The echo omits `workers`: it is an execution knob, and reports must be
// byte-identical across worker counts.
nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json params = nlohmann::json::parse(params_to_json(cfg.params));
  return nlohmann::json{{"params", params},
                        {"n_values", cfg.n_values},
                        {"replicates", cfg.replicates},
                        {"grid_points", cfg.grid_points},
                        {"seed", cfg.seed},
                        {"regime", cfg.regime == Regime::GeneralCritical ? "general-critical"
                                                                         : "pure-immigration"},
                        {"output_path", cfg.output_path},
                        {"substeps_per_unit", cfg.substeps_per_unit}};
}

}  // namespace

void ExperimentConfig::validate() const {
  params.validate();
  if (n_values.empty()) throw ConfigError("n_values must be non-empty");
  for (std::size_t n : n_values) {
    if (n < 2) throw ConfigError("every n must be >= 2");
  }
  if (replicates < 100) throw ConfigError("replicates must be >= 100 for distributional tests");
  if (grid_points < 2) throw ConfigError("grid_points must be >= 2");
  if (substeps_per_unit < 1) throw ConfigError("substeps_per_unit must be >= 1");
  if (regime == Regime::PureImmigration && derive(params).C != 0.0) {
    throw ConfigError("pure-immigration regime requires C = 0");
  }
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid experiment config JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.params = params_from_json(j.at("params").dump());
    cfg.n_values = j.at("n_values").get<std::vector<std::size_t>>();
    cfg.replicates = j.at("replicates").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.regime = regime_from_string(j.at("regime").get<std::string>());
    cfg.grid_points = j.value("grid_points", 2000);
    cfg.output_path = j.value("output_path", std::string());
    cfg.substeps_per_unit = j.value("substeps_per_unit", 64);
    cfg.workers = j.value("workers", 1u);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid experiment config JSON: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return experiment_config_from_json(read_text_file(path));
}

std::string experiment_config_to_json(const ExperimentConfig& cfg, int indent) {
  return config_json(cfg).dump(indent);
}

namespace {

struct ReplicateOutcome {
  std::optional<std::array<double, 2>> errors;
  bool hn = false;
  bool nonfinite = false;
};

std::vector<ReplicateOutcome> run_replicates(const ExperimentConfig& cfg,
                                             const DerivedParams& derived, std::size_t n) {
  std::vector<ReplicateOutcome> out(cfg.replicates);
  SimConfig sim;
  sim.substeps_per_unit = cfg.substeps_per_unit;
  parallel_for(cfg.replicates, cfg.workers, [&](std::size_t r) {
    ReplicateOutcome& slot = out[r];
    try {
      const Skeleton skel =
          simulate_skeleton(cfg.params, n, sim, substream_seed(cfg.seed, n, r));
      const ClsEstimate est = cls_rho_betabar(skel);
      slot.hn = est.hn_holds;
      if (est.b_tilde_hat && est.beta_tilde_hat) {
        slot.errors = scaled_errors(est, derived, n, cfg.regime);
      }
    } catch (const NonFiniteError&) {
      slot.nonfinite = true;
    }
  });
  return out;
}

// Reference sample of the joint limit law; degenerate-denominator replicates
// are dropped and counted.
void sample_reference(const ExperimentConfig& cfg, const DerivedParams& derived,
                      std::vector<double>* ref1, std::vector<double>* ref2,
                      std::size_t* discards) {
  const std::size_t target = cfg.replicates * 10;
  std::vector<std::optional<std::array<double, 2>>> slots(target);
  parallel_for(target, cfg.workers, [&](std::size_t i) {
    try {
      const LimitFunctionals f = sample_limit_functionals(
          derived.beta_tilde, derived.C, cfg.grid_points,
          substream_seed(cfg.seed, kReferenceTag, i));
      slots[i] = limit_vector(f);
    } catch (const DegenerateDenominatorError&) {
      // dropped below
    }
  });
  ref1->reserve(target);
  ref2->reserve(target);
  *discards = 0;
  for (const auto& s : slots) {
    if (s) {
      ref1->push_back((*s)[0]);
      ref2->push_back((*s)[1]);
    } else {
      ++*discards;
    }
  }
}

}  // namespace

DistReport run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  const DerivedParams derived = derive(cfg.params);

  DistReport report;
  report.config = cfg;

  std::vector<double> ref1, ref2;
  double sigma1 = 0.0, sigma2 = 0.0;
  if (cfg.regime == Regime::GeneralCritical) {
    report.reference_kind = "simulated-limit";
    sample_reference(cfg, derived, &ref1, &ref2, &report.reference_discards);
    report.reference_size = ref1.size();
    const std::size_t attempts = cfg.replicates * 10;
    report.reference_flagged =
        cfg.grid_points >= 2000 &&
        static_cast<double>(report.reference_discards) > 0.001 * static_cast<double>(attempts);
  } else {
    report.reference_kind = "gaussian";
    const Matrix2 cov = gaussian_limit_covariance(derived);
    sigma1 = std::sqrt(cov[0][0]);
    sigma2 = std::sqrt(cov[1][1]);
  }

  for (std::size_t n : cfg.n_values) {
    const auto outcomes = run_replicates(cfg, derived, n);

    PerNStats stats;
    stats.n = n;
    std::vector<std::array<double, 2>> used;
    std::size_t hn_count = 0;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
      const auto& o = outcomes[r];
      RawError raw;
      raw.n = n;
      raw.rep = r;
      raw.hn = o.hn;
      if (o.nonfinite) {
        ++stats.discard_nonfinite;
      } else if (o.errors) {
        used.push_back(*o.errors);
        raw.e1 = (*o.errors)[0];
        raw.e2 = (*o.errors)[1];
      } else {
        ++stats.discard_estimate;
      }
      if (o.hn) ++hn_count;
      report.raw.push_back(raw);
    }
    stats.used = used.size();
    stats.hn_fraction =
        static_cast<double>(hn_count) / static_cast<double>(cfg.replicates);

    const MeanCov2 mc = mean_cov(used);
    stats.mean[0] = mc.mean[0];
    stats.mean[1] = mc.mean[1];
    stats.cov = mc.cov;

    std::vector<double> e1, e2;
    e1.reserve(used.size());
    e2.reserve(used.size());
    for (const auto& u : used) {
      e1.push_back(u[0]);
      e2.push_back(u[1]);
    }
    if (cfg.regime == Regime::GeneralCritical) {
      stats.ks[0] = ks_two_sample(e1, ref1);
      stats.ks[1] = ks_two_sample(e2, ref2);
    } else {
      stats.ks[0] = ks_one_sample(e1, [sigma1](double x) { return normal_cdf(x / sigma1); });
      stats.ks[1] = ks_one_sample(e2, [sigma2](double x) { return normal_cdf(x / sigma2); });
    }
    report.per_n.push_back(stats);
  }
  return report;
}

std::string DistReport::to_json(int indent) const {
  nlohmann::json per;
  per = nlohmann::json::array();
  for (const auto& s : per_n) {
    per.push_back({{"n", s.n},
                   {"hn_fraction", s.hn_fraction},
                   {"used", s.used},
                   {"discards", {{"estimate", s.discard_estimate}, {"nonfinite", s.discard_nonfinite}}},
                   {"mean", {s.mean[0], s.mean[1]}},
                   {"cov", {{s.cov[0][0], s.cov[0][1]}, {s.cov[1][0], s.cov[1][1]}}},
                   {"ks", {s.ks[0], s.ks[1]}}});
  }
  nlohmann::json j{{"config_echo", config_json(config)},
                   {"per_n", per},
                   {"reference",
                    {{"kind", reference_kind},
                     {"size", reference_size},
                     {"discards", reference_discards},
                     {"flagged", reference_flagged}}}};
  return j.dump(indent);
}

std::string DistReport::raw_csv() const {
  std::ostringstream out;
  out << "n,rep,e1,e2,hn\n";
  for (const auto& r : raw) {
    out << r.n << ',' << r.rep << ',';
    if (r.e1) out << format_double(*r.e1);
    out << ',';
    if (r.e2) out << format_double(*r.e2);
    out << ',' << (r.hn ? 1 : 0) << '\n';
  }
  return out.str();
}

void write_report(const DistReport& report, const std::string& output_path) {
  if (output_path.empty()) throw ConfigError("output path must be non-empty");
  write_text_file_atomic(output_path, report.to_json(2) + "\n");
  write_text_file_atomic(output_path + ".errors.csv", report.raw_csv());
}

DetLimitReport check_deterministic_limits(const ExperimentConfig& cfg) {
  cfg.validate();
  const DerivedParams derived = derive(cfg.params);
  if (derived.C != 0.0) {
    throw RequiresPureImmigrationError("deterministic limits need C = 0");
  }
  if (derived.b_tilde != 0.0) {
    throw InvalidConfigError("deterministic limits need critical params");
  }

  DetLimitReport report;
  report.beta_tilde = derived.beta_tilde;
  SimConfig sim;
  sim.substeps_per_unit = cfg.substeps_per_unit;
  const double target1 = derived.beta_tilde / 2.0;
  const double target2 = derived.beta_tilde * derived.beta_tilde / 3.0;
  for (std::size_t n : cfg.n_values) {
    std::vector<double> dev1(cfg.replicates), dev2(cfg.replicates);
    const double nd = static_cast<double>(n);
    parallel_for(cfg.replicates, cfg.workers, [&](std::size_t r) {
      const Skeleton skel =
          simulate_skeleton(cfg.params, n, sim, substream_seed(cfg.seed, n, r));
      KahanSum s1, s2;
      for (std::size_t k = 1; k <= n; ++k) {
        const double x = skel.observations[k - 1];
        s1.add(x);
        s2.add(x * x);
      }
      dev1[r] = std::fabs(s1.value() / (nd * nd) - target1);
      dev2[r] = std::fabs(s2.value() / (nd * nd * nd) - target2);
    });
    report.per_n.push_back({n, median(dev1), median(dev2)});
  }
  return report;
}

namespace {

// One draw of the limit diffusion at time 1: exact transition when no
// branching jumps are present, fine Euler of dY = betat dt + sqrt(C Y^+) dW
// otherwise.
double sample_y1(const CbiParams& params, const DerivedParams& d, int grid_points,
                 RngEngine& rng) {
  if (d.C == 0.0) return d.beta_tilde;
  if (params.mu.empty()) return exact_cir_step(0.0, d.beta_tilde, d.C, 1.0, rng);
  const double h = 1.0 / static_cast<double>(grid_points);
  const double sqrt_h = std::sqrt(h);
  double y = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    y += d.beta_tilde * h + std::sqrt(d.C * (y > 0.0 ? y : 0.0)) * sqrt_h * draw_normal(rng);
    if (y < 0.0) y = 0.0;
  }
  return y;
}

}  // namespace

ScalingReport check_scaling_limit(const ExperimentConfig& cfg) {
  cfg.validate();
  const DerivedParams derived = derive(cfg.params);
  if (derived.b_tilde != 0.0) {
    throw InvalidConfigError("scaling limit needs critical params");
  }

  ScalingReport report;
  report.degenerate = derived.C == 0.0;
  report.beta_tilde = derived.beta_tilde;
  SimConfig sim;
  sim.substeps_per_unit = cfg.substeps_per_unit;

  for (std::size_t n : cfg.n_values) {
    std::vector<double> scaled(cfg.replicates);
    parallel_for(cfg.replicates, cfg.workers, [&](std::size_t r) {
      const Skeleton skel =
          simulate_skeleton(cfg.params, n, sim, substream_seed(cfg.seed, n, r));
      scaled[r] = skel.observations.back() / static_cast<double>(n);
    });

    ScalingPerN row;
    row.n = n;
    row.mean_scaled = mean(scaled);
    if (report.degenerate) {
      for (double s : scaled) {
        row.max_abs_dev = std::max(row.max_abs_dev, std::fabs(s - derived.beta_tilde));
      }
    } else {
      std::vector<double> y1(cfg.replicates);
      parallel_for(cfg.replicates, cfg.workers, [&](std::size_t r) {
        RngEngine rng = make_rng(substream_seed(cfg.seed, kReferenceTag, n, r));
        y1[r] = sample_y1(cfg.params, derived, cfg.grid_points, rng);
      });
      row.ks = ks_two_sample(scaled, y1);
    }
    report.per_n.push_back(row);
  }
  return report;
}

IidReport check_iid_residuals(const ExperimentConfig& cfg) {
  cfg.validate();
  const DerivedParams derived = derive(cfg.params);
  if (derived.C != 0.0) {
    throw RequiresPureImmigrationError("iid residual check needs C = 0");
  }

  IidReport report;
  report.v0 = derived.V0;
  SimConfig sim;
  sim.substeps_per_unit = cfg.substeps_per_unit;

  for (std::size_t n : cfg.n_values) {
    std::vector<std::vector<double>> series(cfg.replicates);
    parallel_for(cfg.replicates, cfg.workers, [&](std::size_t r) {
      const Skeleton skel =
          simulate_skeleton(cfg.params, n, sim, substream_seed(cfg.seed, n, r));
      series[r] = residuals(skel, derived);
    });

    IidPerN row;
    row.n = n;
    std::vector<double> first_half, second_half, all;
    for (const auto& s : series) {
      for (std::size_t k = 0; k < s.size(); ++k) {
        all.push_back(s[k]);
        if (k < s.size() / 2) {
          first_half.push_back(s[k]);
        } else {
          second_half.push_back(s[k]);
        }
      }
    }
    row.lag1_autocorr = pooled_lag1_autocorrelation(series);
    row.band = 3.0 / std::sqrt(static_cast<double>(all.size()));
    row.half_ks = ks_two_sample(first_half, second_half);
    row.mean_residual = mean(all);
    row.var_residual = sample_variance(all);
    report.per_n.push_back(row);
  }
  return report;
}

}  // namespace cbi
