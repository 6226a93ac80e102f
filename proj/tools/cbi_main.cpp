#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbi/errors.hpp"
#include "cbi/estimate.hpp"
#include "cbi/harness.hpp"
#include "cbi/io.hpp"
#include "cbi/moments.hpp"
#include "cbi/params.hpp"
#include "cbi/rng.hpp"
#include "cbi/simulate.hpp"
#include "cbi/skeleton.hpp"

namespace {

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
}

struct SimulateArgs {
  std::string params_path;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  int substeps = 64;
  std::string scheme = "auto";
};

int run_simulate(const SimulateArgs& a) {
  const cbi::CbiParams params = cbi::load_params_file(a.params_path);
  cbi::SimConfig cfg;
  cfg.substeps_per_unit = a.substeps;
  cfg.scheme = cbi::scheme_from_string(a.scheme);
  const std::uint64_t seed = a.seed_given ? a.seed : fresh_seed();
  const cbi::Skeleton skel = cbi::simulate_skeleton(params, a.n, cfg, seed);
  cbi::write_skeleton_csv(skel, a.out);
  const cbi::Scheme resolved = cbi::resolve_scheme(params, cbi::derive(params), cfg);
  nlohmann::json meta{{"command", "simulate"},
                      {"n", a.n},
                      {"seed", seed},
                      {"scheme", cbi::scheme_to_string(resolved)},
                      {"out", a.out}};
  std::cout << meta.dump(2) << '\n';
  return 0;
}

struct EstimateArgs {
  std::string in;
  std::string params_path;
};

int run_estimate(const EstimateArgs& a) {
  if (!a.params_path.empty()) cbi::load_params_file(a.params_path);  // validate only
  const cbi::Skeleton skel = cbi::read_skeleton_csv(a.in);
  std::cout << cbi::estimate_to_json(cbi::cls_rho_betabar(skel), 2) << '\n';
  return 0;
}

struct LimitArgs {
  std::string params_path;
  std::size_t reps = 0;
  int grid = 2000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
};

int run_limit(const LimitArgs& a) {
  const cbi::CbiParams params = cbi::load_params_file(a.params_path);
  const cbi::DerivedParams d = cbi::derive(params);
  const std::uint64_t seed = a.seed_given ? a.seed : fresh_seed();
  std::ostringstream csv;
  csv << "rep,e1,e2\n";
  std::size_t discards = 0;
  for (std::size_t r = 0; r < a.reps; ++r) {
    const cbi::LimitFunctionals f = cbi::sample_limit_functionals(
        d.beta_tilde, d.C, a.grid, cbi::substream_seed(seed, r));
    try {
      const auto vec = cbi::limit_vector(f);
      csv << r << ',' << cbi::format_double(vec[0]) << ',' << cbi::format_double(vec[1]) << '\n';
    } catch (const cbi::DegenerateDenominatorError&) {
      csv << r << ",,\n";
      ++discards;
    }
  }
  cbi::write_text_file_atomic(a.out, csv.str());
  nlohmann::json meta{{"command", "limit"}, {"reps", a.reps},     {"grid", a.grid},
                      {"seed", seed},       {"discards", discards}, {"out", a.out}};
  std::cout << meta.dump(2) << '\n';
  return 0;
}

struct ExperimentArgs {
  std::string config_path;
  std::string out_override;
  unsigned workers = 0;
  bool workers_given = false;
};

int run_experiment(const ExperimentArgs& a) {
  cbi::ExperimentConfig cfg = cbi::load_experiment_config(a.config_path);
  if (a.workers_given) cfg.workers = a.workers;
  const std::string out = a.out_override.empty() ? cfg.output_path : a.out_override;
  const cbi::DistReport report = cbi::run_convergence(cfg);
  cbi::write_report(report, out);
  nlohmann::json meta{{"command", "experiment"},
                      {"output_path", out},
                      {"errors_csv", out + ".errors.csv"}};
  std::cout << meta.dump(2) << '\n';
  return 0;
}

struct MomentsArgs {
  std::string params_path;
  double t = 1.0;
  int q = 2;
  double step = 1.0 / 512.0;
  double x0 = 0.0;
  std::size_t growth_n_max = 0;
};

int run_moments(const MomentsArgs& a) {
  const cbi::CbiParams params = cbi::load_params_file(a.params_path);
  if (a.growth_n_max > 0) {
    const cbi::GrowthReport rep = cbi::growth_bounds_check(params, a.q, a.growth_n_max, a.step);
    nlohmann::json j{{"q", rep.q},
                     {"p", rep.p},
                     {"x_ratio", rep.x_ratio},
                     {"m_ratio", rep.m_ratio},
                     {"max_x_ratio", rep.max_x_ratio},
                     {"max_m_ratio", rep.max_m_ratio},
                     {"violation", rep.violation}};
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  const cbi::CenteredMoments m = cbi::centered_moments_from(params, a.x0, a.t, a.q, a.step);
  nlohmann::json j{{"t", m.t}, {"values", m.values}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and inference toolkit for critical branching processes with immigration"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "Simulate a unit-spaced path and write it as CSV");
  c_sim->add_option("--params", sim.params_path, "Parameter JSON file")->required();
  c_sim->add_option("--n", sim.n, "Number of unit-time observations")->required()
      ->check(CLI::PositiveNumber);
  CLI::Option* sim_seed = c_sim->add_option("--seed", sim.seed, "RNG seed (random if omitted)");
  c_sim->add_option("--out", sim.out, "Output CSV path")->required();
  c_sim->add_option("--substeps", sim.substeps, "Euler substeps per unit time")
      ->check(CLI::PositiveNumber);
  c_sim->add_option("--scheme", sim.scheme,
                    "auto | exact-pure-immigration | exact-cir | euler-jump");

  EstimateArgs est;
  CLI::App* c_est = app.add_subcommand("estimate", "Least-squares estimates from a path CSV");
  c_est->add_option("--in", est.in, "Skeleton CSV path")->required();
  c_est->add_option("--params", est.params_path, "Parameter JSON file (validated, not used)");

  LimitArgs lim;
  CLI::App* c_lim = app.add_subcommand("limit", "Sample the limit law of the scaled errors");
  c_lim->add_option("--params", lim.params_path, "Parameter JSON file")->required();
  c_lim->add_option("--reps", lim.reps, "Number of samples")->required()
      ->check(CLI::PositiveNumber);
  c_lim->add_option("--grid", lim.grid, "Subintervals of [0,1] for the diffusion grid")
      ->check(CLI::PositiveNumber);
  CLI::Option* lim_seed = c_lim->add_option("--seed", lim.seed, "RNG seed (random if omitted)");
  c_lim->add_option("--out", lim.out, "Output CSV path")->required();

  ExperimentArgs exp;
  CLI::App* c_exp = app.add_subcommand("experiment", "Run a Monte Carlo convergence experiment");
  c_exp->add_option("--config", exp.config_path, "Experiment config JSON file")->required();
  c_exp->add_option("--out", exp.out_override, "Override the config's output path");
  CLI::Option* exp_workers = c_exp->add_option("--workers", exp.workers, "Worker thread count")
                                 ->check(CLI::PositiveNumber);

  MomentsArgs mom;
  CLI::App* c_mom = app.add_subcommand("moments", "Centered moments or growth-bound diagnostics");
  c_mom->add_option("--params", mom.params_path, "Parameter JSON file")->required();
  c_mom->add_option("--t", mom.t, "Time horizon");
  c_mom->add_option("--q", mom.q, "Highest moment order (1..8)")->required();
  c_mom->add_option("--step", mom.step, "Quadrature step")->check(CLI::PositiveNumber);
  c_mom->add_option("--x0", mom.x0, "Deterministic initial state");
  c_mom->add_option("--growth-n-max", mom.growth_n_max,
                    "If set, run the growth-bound check up to this horizon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  sim.seed_given = sim_seed->count() > 0;
  lim.seed_given = lim_seed->count() > 0;
  exp.workers_given = exp_workers->count() > 0;

  try {
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_est->parsed()) return run_estimate(est);
    if (c_lim->parsed()) return run_limit(lim);
    if (c_exp->parsed()) return run_experiment(exp);
    if (c_mom->parsed()) return run_moments(mom);
  } catch (const cbi::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const cbi::InvalidConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const cbi::Error& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
