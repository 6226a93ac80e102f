#include "cbi/simulate.hpp"

#include <cmath>

#include "cbi/errors.hpp"
#include "cbi/stats.hpp"

namespace cbi {

Scheme scheme_from_string(const std::string& name) {
  if (name == "auto") return Scheme::Auto;
  if (name == "exact-pure-immigration") return Scheme::ExactPureImmigration;
  if (name == "exact-cir") return Scheme::ExactCir;
  if (name == "euler-jump") return Scheme::EulerJump;
  throw ConfigError("unknown scheme: " + name);
}

std::string scheme_to_string(Scheme s) {
  switch (s) {
    case Scheme::Auto: return "auto";
    case Scheme::ExactPureImmigration: return "exact-pure-immigration";
    case Scheme::ExactCir: return "exact-cir";
    case Scheme::EulerJump: return "euler-jump";
  }
  return "auto";
}

Scheme resolve_scheme(const CbiParams& params, const DerivedParams& derived,
                      const SimConfig& cfg) {
  if (cfg.substeps_per_unit < 1) throw InvalidConfigError("substeps_per_unit must be >= 1");
  const bool pure_immigration = params.c == 0.0 && params.mu.empty() && derived.b_tilde == 0.0;
  const bool cir_like = params.mu.empty() && params.nu.empty() && derived.b_tilde == 0.0;
  switch (cfg.scheme) {
    case Scheme::Auto:
      if (pure_immigration) return Scheme::ExactPureImmigration;
      if (cir_like && derived.C > 0.0) return Scheme::ExactCir;
      return Scheme::EulerJump;
    case Scheme::ExactPureImmigration:
      if (!pure_immigration) {
        throw InvalidConfigError(
            "exact-pure-immigration requires c = 0, empty branching jumps and b_tilde = 0");
      }
      return cfg.scheme;
    case Scheme::ExactCir:
      if (!cir_like || derived.C <= 0.0) {
        throw InvalidConfigError(
            "exact-cir requires empty jump measures, b_tilde = 0 and C > 0");
      }
      return cfg.scheme;
    case Scheme::EulerJump: return cfg.scheme;
  }
  throw InvalidConfigError("unreachable scheme value");
}

double exact_cir_step(double y, double beta_tilde, double C, double dt, RngEngine& rng) {
  if (!(C > 0.0)) throw DegenerateDiffusionError("exact CIR transition requires C > 0");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(y >= 0.0)) throw ConfigError("state must be nonnegative");
  const double dof = 4.0 * beta_tilde / C;
  const double noncentrality = 4.0 * y / (C * dt);
  const auto mix = draw_poisson(rng, 0.5 * noncentrality);
  const double shape = 0.5 * dof + static_cast<double>(mix);
  const double g = draw_gamma(rng, shape, 2.0);
  return 0.25 * C * dt * g;
}

namespace {

double compound_poisson_unit(const JumpMeasure& m, RngEngine& rng) {
  double total = 0.0;
  for (const auto& a : m.atoms()) {
    total += a.size * static_cast<double>(draw_poisson(rng, a.rate));
  }
  return total;
}

double euler_jump_unit(const CbiParams& params, const DerivedParams& derived, double x,
                       int substeps, RngEngine& rng) {
  const double h = 1.0 / static_cast<double>(substeps);
  const double sqrt_h = std::sqrt(h);
  const double mu1 = params.mu.moment(1.0);
  const double nu1 = params.nu.moment(1.0);
  for (int i = 0; i < substeps; ++i) {
    double next = x + (derived.beta_tilde + derived.b_tilde * x) * h;
    next -= (x * mu1 + nu1) * h;  // jump compensators; means re-enter via the draws below
    if (params.c > 0.0 && x > 0.0) {
      next += std::sqrt(2.0 * params.c * x) * sqrt_h * draw_normal(rng);
    }
    for (const auto& a : params.mu.atoms()) {
      next += a.size * static_cast<double>(draw_poisson(rng, x * a.rate * h));
    }
    for (const auto& a : params.nu.atoms()) {
      next += a.size * static_cast<double>(draw_poisson(rng, a.rate * h));
    }
    x = next > 0.0 ? next : 0.0;
  }
  return x;
}

}  // namespace

double advance_one_unit(const CbiParams& params, const DerivedParams& derived, double x,
                        Scheme scheme, int substeps_per_unit, RngEngine& rng) {
  switch (scheme) {
    case Scheme::ExactPureImmigration: return x + params.beta + compound_poisson_unit(params.nu, rng);
    case Scheme::ExactCir: return exact_cir_step(x, derived.beta_tilde, derived.C, 1.0, rng);
    case Scheme::EulerJump: return euler_jump_unit(params, derived, x, substeps_per_unit, rng);
    case Scheme::Auto: break;
  }
  throw InvalidConfigError("advance_one_unit needs a resolved scheme");
}

Skeleton simulate_skeleton(const CbiParams& params, std::size_t n, const SimConfig& cfg,
                           std::uint64_t seed) {
  if (n < 1) throw InvalidConfigError("n must be >= 1");
  const DerivedParams derived = derive(params);
  const Scheme scheme = resolve_scheme(params, derived, cfg);
  RngEngine rng = make_rng(seed);
  Skeleton skel;
  skel.seed = seed;
  skel.observations.reserve(n + 1);
  double x = 0.0;
  skel.observations.push_back(x);
  for (std::size_t k = 0; k < n; ++k) {
    x = advance_one_unit(params, derived, x, scheme, cfg.substeps_per_unit, rng);
    if (!std::isfinite(x)) throw NonFiniteError("simulated state became non-finite");
    skel.observations.push_back(x);
  }
  return skel;
}

LimitFunctionals sample_limit_functionals(double beta_tilde, double C, int grid_points,
                                          RngEngine& rng) {
  if (grid_points < 2) throw ConfigError("grid_points must be >= 2");
  if (!(beta_tilde >= 0.0) || !(C >= 0.0)) {
    throw ConfigError("beta_tilde and C must be nonnegative");
  }
  const int N = grid_points;
  const double h = 1.0 / static_cast<double>(N);
  LimitFunctionals f;
  double y = 0.0;
  KahanSum int_y, int_y2, ito;
  for (int i = 0; i < N; ++i) {
    const double t_next = static_cast<double>(i + 1) * h;
    const double m_prev = y - beta_tilde * (static_cast<double>(i) * h);
    const double y_next = C > 0.0 ? exact_cir_step(y, beta_tilde, C, h, rng) : beta_tilde * t_next;
    const double m_next = y_next - beta_tilde * t_next;
    int_y.add(0.5 * h * (y + y_next));
    int_y2.add(0.5 * h * (y * y + y_next * y_next));
    ito.add(y * (m_next - m_prev));
    y = y_next;
  }
  f.int_Y = int_y.value();
  f.int_Y2 = int_y2.value();
  f.M1 = y - beta_tilde;
  f.int_Y_dM = ito.value();
  return f;
}

LimitFunctionals sample_limit_functionals(double beta_tilde, double C, int grid_points,
                                          std::uint64_t seed) {
  RngEngine rng = make_rng(seed);
  return sample_limit_functionals(beta_tilde, C, grid_points, rng);
}

std::array<double, 2> limit_vector(const LimitFunctionals& f) {
  const double denom = f.int_Y2 - f.int_Y * f.int_Y;
  if (!(denom > 0.0)) {
    throw DegenerateDenominatorError("limit functional denominator is not positive");
  }
  return {(f.int_Y_dM - f.M1 * f.int_Y) / denom,
          (f.M1 * f.int_Y2 - f.int_Y * f.int_Y_dM) / denom};
}

}  // namespace cbi
