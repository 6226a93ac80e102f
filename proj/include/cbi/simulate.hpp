#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "cbi/params.hpp"
#include "cbi/rng.hpp"
#include "cbi/skeleton.hpp"

namespace cbi {

enum class Scheme { Auto, ExactPureImmigration, ExactCir, EulerJump };

Scheme scheme_from_string(const std::string& name);
std::string scheme_to_string(Scheme s);

struct SimConfig {
  int substeps_per_unit = 64;
  Scheme scheme = Scheme::Auto;
};

// Resolves Auto to a concrete scheme; validates an explicit request against params.
Scheme resolve_scheme(const CbiParams& params, const DerivedParams& derived, const SimConfig& cfg);

// One unit-time transition from state x under the resolved scheme.
double advance_one_unit(const CbiParams& params, const DerivedParams& derived, double x,
                        Scheme scheme, int substeps_per_unit, RngEngine& rng);

// Path X_0=0, X_1, ..., X_n at unit spacing.
Skeleton simulate_skeleton(const CbiParams& params, std::size_t n, const SimConfig& cfg,
                           std::uint64_t seed);

// Exact transition of dY = beta_tilde*dt + sqrt(C*Y^+)*dW over dt, via the
// noncentral chi-square representation (Poisson-mixed gamma). Requires C > 0.
double exact_cir_step(double y, double beta_tilde, double C, double dt, RngEngine& rng);

// Path functionals of the limit diffusion on [0,1] with Y_0 = 0.
struct LimitFunctionals {
  double int_Y = 0.0;     // trapezoid of Y_t dt
  double int_Y2 = 0.0;    // trapezoid of Y_t^2 dt
  double M1 = 0.0;        // Y_1 - beta_tilde
  double int_Y_dM = 0.0;  // left-point sum of Y_t dM_t, M_t = Y_t - beta_tilde*t
};

// grid_points counts the uniform subintervals of [0,1]; exact CIR transitions
// between grid times (deterministic Y_t = beta_tilde*t when C = 0).
LimitFunctionals sample_limit_functionals(double beta_tilde, double C, int grid_points,
                                          RngEngine& rng);
LimitFunctionals sample_limit_functionals(double beta_tilde, double C, int grid_points,
                                          std::uint64_t seed);

// One replicate of the joint limit law of the scaled estimation errors.
std::array<double, 2> limit_vector(const LimitFunctionals& f);

}  // namespace cbi
