#pragma once

#include <string>

#include "cbi/jump_measure.hpp"

namespace cbi {

// Admissible parameter tuple (c, beta, b, nu, mu).
//  c    >= 0  diffusion coefficient
//  beta >= 0  drift part of the immigration mechanism
//  b    real  branching drift
//  nu         immigration jump measure
//  mu         branching jump measure
struct CbiParams {
  double c = 0.0;
  double beta = 0.0;
  double b = 0.0;
  JumpMeasure nu;
  JumpMeasure mu;

  // Throws ConfigError if the tuple is not admissible.
  void validate() const;

  // beta != 0 or nu nonempty. When false the process is identically zero.
  bool has_immigration() const { return beta > 0.0 || !nu.empty(); }

  bool operator==(const CbiParams&) const = default;
};

// Quantities derived in closed form from a parameter tuple.
//  b_tilde    = b + sum over mu atoms with z > 1 of rate*(z-1)
//  beta_tilde = beta + first moment of nu
//  rho        = exp(b_tilde)                     (one-step branching mean)
//  beta_bar   = beta_tilde * int_0^1 e^{b_tilde s} ds
//  C          = 2c + second moment of mu         (limit diffusion coefficient)
//  V, V0      conditional variance coefficients: Var(X_1 | X_0 = x) = V x + V0
struct DerivedParams {
  double b_tilde = 0.0;
  double beta_tilde = 0.0;
  double rho = 1.0;
  double beta_bar = 0.0;
  double C = 0.0;
  double V = 0.0;
  double V0 = 0.0;

  bool critical() const { return b_tilde == 0.0; }

  bool operator==(const DerivedParams&) const = default;
};

// All fields by closed form; total on valid params. The V and V0 integrals
// are evaluated by exact antiderivative, with a separate branch for
// b_tilde = 0 where they reduce to V = C and V0 = nu_2 + beta_tilde*C/2.
DerivedParams derive(const CbiParams& params);

// int_0^1 e^{a s} ds, exact in both branches.
double unit_exp_integral(double a);

// JSON serialization. Schema: {"c":num,"beta":num,"b":num,
// "nu":[{"z":num,"rate":num},...],"mu":[...]}. Parsing rejects negative c,
// beta, z, rate; b may be negative.
std::string params_to_json(const CbiParams& params, int indent = -1);
CbiParams params_from_json(const std::string& text);
CbiParams load_params_file(const std::string& path);

}  // namespace cbi
