#pragma once

#include "cbi/params.hpp"

namespace cbi {

// Branching mechanism c*l^2 - b*l + sum_j rate_j*(exp(-l*z_j) - 1 + l*min(1,z_j)).
double phi(const CbiParams& params, double lambda);

// Immigration mechanism beta*l + sum_j rate_j*(1 - exp(-l*z_j)); nonnegative for l >= 0.
double psi(const CbiParams& params, double lambda);

struct MechanismEval {
  double lambda = 0.0;
  double phi = 0.0;
  double psi = 0.0;
};

MechanismEval eval_mechanisms(const CbiParams& params, double lambda);

// Solves dv/dt = -phi(v), v(0) = lambda, by classical RK4 with step size <= step.
// Result is clamped to [0, inf). Throws NonFiniteError if the integration blows up.
double solve_v(const CbiParams& params, double t, double lambda, double step = 1e-3);

// exp(-x0*v(t,lambda) - int_0^t psi(v(s,lambda)) ds); the integral uses composite
// Simpson over the RK4 grid values of v.
double laplace_transform(const CbiParams& params, double x0, double t, double lambda,
                         double step = 1e-3);

}  // namespace cbi
