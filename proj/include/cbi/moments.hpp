#pragma once

#include <cstddef>
#include <vector>

#include "cbi/params.hpp"

namespace cbi {

// E(X_t | X_0 = x) = e^{bt*t} x + betat * int_0^t e^{bt*u} du, closed form.
double conditional_mean(const DerivedParams& d, double x, double t);

// Var of the one-step residual given the previous state: V*x + V0.
double conditional_variance(const DerivedParams& d, double x);

// Centered moments E[(X_t - E X_t)^j] for j = 0..q; values[0] = 1, values[1] = 0.
struct CenteredMoments {
  double t = 0.0;
  std::vector<double> values;
};

// Moment recursion evaluated by quadrature, X_0 = 0. q in 1..8. Throws
// StepTooCoarseError when halving the step still moves results by more than
// 1e-6 relative.
CenteredMoments centered_moments(const CbiParams& params, double t, int q,
                                 double step = 1.0 / 512.0);

// Same recursion started from the deterministic initial value x0.
CenteredMoments centered_moments_from(const CbiParams& params, double x0, double t, int q,
                                      double step = 1.0 / 512.0);

// Boundedness diagnostics for E(X_k^q)/(1+k)^q and E(M_k^{2p})/k^p, p = q/2.
struct GrowthReport {
  int q = 0;
  int p = 0;
  std::vector<double> x_ratio;  // x_ratio[k-1] = E(X_k^q)/(1+k)^q, k = 1..n_max
  std::vector<double> m_ratio;  // m_ratio[k-1] = E(M_k^{2p})/k^p; empty when q < 2
  double max_x_ratio = 0.0;
  double max_m_ratio = 0.0;
  bool violation = false;
};

// Requires critical params (b_tilde = 0).
GrowthReport growth_bounds_check(const CbiParams& params, int q, std::size_t n_max,
                                 double step = 1.0 / 512.0);

}  // namespace cbi
