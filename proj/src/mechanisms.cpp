#include "cbi/mechanisms.hpp"

#include <cmath>
#include <vector>

#include "cbi/errors.hpp"

namespace cbi {

double phi(const CbiParams& params, double lambda) {
  double out = params.c * lambda * lambda - params.b * lambda;
  for (const auto& a : params.mu.atoms()) {
    const double trunc = a.size < 1.0 ? a.size : 1.0;
    out += a.rate * (std::exp(-lambda * a.size) - 1.0 + lambda * trunc);
  }
  return out;
}

double psi(const CbiParams& params, double lambda) {
  double out = params.beta * lambda;
  for (const auto& a : params.nu.atoms()) {
    out += a.rate * (1.0 - std::exp(-lambda * a.size));
  }
  return out;
}

MechanismEval eval_mechanisms(const CbiParams& params, double lambda) {
  return {lambda, phi(params, lambda), psi(params, lambda)};
}

namespace {

// RK4 for dv/dt = -phi(v) on an even number of uniform steps; returns the whole
// grid so the Laplace transform can reuse it for quadrature.
std::vector<double> v_grid(const CbiParams& params, double t, double lambda, double step,
                           long* steps_out) {
  if (!(step > 0.0)) throw ConfigError("step must be positive");
  if (!(t >= 0.0) || !(lambda >= 0.0)) throw ConfigError("t and lambda must be nonnegative");
  long n = t > 0.0 ? static_cast<long>(std::ceil(t / step)) : 0;
  if (n % 2 != 0) ++n;  // Simpson needs an even interval count
  *steps_out = n;
  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(n) + 1);
  double v = lambda;
  grid.push_back(v);
  if (n == 0) return grid;
  const double h = t / static_cast<double>(n);
  for (long i = 0; i < n; ++i) {
    const double k1 = -phi(params, v);
    const double k2 = -phi(params, v + 0.5 * h * k1);
    const double k3 = -phi(params, v + 0.5 * h * k2);
    const double k4 = -phi(params, v + h * k3);
    v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(v)) throw NonFiniteError("v integration produced a non-finite value");
    if (v < 0.0) v = 0.0;
    grid.push_back(v);
  }
  return grid;
}

}  // namespace

double solve_v(const CbiParams& params, double t, double lambda, double step) {
  long n = 0;
  return v_grid(params, t, lambda, step, &n).back();
}

double laplace_transform(const CbiParams& params, double x0, double t, double lambda,
                         double step) {
  if (!(x0 >= 0.0)) throw ConfigError("x0 must be nonnegative");
  long n = 0;
  const std::vector<double> grid = v_grid(params, t, lambda, step, &n);
  double integral = 0.0;
  if (n > 0) {
    const double h = t / static_cast<double>(n);
    double acc = psi(params, grid.front()) + psi(params, grid.back());
    for (long i = 1; i < n; ++i) {
      acc += (i % 2 == 1 ? 4.0 : 2.0) * psi(params, grid[static_cast<size_t>(i)]);
    }
    integral = acc * h / 3.0;
  }
  const double out = std::exp(-x0 * grid.back() - integral);
  if (!std::isfinite(out)) throw NonFiniteError("laplace transform non-finite");
  return out;
}

}  // namespace cbi
