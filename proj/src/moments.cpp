#include "cbi/moments.hpp"

#include <cmath>
#include <cstdint>

#include "cbi/errors.hpp"

namespace cbi {

double conditional_mean(const DerivedParams& d, double x, double t) {
  if (!(x >= 0.0) || !(t >= 0.0)) throw ConfigError("x and t must be nonnegative");
  const double growth = std::exp(d.b_tilde * t);
  const double integral = d.b_tilde == 0.0 ? t : std::expm1(d.b_tilde * t) / d.b_tilde;
  return growth * x + d.beta_tilde * integral;
}

double conditional_variance(const DerivedParams& d, double x) {
  if (!(x >= 0.0)) throw ConfigError("x must be nonnegative");
  return d.V * x + d.V0;
}

namespace {

double binom(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out *= static_cast<double>(n - k + i) / static_cast<double>(i);
  return out;
}

// Centered moments m_j(t_i), j = 0..q, on a uniform grid of n_intervals over
// [0, t]. The j-th moment solves m_j(t) = int_0^t e^{j*bt*(t-s)} G_j(s) ds with
// G_j built from lower moments, so each level is one cumulative quadrature of
// f(s) = e^{-j*bt*s} G_j(s) followed by multiplication with e^{j*bt*t}.
std::vector<std::vector<double>> moment_grid(const CbiParams& params, const DerivedParams& d,
                                             double x0, double t, int q, long n_intervals) {
  const long n = n_intervals;
  const double h = t / static_cast<double>(n);
  const size_t pts = static_cast<size_t>(n) + 1;

  std::vector<double> mean(pts);
  for (size_t i = 0; i < pts; ++i) {
    mean[i] = conditional_mean(d, x0, h * static_cast<double>(i));
  }

  std::vector<std::vector<double>> m(static_cast<size_t>(q) + 1, std::vector<double>(pts, 0.0));
  for (size_t i = 0; i < pts; ++i) m[0][i] = 1.0;
  if (q < 2) return m;

  std::vector<double> f(pts), F(pts);
  for (int j = 2; j <= q; ++j) {
    for (size_t i = 0; i < pts; ++i) {
      const double ex = mean[i];
      double g = static_cast<double>(j) * static_cast<double>(j - 1) * params.c *
                 (m[static_cast<size_t>(j - 1)][i] + ex * m[static_cast<size_t>(j - 2)][i]);
      for (int l = 0; l <= j - 2; ++l) {
        const double w = binom(j, l);
        const double order = static_cast<double>(j - l);
        const double ml = m[static_cast<size_t>(l)][i];
        const double ml1 = m[static_cast<size_t>(l + 1)][i];
        if (!params.mu.empty()) g += w * params.mu.moment(order) * (ml1 + ex * ml);
        if (!params.nu.empty()) g += w * params.nu.moment(order) * ml;
      }
      const double s = h * static_cast<double>(i);
      f[i] = std::exp(-static_cast<double>(j) * d.b_tilde * s) * g;
    }
    // Cumulative Simpson: each even pair gets the standard rule, the interior
    // midpoint the matching half-parabola rule. n is even by construction.
    F[0] = 0.0;
    for (long k = 0; k + 2 <= n; k += 2) {
      const size_t a = static_cast<size_t>(k);
      F[a + 1] = F[a] + h * (5.0 * f[a] + 8.0 * f[a + 1] - f[a + 2]) / 12.0;
      F[a + 2] = F[a] + h * (f[a] + 4.0 * f[a + 1] + f[a + 2]) / 3.0;
    }
    for (size_t i = 0; i < pts; ++i) {
      const double ti = h * static_cast<double>(i);
      m[static_cast<size_t>(j)][i] = std::exp(static_cast<double>(j) * d.b_tilde * ti) * F[i];
      if (!std::isfinite(m[static_cast<size_t>(j)][i])) {
        throw NonFiniteError("moment recursion produced a non-finite value");
      }
    }
  }
  return m;
}

long even_interval_count(double t, double step) {
  long n = static_cast<long>(std::ceil(t / step));
  if (n < 2) n = 2;
  if (n % 2 != 0) ++n;
  return n;
}

// Runs the grid at n and 2n intervals; the halved grid is the result, the
// difference drives the fourth-order error estimate.
std::vector<std::vector<double>> refined_grid_n(const CbiParams& params, const DerivedParams& d,
                                                double x0, double t, int q, long n,
                                                long* fine_intervals) {
  const auto coarse = moment_grid(params, d, x0, t, q, n);
  auto fine = moment_grid(params, d, x0, t, q, 2 * n);
  for (int j = 2; j <= q; ++j) {
    const double a = coarse[static_cast<size_t>(j)].back();
    const double b = fine[static_cast<size_t>(j)].back();
    const double est = std::fabs(b - a) / 15.0;
    if (est / std::max(std::fabs(b), 1e-8) > 1e-6) {
      throw StepTooCoarseError("quadrature step too coarse for requested moments");
    }
  }
  *fine_intervals = 2 * n;
  return fine;
}

std::vector<std::vector<double>> refined_grid(const CbiParams& params, const DerivedParams& d,
                                              double x0, double t, int q, double step,
                                              long* fine_intervals) {
  return refined_grid_n(params, d, x0, t, q, even_interval_count(t, step), fine_intervals);
}

}  // namespace

CenteredMoments centered_moments_from(const CbiParams& params, double x0, double t, int q,
                                      double step) {
  if (q < 1 || q > 8) throw ConfigError("q must be in 1..8");
  if (!(t >= 0.0) || !(x0 >= 0.0)) throw ConfigError("t and x0 must be nonnegative");
  if (!(step > 0.0)) throw ConfigError("step must be positive");
  const DerivedParams d = derive(params);
  CenteredMoments out;
  out.t = t;
  out.values.assign(static_cast<size_t>(q) + 1, 0.0);
  out.values[0] = 1.0;
  if (t == 0.0 || q < 2) return out;
  long fine = 0;
  const auto grid = refined_grid(params, d, x0, t, q, step, &fine);
  for (int j = 2; j <= q; ++j) out.values[static_cast<size_t>(j)] = grid[static_cast<size_t>(j)].back();
  return out;
}

CenteredMoments centered_moments(const CbiParams& params, double t, int q, double step) {
  return centered_moments_from(params, 0.0, t, q, step);
}

namespace {

// Raw moment from centered ones: E(X^r) = sum_j C(r,j) m_j (EX)^{r-j}.
double raw_moment(const std::vector<double>& centered, double mean, int r) {
  double out = 0.0;
  for (int j = 0; j <= r; ++j) {
    out += binom(r, j) * centered[static_cast<size_t>(j)] * std::pow(mean, r - j);
  }
  return out;
}

// Coefficients of the degree <= p polynomial through (nodes[i], values[i]),
// monomial basis, by Gaussian elimination on the Vandermonde system.
std::vector<double> fit_polynomial(const std::vector<double>& nodes,
                                   const std::vector<double>& values) {
  const size_t m = nodes.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (size_t i = 0; i < m; ++i) {
    double pw = 1.0;
    for (size_t j = 0; j < m; ++j) {
      a[i][j] = pw;
      pw *= nodes[i];
    }
    a[i][m] = values[i];
  }
  for (size_t col = 0; col < m; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < m; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    for (size_t r = col + 1; r < m; ++r) {
      const double fct = a[r][col] / a[col][col];
      for (size_t j = col; j <= m; ++j) a[r][j] -= fct * a[col][j];
    }
  }
  std::vector<double> coef(m, 0.0);
  for (size_t ri = m; ri-- > 0;) {
    double rhs = a[ri][m];
    for (size_t j = ri + 1; j < m; ++j) rhs -= a[ri][j] * coef[j];
    coef[ri] = rhs / a[ri][ri];
  }
  return coef;
}

}  // namespace

GrowthReport growth_bounds_check(const CbiParams& params, int q, std::size_t n_max,
                                 double step) {
  if (q < 1 || q > 8) throw ConfigError("q must be in 1..8");
  if (n_max < 2) throw ConfigError("n_max must be >= 2");
  const DerivedParams d = derive(params);
  if (d.b_tilde != 0.0) throw InvalidConfigError("growth bounds apply to critical params only");

  GrowthReport rep;
  rep.q = q;
  rep.p = q / 2;
  const double t_max = static_cast<double>(n_max);

  // Per-unit interval count keeps every integer time on a grid node.
  const long per_unit_base = even_interval_count(1.0, step);
  long fine = 0;
  const auto grid = refined_grid_n(params, d, 0.0, t_max, q,
                                   per_unit_base * static_cast<long>(n_max), &fine);
  const long per_unit = 2 * per_unit_base;

  // One-step centered moments started from p+1 deterministic states determine
  // the residual-moment polynomial E(M^{2p} | X_{k-1} = x), degree <= p in x.
  std::vector<double> coef;
  if (q >= 2) {
    std::vector<double> nodes, vals;
    for (int i = 0; i <= rep.p; ++i) {
      const double x0 = static_cast<double>(i);
      nodes.push_back(x0);
      vals.push_back(centered_moments_from(params, x0, 1.0, 2 * rep.p, step)
                         .values[static_cast<size_t>(2 * rep.p)]);
    }
    coef = fit_polynomial(nodes, vals);
  }

  std::vector<double> centered(static_cast<size_t>(q) + 1);
  for (std::size_t k = 1; k <= n_max; ++k) {
    const size_t idx = static_cast<size_t>(per_unit * static_cast<long>(k));
    for (int j = 0; j <= q; ++j) centered[static_cast<size_t>(j)] = grid[static_cast<size_t>(j)][idx];
    const double mean_k = conditional_mean(d, 0.0, static_cast<double>(k));
    const double xq = raw_moment(centered, mean_k, q);
    rep.x_ratio.push_back(xq / std::pow(1.0 + static_cast<double>(k), q));

    if (!coef.empty()) {
      const size_t prev = static_cast<size_t>(per_unit * static_cast<long>(k - 1));
      for (int j = 0; j <= q; ++j) centered[static_cast<size_t>(j)] = grid[static_cast<size_t>(j)][prev];
      const double mean_prev = conditional_mean(d, 0.0, static_cast<double>(k - 1));
      double mq = 0.0;
      for (size_t j = 0; j < coef.size(); ++j) {
        mq += coef[j] * raw_moment(centered, mean_prev, static_cast<int>(j));
      }
      rep.m_ratio.push_back(mq / std::pow(static_cast<double>(k), rep.p));
    }
  }

  for (double r : rep.x_ratio) rep.max_x_ratio = std::max(rep.max_x_ratio, r);
  for (double r : rep.m_ratio) rep.max_m_ratio = std::max(rep.max_m_ratio, r);

  // A bounded sequence settles; sustained growth over the back half flags it.
  const auto flags_growth = [n_max](const std::vector<double>& ratio) {
    if (ratio.empty()) return false;
    const size_t half = n_max / 2;
    if (half < 1 || ratio.size() < n_max) return false;
    bool monotone = true;
    for (size_t k = half; k < n_max; ++k) {
      if (ratio[k] < ratio[k - 1]) {
        monotone = false;
        break;
      }
    }
    return monotone && ratio[n_max - 1] > 1.10 * ratio[half - 1];
  };
  rep.violation = flags_growth(rep.x_ratio) || flags_growth(rep.m_ratio);
  return rep;
}

}  // namespace cbi
