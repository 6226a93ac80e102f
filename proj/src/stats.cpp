#include "cbi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace cbi {

double mean(const std::vector<double>& xs) {
  KahanSum s;
  for (double x : xs) s.add(x);
  return xs.empty() ? 0.0 : s.value() / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  KahanSum s;
  for (double x : xs) s.add((x - m) * (x - m));
  return s.value() / static_cast<double>(xs.size() - 1);
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  if (n % 2 == 1) return xs[n / 2];
  return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

MeanCov2 mean_cov(const std::vector<std::array<double, 2>>& pts) {
  MeanCov2 out;
  const std::size_t n = pts.size();
  if (n == 0) return out;
  KahanSum m0, m1;
  for (const auto& p : pts) {
    m0.add(p[0]);
    m1.add(p[1]);
  }
  out.mean = {m0.value() / static_cast<double>(n), m1.value() / static_cast<double>(n)};
  if (n < 2) return out;
  KahanSum c00, c01, c11;
  for (const auto& p : pts) {
    const double d0 = p[0] - out.mean[0];
    const double d1 = p[1] - out.mean[1];
    c00.add(d0 * d0);
    c01.add(d0 * d1);
    c11.add(d1 * d1);
  }
  const double denom = static_cast<double>(n - 1);
  out.cov[0][0] = c00.value() / denom;
  out.cov[0][1] = out.cov[1][0] = c01.value() / denom;
  out.cov[1][1] = c11.value() / denom;
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(f - lo, hi - f));
  }
  return d;
}

double pooled_lag1_autocorrelation(const std::vector<std::vector<double>>& series) {
  KahanSum total;
  std::size_t count = 0;
  for (const auto& s : series) {
    for (double x : s) total.add(x);
    count += s.size();
  }
  if (count < 2) return 0.0;
  const double m = total.value() / static_cast<double>(count);
  KahanSum num, den;
  for (const auto& s : series) {
    for (std::size_t k = 0; k + 1 < s.size(); ++k) num.add((s[k] - m) * (s[k + 1] - m));
    for (double x : s) den.add((x - m) * (x - m));
  }
  const double d = den.value();
  return d > 0.0 ? num.value() / d : 0.0;
}

}  // namespace cbi
