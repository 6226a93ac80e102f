#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace cbi {

// Neumaier-compensated accumulator.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);
double median(std::vector<double> xs);  // by value: sorts a copy

// Empirical mean and covariance of 2-d points.
struct MeanCov2 {
  std::array<double, 2> mean{0.0, 0.0};
  std::array<std::array<double, 2>, 2> cov{{{0.0, 0.0}, {0.0, 0.0}}};
};
MeanCov2 mean_cov(const std::vector<std::array<double, 2>>& pts);

// Standard normal CDF.
double normal_cdf(double x);

// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// One-sample KS distance against a reference CDF.
double ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);

// Pooled lag-1 sample autocorrelation over several series. Pairs are formed
// within each series only; mean and variance are pooled across all entries.
double pooled_lag1_autocorrelation(const std::vector<std::vector<double>>& series);

}  // namespace cbi
