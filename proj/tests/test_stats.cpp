#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cbi/stats.hpp"

using namespace cbi;

TEST_CASE("kahan sum keeps small terms alongside huge ones") {
  KahanSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == doctest::Approx(2.0));

  KahanSum t;
  for (int i = 0; i < 10000000; ++i) t.add(0.1);
  CHECK(t.value() == doctest::Approx(1e6).epsilon(1e-12));
}

TEST_CASE("mean, variance, median on hand-checked inputs") {
  CHECK(mean({1.0, 2.0, 3.0, 4.0}) == doctest::Approx(2.5));
  CHECK(sample_variance({1.0, 2.0, 3.0, 4.0}) == doctest::Approx(5.0 / 3.0));
  CHECK(median({3.0, 1.0, 2.0}) == doctest::Approx(2.0));
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == doctest::Approx(2.5));
  CHECK(mean({}) == 0.0);
  CHECK(sample_variance({5.0}) == 0.0);
}

TEST_CASE("mean_cov of two points") {
  const MeanCov2 mc = mean_cov({{{0.0, 0.0}}, {{2.0, 2.0}}});
  CHECK(mc.mean[0] == doctest::Approx(1.0));
  CHECK(mc.mean[1] == doctest::Approx(1.0));
  CHECK(mc.cov[0][0] == doctest::Approx(2.0));
  CHECK(mc.cov[0][1] == doctest::Approx(2.0));
  CHECK(mc.cov[1][0] == doctest::Approx(2.0));
  CHECK(mc.cov[1][1] == doctest::Approx(2.0));
}

TEST_CASE("normal cdf reference values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-7));
}

TEST_CASE("two-sample KS distance") {
  CHECK(ks_two_sample({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == doctest::Approx(0.0));
  CHECK(ks_two_sample({0.0, 1.0}, {10.0, 11.0}) == doctest::Approx(1.0));
  CHECK(ks_two_sample({1.0, 3.0}, {2.0, 4.0}) == doctest::Approx(0.5));
  // Ties across samples move both empirical CDFs together.
  CHECK(ks_two_sample({1.0, 1.0, 2.0}, {1.0, 2.0, 2.0}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("one-sample KS distance against a CDF") {
  const auto uniform = [](double x) { return x; };
  CHECK(ks_one_sample({0.25, 0.75}, uniform) == doctest::Approx(0.25));
  CHECK(ks_one_sample({0.0, 0.5, 1.0}, uniform) <= 1.0 / 3.0 + 1e-12);

  // Large normal sample should sit close to its own CDF.
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> xs(20000);
  for (auto& x : xs) x = nd(rng);
  CHECK(ks_one_sample(xs, [](double x) { return normal_cdf(x); }) < 0.015);
}

TEST_CASE("pooled lag-1 autocorrelation") {
  // Alternating series: five products of -1 over total sum of squares 6.
  CHECK(pooled_lag1_autocorrelation({{1.0, -1.0, 1.0, -1.0, 1.0, -1.0}}) ==
        doctest::Approx(-5.0 / 6.0));
  // Constant series: zero variance is reported as zero correlation.
  CHECK(pooled_lag1_autocorrelation({{2.0, 2.0, 2.0}}) == 0.0);

  // iid noise across several series stays near zero.
  std::mt19937_64 rng(999);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<std::vector<double>> series(50, std::vector<double>(200));
  for (auto& s : series) {
    for (auto& x : s) x = nd(rng);
  }
  CHECK(std::fabs(pooled_lag1_autocorrelation(series)) < 3.0 / std::sqrt(10000.0));

  // Pairs never straddle series boundaries: the (1,-1) cross product between
  // the two series must not appear, leaving num=2 over den=4.
  CHECK(pooled_lag1_autocorrelation({{1.0, 1.0}, {-1.0, -1.0}}) == doctest::Approx(0.5));
}

TEST_CASE("ks distances stay in [0,1] on random data") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(500), b(300);
  for (auto& x : a) x = u(rng);
  for (auto& x : b) x = u(rng);
  const double d = ks_two_sample(a, b);
  CHECK(d >= 0.0);
  CHECK(d <= 1.0);
  const double d1 = ks_one_sample(a, [](double x) { return x; });
  CHECK(d1 >= 0.0);
  CHECK(d1 <= 1.0);
}
