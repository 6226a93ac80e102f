#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cbi/errors.hpp"
#include "cbi/mechanisms.hpp"
#include "cbi/moments.hpp"
#include "cbi/rng.hpp"
#include "cbi/simulate.hpp"
#include "cbi/stats.hpp"

using namespace cbi;

namespace {

CbiParams make_params(double c, double beta, double b, std::vector<JumpMeasure::Atom> nu,
                      std::vector<JumpMeasure::Atom> mu) {
  CbiParams p;
  p.c = c;
  p.beta = beta;
  p.b = b;
  p.nu = JumpMeasure(std::move(nu));
  p.mu = JumpMeasure(std::move(mu));
  return p;
}

}  // namespace

TEST_CASE("scheme names round trip") {
  for (const char* name : {"auto", "exact-pure-immigration", "exact-cir", "euler-jump"}) {
    CHECK(scheme_to_string(scheme_from_string(name)) == name);
  }
  CHECK_THROWS_AS(scheme_from_string("milstein"), ConfigError);
}

TEST_CASE("scheme dispatch and compatibility validation") {
  SimConfig cfg;
  const CbiParams pure = make_params(0, 1, 0, {{1.0, 1.0}}, {});
  const CbiParams cir = make_params(0.5, 1, 0, {}, {});
  const CbiParams mixed = make_params(0.5, 1, 0, {{1.0, 1.0}}, {{0.5, 0.5}});
  const CbiParams drifted = make_params(0, 1, 0.5, {{1.0, 1.0}}, {});

  CHECK(resolve_scheme(pure, derive(pure), cfg) == Scheme::ExactPureImmigration);
  CHECK(resolve_scheme(cir, derive(cir), cfg) == Scheme::ExactCir);
  CHECK(resolve_scheme(mixed, derive(mixed), cfg) == Scheme::EulerJump);
  // Nonzero drift rules the closed-form immigration path out; auto falls back.
  CHECK(resolve_scheme(drifted, derive(drifted), cfg) == Scheme::EulerJump);

  cfg.scheme = Scheme::ExactCir;
  CHECK_THROWS_AS(resolve_scheme(mixed, derive(mixed), cfg), InvalidConfigError);
  cfg.scheme = Scheme::ExactPureImmigration;
  CHECK_THROWS_AS(resolve_scheme(cir, derive(cir), cfg), InvalidConfigError);
  CHECK_THROWS_AS(resolve_scheme(drifted, derive(drifted), cfg), InvalidConfigError);
  cfg.scheme = Scheme::EulerJump;
  CHECK(resolve_scheme(mixed, derive(mixed), cfg) == Scheme::EulerJump);
  cfg.substeps_per_unit = 0;
  CHECK_THROWS_AS(resolve_scheme(mixed, derive(mixed), cfg), InvalidConfigError);
}

TEST_CASE("deterministic drift-only path") {
  const CbiParams p = make_params(0, 1, 0, {}, {});
  const Skeleton skel = simulate_skeleton(p, 3, SimConfig{}, 1);
  REQUIRE(skel.observations.size() == 4);
  CHECK(skel.observations[0] == 0.0);
  CHECK(skel.observations[1] == doctest::Approx(1.0));
  CHECK(skel.observations[2] == doctest::Approx(2.0));
  CHECK(skel.observations[3] == doctest::Approx(3.0));
  CHECK(skel.n() == 3);
}

TEST_CASE("identical seeds reproduce paths bit-exactly") {
  const CbiParams p = make_params(0.5, 0.7, 0, {{1.0, 0.8}}, {{0.6, 0.5}});
  const Skeleton a = simulate_skeleton(p, 25, SimConfig{}, 99);
  const Skeleton b = simulate_skeleton(p, 25, SimConfig{}, 99);
  const Skeleton c = simulate_skeleton(p, 25, SimConfig{}, 100);
  CHECK(a.observations == b.observations);
  CHECK(a.observations != c.observations);
  for (double x : a.observations) {
    CHECK(x >= 0.0);
    CHECK(std::isfinite(x));
  }
}

TEST_CASE("unit-jump immigration gives Poisson counts") {
  const CbiParams p = make_params(0, 0, 0, {{1.0, 1.0}}, {});
  const int reps = 20000;
  KahanSum s, s2;
  for (int r = 0; r < reps; ++r) {
    const Skeleton skel = simulate_skeleton(p, 1, SimConfig{}, substream_seed(4242, r));
    s.add(skel.observations[1]);
    s2.add(skel.observations[1] * skel.observations[1]);
  }
  const double m = s.value() / reps;
  const double var = s2.value() / reps - m * m;
  const double se = std::sqrt(var / reps);
  CHECK(std::fabs(m - 1.0) <= 3.0 * se);
  CHECK(var == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("critical mean growth matches the closed form") {
  // E(X_n) = betat * n for critical params, any scheme.
  const CbiParams p = make_params(0.3, 0.4, -0.2, {{1.0, 0.6}}, {{2.0, 0.2}});
  const DerivedParams d = derive(p);
  REQUIRE(d.critical());
  const int reps = 3000;
  const std::size_t n = 5;
  KahanSum s, s2;
  SimConfig cfg;
  cfg.substeps_per_unit = 64;
  for (int r = 0; r < reps; ++r) {
    const Skeleton skel = simulate_skeleton(p, n, cfg, substream_seed(77, r));
    s.add(skel.observations[n]);
    s2.add(skel.observations[n] * skel.observations[n]);
  }
  const double m = s.value() / reps;
  const double var = s2.value() / reps - m * m;
  const double se = std::sqrt(var / reps);
  CHECK(std::fabs(m - d.beta_tilde * static_cast<double>(n)) <= 3.0 * se);
}

TEST_CASE("exact square-root-diffusion transition moments") {
  RngEngine rng = make_rng(2024);
  const double y = 1.0, bt = 0.5, C = 2.0, dt = 1.0;
  const int reps = 40000;
  KahanSum s, s2;
  for (int r = 0; r < reps; ++r) {
    const double v = exact_cir_step(y, bt, C, dt, rng);
    CHECK(v >= 0.0);
    s.add(v);
    s2.add(v * v);
  }
  const double m = s.value() / reps;
  const double var = s2.value() / reps - m * m;
  const double exp_mean = y + bt * dt;                      // 1.5
  const double exp_var = C * dt * y + C * bt * dt * dt / 2; // 2.5
  CHECK(std::fabs(m - exp_mean) <= 3.0 * std::sqrt(var / reps));
  // SE of a sample variance is roughly var*sqrt((kurt+2)/reps); 10% is ample.
  CHECK(var == doctest::Approx(exp_var).epsilon(0.1));

  RngEngine rng2 = make_rng(1);
  CHECK(exact_cir_step(0.0, 0.0, 1.0, 1.0, rng2) == 0.0);
  CHECK_THROWS_AS(exact_cir_step(1.0, 1.0, 0.0, 1.0, rng2), DegenerateDiffusionError);
}

TEST_CASE("euler scheme agrees with the exact transition in distribution") {
  // b=0, no jumps: the skeleton is a squared-radial diffusion; Euler at fine
  // substeps must match the exact one-step law.
  const CbiParams p = make_params(0.5, 1.0, 0, {}, {});
  const DerivedParams d = derive(p);
  const int reps = 10000;
  std::vector<double> euler(reps), exact(reps);
  SimConfig cfg;
  cfg.scheme = Scheme::EulerJump;
  cfg.substeps_per_unit = 256;
  for (int r = 0; r < reps; ++r) {
    RngEngine rng = make_rng(31337, 0, r);
    euler[r] = advance_one_unit(p, d, 0.0, Scheme::EulerJump, 256, rng);
    RngEngine rng_b = make_rng(31337, 1, r);
    exact[r] = advance_one_unit(p, d, 0.0, Scheme::ExactCir, 1, rng_b);
  }
  CHECK(ks_two_sample(euler, exact) <= 0.02);
}

TEST_CASE("transform of simulated values matches the semigroup formula") {
  const CbiParams p = make_params(0.5, 0.4, -0.2, {{1.0, 0.6}}, {{2.0, 0.2}});
  REQUIRE(derive(p).critical());
  const int reps = 20000;
  SimConfig cfg;
  cfg.substeps_per_unit = 128;
  std::vector<double> x1(reps);
  for (int r = 0; r < reps; ++r) {
    const Skeleton skel = simulate_skeleton(p, 1, cfg, substream_seed(5150, r));
    x1[r] = skel.observations[1];
  }
  for (double l : {0.5, 1.0, 2.0}) {
    KahanSum s, s2;
    for (double x : x1) {
      const double e = std::exp(-l * x);
      s.add(e);
      s2.add(e * e);
    }
    const double m = s.value() / reps;
    const double var = s2.value() / reps - m * m;
    const double target = laplace_transform(p, 0.0, 1.0, l);
    CHECK(std::fabs(m - target) <= 3.0 * std::sqrt(var / reps) + 1e-4);
  }
}

TEST_CASE("limit functionals of the degenerate diffusion") {
  const int N = 200;
  RngEngine rng = make_rng(5);
  const LimitFunctionals f = sample_limit_functionals(1.0, 0.0, N, rng);
  CHECK(f.int_Y == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.int_Y2 == doctest::Approx(1.0 / 3.0 + 1.0 / (6.0 * N * N)).epsilon(1e-12));
  CHECK(f.M1 == doctest::Approx(0.0));
  CHECK(f.int_Y_dM == doctest::Approx(0.0));
}

TEST_CASE("limit functionals satisfy pathwise constraints in distribution") {
  const double bt = 1.0, C = 1.0;
  const int reps = 2000;
  KahanSum m1_sum, int_y_sum;
  for (int r = 0; r < reps; ++r) {
    const LimitFunctionals f = sample_limit_functionals(bt, C, 400, substream_seed(606, r));
    CHECK(f.int_Y >= 0.0);
    CHECK(f.int_Y2 >= f.int_Y * f.int_Y - 1e-12);  // Cauchy-Schwarz on [0,1]
    m1_sum.add(f.M1);
    int_y_sum.add(f.int_Y);
  }
  // Martingale mean zero and E int Y dt = bt/2, both loose 3-sigma checks.
  CHECK(std::fabs(m1_sum.value() / reps) < 3.0 * std::sqrt(2.0 / reps));
  CHECK(std::fabs(int_y_sum.value() / reps - bt / 2.0) < 3.0 * std::sqrt(1.0 / reps));
}

TEST_CASE("limit vector formula and degeneracy") {
  LimitFunctionals f;
  f.int_Y = 0.5;
  f.int_Y2 = 1.0 / 3.0;
  f.M1 = 0.0;
  f.int_Y_dM = 0.0;
  const auto zero = limit_vector(f);
  CHECK(zero[0] == doctest::Approx(0.0));
  CHECK(zero[1] == doctest::Approx(0.0));

  f.M1 = 0.2;
  f.int_Y_dM = -0.1;
  const auto vec = limit_vector(f);
  // Denominator 1/3 - 1/4 = 1/12.
  CHECK(vec[0] == doctest::Approx(12.0 * (-0.1 - 0.2 * 0.5)));
  CHECK(vec[1] == doctest::Approx(12.0 * (0.2 / 3.0 - 0.5 * (-0.1))));

  f.int_Y2 = 0.25;  // degenerate: equality in Cauchy-Schwarz
  CHECK_THROWS_AS(limit_vector(f), DegenerateDenominatorError);
}

TEST_CASE("invalid requests are rejected") {
  const CbiParams p = make_params(0.5, 1, 0, {}, {});
  CHECK_THROWS_AS(simulate_skeleton(p, 0, SimConfig{}, 1), InvalidConfigError);
  RngEngine rng = make_rng(1);
  CHECK_THROWS_AS(sample_limit_functionals(1.0, 1.0, 1, rng), ConfigError);
  CHECK_THROWS_AS(advance_one_unit(p, derive(p), 0.0, Scheme::Auto, 1, rng),
                  InvalidConfigError);
}
