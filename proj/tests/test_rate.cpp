#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qrep/rate.hpp"

using namespace qrep;

TEST_CASE("fiber transmittivity at frozen distances") {
  ChannelModel ch;
  CHECK(transmittivity(ch, 0.0) == doctest::Approx(1.0));
  CHECK(transmittivity(ch, 10.0) == doctest::Approx(0.6760829753919817).epsilon(1e-14));
  CHECK(transmittivity(ch, 75.0) == doctest::Approx(0.05308844442309882).epsilon(1e-14));
  CHECK(transmittivity(ch, 100.0) == doctest::Approx(0.0199526231496888).epsilon(1e-14));
}

TEST_CASE("segment length and attempt duration") {
  ChannelModel ch;
  RepeaterGeometry g{600.0, 2, 2};
  CHECK(g.segment_km() == doctest::Approx(150.0));
  CHECK(fundamental_time(g, ch) == doctest::Approx(1.5e-3).epsilon(1e-14));
  RepeaterGeometry meet{600.0, 2, 1};
  CHECK(fundamental_time(meet, ch) == doctest::Approx(7.5e-4).epsilon(1e-14));
}

TEST_CASE("average waiting slots against exact rational references") {
  // Frozen from an exact-arithmetic evaluation of the inclusion-exclusion sum.
  CHECK(z1_average_attempts(0.5) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  CHECK(z_average_attempts(1, 0.5) == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
  CHECK(z_average_attempts(2, 0.5) == doctest::Approx(368.0 / 105.0).epsilon(1e-13));
  CHECK(z_average_attempts(3, 0.1) == doctest::Approx(26.295784368397804).epsilon(1e-12));
  CHECK(z_average_attempts(4, 0.01) == doctest::Approx(336.8797033759006).epsilon(1e-11));
  CHECK(z_average_attempts(5, 0.3) == doctest::Approx(11.878694423002885).epsilon(1e-12));
}

TEST_CASE("waiting-slot average, degenerate and edge cases") {
  CHECK(z_average_attempts(0, 0.25) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(z_average_attempts(0, 1.0) == doctest::Approx(1.0));
  CHECK(z_average_attempts(3, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)z_average_attempts(1, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)z_average_attempts(1, 1.5), std::domain_error);
  // more segments -> longer wait; lower p -> longer wait
  CHECK(z_average_attempts(4, 0.2) > z_average_attempts(3, 0.2));
  CHECK(z_average_attempts(3, 0.1) > z_average_attempts(3, 0.2));
}

TEST_CASE("deep-chain branches stay consistent across the policy boundary") {
  // Levels 5 (direct sum) and 6+ (asymptotic or tail sum) must join smoothly:
  // the deep value exceeds the shallow one by less than one doubling's worth.
  for (double p : {0.01, 0.1, 0.5, 0.9}) {
    double z5 = z_average_attempts(5, p);
    double z6 = z_average_attempts(6, p);
    CHECK(z6 > z5);
    CHECK(z6 < 2.0 * z5);
  }
}

TEST_CASE("tail-sum branch agrees with simulation at high success probability") {
  double z = z_average_attempts(6, 0.9);
  McWaitingResult mc = mc_waiting_time(6, 0.9, 40000, 20240817);
  CHECK(std::abs(mc.mean - z) < 4.0 * mc.std_error);
}

TEST_CASE("probabilistic-bound constant a") {
  CHECK(a_factor(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(a_factor(1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(a_factor(0.037) == doctest::Approx(0.9937170996773645).epsilon(1e-14));
  for (double p : {0.05, 0.3, 0.8}) {
    CHECK(a_factor(p) ==
          doctest::Approx((2.0 / 3.0) * p * z1_average_attempts(p)).epsilon(1e-13));
  }
}

TEST_CASE("success-probability bookkeeping across distillation rounds") {
  std::vector<double> pd{0.68};
  std::vector<double> seq = success_probability_recursion(0.5, pd);
  REQUIRE(seq.size() == 2);
  CHECK(seq[0] == doctest::Approx(0.5));
  CHECK(seq[1] == doctest::Approx(0.68 / (8.0 / 3.0)).epsilon(1e-13));
  std::vector<double> seq0 = success_probability_recursion(0.4, {});
  REQUIRE(seq0.size() == 1);
  CHECK(seq0[0] == doctest::Approx(0.4));
}

TEST_CASE("deterministic-connection pair rate") {
  double t0 = 1.5e-3;
  CHECK(rate_deterministic(t0, 2, 0.5) ==
        doctest::Approx(1.0 / (t0 * (368.0 / 105.0))).epsilon(1e-12));
}

TEST_CASE("probabilistic-connection pair rate follows the product form") {
  double t0 = 1.0e-3, p0 = 0.3, a = 0.95;
  std::vector<double> p_es{0.8, 0.7};
  std::vector<double> p_d{0.9};
  double want = (1.0 / t0) * std::pow(2.0 / (3.0 * a), 3) * p0 * 0.8 * 0.7 * 0.9;
  CHECK(rate_probabilistic(t0, 2, 1, p0, p_es, p_d, a) ==
        doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("rate composition clamps a negative secret fraction") {
  RateBreakdown rb = compose_qkd_rate(1000.0, 0.81, 1.0, -0.05, 0.98);
  CHECK(rb.rate == 0.0);
  CHECK(rb.secret_fraction == 0.0);
  CHECK(rb.r_rep == doctest::Approx(1000.0));
  CHECK(rb.p_click == doctest::Approx(0.81));
  RateBreakdown ok = compose_qkd_rate(1000.0, 0.81, 0.5, 0.2, 0.9991);
  CHECK(ok.rate == doctest::Approx(1000.0 * 0.81 * 0.5 * 0.2).epsilon(1e-13));
  CHECK(ok.a_near_one);
}

TEST_CASE("waiting-time simulation guards and reproducibility") {
  CHECK_THROWS_AS((void)mc_waiting_time(1, 0.5, 100, 1), std::invalid_argument);
  McWaitingResult a = mc_waiting_time(1, 0.5, 20000, 42);
  McWaitingResult b = mc_waiting_time(1, 0.5, 20000, 42);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(std::abs(a.mean - 8.0 / 3.0) < 4.0 * a.std_error);
  CHECK(a.trials == 20000);
}
