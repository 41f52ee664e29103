#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "qrep/hybrid.hpp"
#include "qrep/oracle.hpp"
#include "qrep/original.hpp"

using namespace qrep;

namespace {

double max_abs_diff(const BellState& u, const BellState& v) {
  double m = 0.0;
  for (int l = 0; l < 4; ++l) m = std::max(m, std::abs(u[l] - v[l]));
  return m;
}

BellState pseudo_state(unsigned seed) {
  double w[4], tot = 0.0;
  unsigned x = seed * 2654435761u + 12345u;
  for (int i = 0; i < 4; ++i) {
    x = x * 1664525u + 1013904223u;
    w[i] = 0.05 + (double)(x >> 8) / (double)(1u << 24);
    tot += w[i];
  }
  return BellState{w[0] / tot, w[1] / tot, w[2] / tot, w[3] / tot};
}

}  // namespace

TEST_CASE("probe strength combines amplitude and interaction phase") {
  HybridLinkParams full{0.1, 3.141592653589793, 75.0};
  CHECK(full.probe_strength() == doctest::Approx(0.01).epsilon(1e-12));
  HybridLinkParams half{0.2, 3.141592653589793 / 2.0, 75.0};
  CHECK(half.probe_strength() == doctest::Approx(0.02).epsilon(1e-12));
  HybridLinkParams bad{-0.1, 3.141592653589793, 75.0};
  CHECK_THROWS_AS(bad.probe_strength(), std::domain_error);
}

TEST_CASE("gate dephasing exponent and no-flip probability") {
  DissipativeGate perfect{1.0};
  CHECK(perfect.x() == doctest::Approx(0.0));
  CHECK(perfect.p_c() == doctest::Approx(1.0).epsilon(1e-15));
  DissipativeGate g{0.9};
  CHECK(g.x() == doctest::Approx(0.3311529421932033).epsilon(1e-14));
  CHECK(g.p_c() == doctest::Approx(0.9237025293665063).epsilon(1e-14));
  DissipativeGate bad{0.0};
  CHECK_THROWS_AS(bad.x(), std::domain_error);
}

TEST_CASE("heralded-pair fidelity from probe strength and losses") {
  ChannelModel ch;
  double eta_t = transmittivity(ch, 75.0);
  CHECK(hybrid_initial_fidelity_from_strength(0.01, eta_t, 0.9) ==
        doctest::Approx(0.9905158112905934).epsilon(1e-14));
  double eta_t50 = transmittivity(ch, 50.0);
  CHECK(hybrid_initial_fidelity_from_strength(0.005, eta_t50, 1.0) ==
        doctest::Approx(0.9957246522400844).epsilon(1e-14));
  // A vanishing probe never dephases the pair (it is also never heralded).
  CHECK(hybrid_initial_fidelity_from_strength(0.0, eta_t, 0.9) ==
        doctest::Approx(1.0).epsilon(1e-15));
  HybridLinkParams link{0.1, 3.141592653589793, 75.0};
  CHECK(hybrid_initial_fidelity(link, ch, DetectorModel{0.9, 0.0}) ==
        doctest::Approx(0.9905158112905934).epsilon(1e-14));
}

TEST_CASE("herald success probability against fidelity") {
  ChannelModel ch;
  DetectorModel d9{0.9, 0.0};
  CHECK(hybrid_success_probability(0.9905158112905934, 75.0, ch, d9) ==
        doctest::Approx(0.0009551355669802364).epsilon(1e-12));
  DetectorModel d1{1.0, 0.0};
  CHECK(hybrid_success_probability(0.9957246522400844, 50.0, ch, d1) ==
        doctest::Approx(0.00141154038302993).epsilon(1e-12));
  // A random pair is heralded always, a perfect pair never.
  CHECK(hybrid_success_probability(0.5, 75.0, ch, d9) == doctest::Approx(1.0));
  CHECK(hybrid_success_probability(1.0, 75.0, ch, d9) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(hybrid_success_probability(0.4, 75.0, ch, d9),
                  std::domain_error);
}

TEST_CASE("noiseless hybrid swap is the label convolution, noisy one frozen") {
  BellState s{0.7, 0.1, 0.1, 0.1};
  BellState ideal = hybrid_swap_map(s, s, DissipativeGate{1.0});
  CHECK(ideal.a == doctest::Approx(0.52).epsilon(1e-12));
  CHECK(ideal.b == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(ideal.c == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(ideal.d == doctest::Approx(0.16).epsilon(1e-12));

  BellState noisy = hybrid_swap_map(s, s, DissipativeGate{0.9});
  CHECK(noisy.a == doctest::Approx(0.4671614905929093).epsilon(1e-13));
  CHECK(noisy.b == doctest::Approx(0.18537141997903284).epsilon(1e-13));
  CHECK(noisy.c == doctest::Approx(0.18537141997903284).epsilon(1e-13));
  CHECK(noisy.d == doctest::Approx(0.16209566944902487).epsilon(1e-13));
  CHECK(noisy.sum() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("hybrid distillation: noiseless limit matches depolarizing-gate map") {
  for (unsigned seed : {4u, 8u, 15u}) {
    BellState s = pseudo_state(seed);
    auto [hs, hp] = hybrid_distill_map(s, DissipativeGate{1.0});
    auto [ds, dp] = distill_map(s, 1.0);
    CHECK(std::abs(hp - dp) < 1e-13);
    CHECK(max_abs_diff(hs, ds) < 1e-13);
  }
}

TEST_CASE("hybrid distillation success probability closed form") {
  DissipativeGate g{0.9};
  auto [out, p_d] = hybrid_distill_map(BellState{0.7, 0.1, 0.1, 0.1}, g);
  CHECK(p_d == doctest::Approx(0.629257160041934).epsilon(1e-13));
  CHECK(out.sum() == doctest::Approx(1.0).epsilon(1e-13));
  for (unsigned seed : {21u, 22u}) {
    BellState s = pseudo_state(seed);
    for (double p_g : {1.0, 0.93, 0.85}) {
      DissipativeGate gate{p_g};
      double pc = gate.p_c();
      auto [o, p] = hybrid_distill_map(s, gate);
      double even = (s.a + s.d) * (s.a + s.d) + (s.b + s.c) * (s.b + s.c);
      double sw = s.a - s.b - s.c + s.d;
      double expect = even - 2.0 * pc * (1.0 - pc) * sw * sw;
      CHECK(p == doctest::Approx(expect).epsilon(1e-13));
    }
  }
}

TEST_CASE("hybrid maps agree with the dense-matrix references") {
  for (unsigned seed : {31u, 32u}) {
    BellState s = pseudo_state(seed);
    BellState t = pseudo_state(seed + 50);
    for (double p_g : {1.0, 0.92}) {
      DissipativeGate gate{p_g};
      BellState fast = hybrid_swap_map(s, t, gate);
      BellState slow = oracle_swap_hybrid(s, t, gate.p_c());
      CHECK(max_abs_diff(fast, slow) < 1e-12);

      auto [fs, fp] = hybrid_distill_map(s, gate);
      auto [os, op] = oracle_distill_hybrid(s, gate.p_c());
      CHECK(std::abs(fp - op) < 1e-12);
      CHECK(max_abs_diff(fs, os) < 1e-12);
    }
  }
}

TEST_CASE("probe discrimination reference reproduces both closed forms") {
  ChannelModel ch;
  struct Tuple {
    double s, l0, eta_d;
  };
  for (Tuple t : {Tuple{0.01, 75.0, 0.9}, Tuple{0.005, 50.0, 1.0},
                  Tuple{0.02, 100.0, 0.7}, Tuple{0.001, 25.0, 0.5}}) {
    double eta_t = transmittivity(ch, t.l0);
    UsdLinkResult res = oracle_usd_link(t.s, eta_t, t.eta_d);
    double f = hybrid_initial_fidelity_from_strength(t.s, eta_t, t.eta_d);
    CHECK(std::abs(res.fidelity - f) < 1e-10);
    CHECK(std::abs(res.p_success -
                   hybrid_success_probability(f, t.l0, ch,
                                              DetectorModel{t.eta_d, 0.0})) <
          1e-10);
    // Same thing expressed directly in the probe strength.
    CHECK(res.p_success ==
          doctest::Approx(-std::expm1(-2.0 * eta_t * t.eta_d * t.s))
              .epsilon(1e-9));
  }
}

TEST_CASE("gate quality threshold sits between 0.84 and 0.87 for one swap") {
  RepeaterGeometry g{600.0, 1, 2};
  ChannelModel ch;
  DetectorModel d{1.0, 0.0};
  auto best_rate = [&](double p_g) {
    double best = 0.0;
    for (int i = 0; i <= 200; ++i) {
      double f0 = 0.5 + 0.5 * (double)i / 200.0;
      if (f0 >= 1.0) f0 = 1.0 - 1e-9;
      HybridChainParams cp{f0, p_g, 1, 0};
      best = std::max(best,
                      secret_key_rate_hybrid(cp, g, ch, d, QkdProtocol::Bb84).rate);
    }
    return best;
  };
  CHECK(best_rate(0.84) == 0.0);
  CHECK(best_rate(0.87) > 0.0);
}

TEST_CASE("full hybrid rate wiring: deterministic connections") {
  HybridChainParams cp{0.93, 0.99, 2, 1};
  RepeaterGeometry g{600.0, 2, 2};
  ChannelModel ch;
  DetectorModel d{1.0, 0.0};
  RateBreakdown b = secret_key_rate_hybrid(cp, g, ch, d, QkdProtocol::Bb84);

  DissipativeGate gate{cp.p_g};
  BellState s{cp.f0, 1.0 - cp.f0, 0.0, 0.0};
  auto [s1, p_d] = hybrid_distill_map(s, gate);
  BellState s2 = hybrid_swap_map(s1, s1, gate);
  BellState s3 = hybrid_swap_map(s2, s2, gate);
  double p0 = hybrid_success_probability(cp.f0, g.segment_km(), ch, d);
  double p1 = p_d / z1_average_attempts(p0);
  double t0 = fundamental_time(g, ch);
  double r_rep = rate_deterministic(t0, 2, p1);

  CHECK(b.p_click == doctest::Approx(1.0));
  CHECK(b.r_sift == doctest::Approx(1.0));
  CHECK(b.r_rep == doctest::Approx(r_rep).epsilon(1e-12));
  CHECK(b.secret_fraction ==
        doctest::Approx(secret_fraction(s3, QkdProtocol::Bb84)).epsilon(1e-12));
  CHECK(b.rate == doctest::Approx(r_rep * b.secret_fraction).epsilon(1e-12));
  CHECK(b.rate > 0.0);
}
