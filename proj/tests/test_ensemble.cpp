#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "qrep/bell.hpp"
#include "qrep/ensemble.hpp"

using namespace qrep;
using fock::Occ;
using fock::cplx;

namespace {

Occ occ4(int n0, int n1, int n2, int n3) {
  Occ o = 0;
  o = fock::occ_with(o, 0, n0);
  o = fock::occ_with(o, 1, n1);
  o = fock::occ_with(o, 2, n2);
  o = fock::occ_with(o, 3, n3);
  return o;
}

cplx entry(const fock::DensityOperator& rho, Occ b, Occ k) {
  auto it = rho.entries.find({b, k});
  return it == rho.entries.end() ? cplx(0.0) : it->second;
}

double mixture_trace(const std::vector<MixtureBranch>& branches) {
  double t = 0.0;
  for (const auto& br : branches) t += br.weight * br.vec.norm2();
  return t;
}

}  // namespace

TEST_CASE("pair-source mixture carries a geometric photon-number ladder") {
  for (double p : {1e-4, 1e-3, 0.01, 0.1}) {
    auto branches = spdc_state(p);
    REQUIRE(branches.size() == 3);
    CHECK(std::abs(mixture_trace(branches) - (1.0 - p * p * p)) <= 2e-15);
    for (int m = 0; m <= 2; ++m) {
      double w = branches[(std::size_t)m].weight *
                 branches[(std::size_t)m].vec.norm2();
      CHECK(w == doctest::Approx((1.0 - p) * std::pow(p, m)).epsilon(1e-12));
      // Branch m holds exactly m photon pairs.
      for (const auto& [o, a] : branches[(std::size_t)m].vec.amp) {
        if (std::abs(a) == 0.0) continue;
        CHECK(fock::occ_total(o, 4) == 2 * m);
      }
    }
  }
  CHECK_THROWS_AS(spdc_state(0.11), std::invalid_argument);
  CHECK_THROWS_AS(spdc_state(-0.01), std::invalid_argument);
}

TEST_CASE("heralding photon is a weighted vacuum/one-photon mixture") {
  auto mix = single_photon_state(0.7);
  REQUIRE(mix.size() == 2);
  CHECK(mix[0].weight * mix[0].vec.norm2() == doctest::Approx(0.3));
  CHECK(mix[1].weight * mix[1].vec.norm2() == doctest::Approx(0.7));
  CHECK(fock::occ_get(mix[1].vec.amp.begin()->first, 0) == 1);
  CHECK(mixture_trace(mix) == doctest::Approx(1.0).epsilon(1e-15));
  auto sure = single_photon_state(1.0);
  REQUIRE(sure.size() == 1);
  CHECK(sure[0].weight == doctest::Approx(1.0));
  CHECK_THROWS_AS(single_photon_state(1.1), std::invalid_argument);
}

TEST_CASE("parameter validation rejects unphysical settings") {
  DetectorModel d{1.0, 0.0};
  EnsembleParams bad_p;
  bad_p.p = 0.2;
  CHECK_THROWS_AS(local_pair_source(bad_p, d), std::invalid_argument);
  EnsembleParams bad_r;
  bad_r.r_split = 1.5;
  CHECK_THROWS_AS(local_pair_source(bad_r, d), std::invalid_argument);
  EnsembleParams bad_m;
  bad_m.eta_m = -0.1;
  CHECK_THROWS_AS(local_pair_source(bad_m, d), std::invalid_argument);
  EnsembleParams bad_g;
  bad_g.gamma_rep = 0.0;
  CHECK_THROWS_AS(local_pair_source(bad_g, d), std::invalid_argument);
}

TEST_CASE("two-click herald: probability and near-maximal entanglement") {
  EnsembleParams pr;
  pr.p = 1e-3;
  pr.q = 1.0;
  pr.r_split = 0.5;
  DetectorModel d{1.0, 0.0};
  HeraldedSource src = local_pair_source(pr, d);

  // One pair must split toward the herald (R) and toward the output (1-R);
  // multi-pair emissions barely correct the leading p R (1-R).
  double lead = pr.p * pr.r_split * (1.0 - pr.r_split);
  CHECK(std::abs(src.p0_s - 0.00024983325) < 1e-11);
  CHECK(std::abs(src.p0_s / lead - 0.999333) < 2e-6);

  CHECK(src.state.trace() == doctest::Approx(1.0).epsilon(1e-12));
  Occ hh = occ4(1, 0, 1, 0), vv = occ4(0, 1, 0, 1);
  double fid = 0.5 * std::real(entry(src.state, hh, hh) + entry(src.state, vv, vv) +
                               entry(src.state, hh, vv) + entry(src.state, vv, hh));
  CHECK(std::abs(fid - 0.9996667777) < 1e-9);
  CHECK(src.state.entries.size() == 8);
  for (const auto& [pq, c] : src.state.entries) {
    cplx mirror = entry(src.state, pq.ket, pq.bra);
    CHECK(std::abs(c - std::conj(mirror)) < 1e-15);
  }
}

TEST_CASE("fused link treats its two ends symmetrically") {
  EnsembleParams pr;
  pr.p = 2e-3;
  pr.q = 0.96;
  pr.r_split = 0.5;
  DetectorModel d{0.9, 0.0};
  ChannelModel ch;
  HeraldedSource src = local_pair_source(pr, d);
  JoinResult link = distribute_link(src, 37.5, ch, d, pr);

  CHECK(link.p_success == doctest::Approx(0.0668026).epsilon(1e-5));
  CHECK(link.state.trace() == doctest::Approx(1.0).epsilon(1e-12));
  double asym = 0.0;
  for (const auto& [pq, c] : link.state.entries) {
    Occ b2 = occ4(fock::occ_get(pq.bra, 2), fock::occ_get(pq.bra, 3),
                  fock::occ_get(pq.bra, 0), fock::occ_get(pq.bra, 1));
    Occ k2 = occ4(fock::occ_get(pq.ket, 2), fock::occ_get(pq.ket, 3),
                  fock::occ_get(pq.ket, 0), fock::occ_get(pq.ket, 1));
    asym = std::max(asym, std::abs(c - entry(link.state, b2, k2)));
  }
  CHECK(asym < 1e-12);
}

TEST_CASE("lossless chains at weak pumping are essentially error-free") {
  EnsembleParams pr;
  pr.p = 1e-4;
  pr.q = 1.0;
  pr.r_split = 0.5;
  DetectorModel d{1.0, 0.0};
  ChannelModel ch;

  RepeaterGeometry g1{600.0, 1, 1};
  EnsembleChainResult c1 = ensemble_chain(pr, g1, ch, d);
  CHECK(c1.p0_s == doctest::Approx(2.49983e-05).epsilon(1e-5));
  CHECK(c1.p0 == doctest::Approx(3.97243e-06).epsilon(1e-4));
  REQUIRE(c1.p_swap.size() == 1);
  CHECK(c1.p_swap[0] > 0.4995);
  CHECK(c1.p_swap[0] < 0.5);
  CHECK(c1.p_click == doctest::Approx(0.999734).epsilon(1e-5));
  CHECK(std::abs(c1.e_z) < 1e-12);
  CHECK(std::abs(c1.e_x) < 1e-12);

  RepeaterGeometry g2{600.0, 2, 1};
  EnsembleChainResult c2 = ensemble_chain(pr, g2, ch, d);
  CHECK(c2.p0 == doctest::Approx(0.00140945).epsilon(1e-4));
  REQUIRE(c2.p_swap.size() == 2);
  CHECK(c2.p_click == doctest::Approx(0.999748).epsilon(1e-5));
  CHECK(std::abs(c2.e_z) < 1e-12);
  CHECK(std::abs(c2.e_x) < 1e-12);
}

TEST_CASE("rate assembly: source time, attempt time and click folding") {
  EnsembleParams pr;
  pr.p = 1e-3;
  pr.q = 1.0;
  pr.r_split = 0.5;
  pr.gamma_rep = 5e7;
  DetectorModel d{1.0, 0.0};
  ChannelModel ch;
  // round_trips deliberately 2: the photons of a segment meet in the middle,
  // so only one segment-length of signalling is charged per attempt.
  RepeaterGeometry g{600.0, 2, 2};
  EnsembleRateResult res = secret_key_rate_ensemble(pr, g, ch, d);

  CHECK(res.t0 == doctest::Approx(150.0 / 2e5).epsilon(1e-13));
  CHECK(res.t0_source ==
        doctest::Approx(1.0 / (pr.gamma_rep * res.chain.p0_s)).epsilon(1e-12));

  double a = a_factor(res.chain.p0);
  double r_rep = rate_probabilistic(res.t0 + res.t0_source, 2, 0,
                                    res.chain.p0, res.chain.p_swap, {}, a);
  CHECK(res.breakdown.r_rep == doctest::Approx(r_rep).epsilon(1e-12));
  double sf = secret_fraction_bb84({res.chain.e_x, 0.0, res.chain.e_z});
  CHECK(res.breakdown.rate ==
        doctest::Approx(r_rep * res.chain.p_click * sf).epsilon(1e-12));
  CHECK(res.breakdown.rate > 0.0);
}
