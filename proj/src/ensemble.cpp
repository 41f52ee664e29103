#include "qrep/ensemble.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "qrep/bell.hpp"

namespace qrep {

namespace {

using fock::cplx;
using fock::DensityOperator;
using fock::FockStateVector;
using fock::LinearNetwork;
using fock::Occ;
using fock::SubstitutionExpander;
using fock::occ_get;
using fock::occ_with;

constexpr double kPruneTol = 1e-24;

// Source layout: 0 mem_h, 1 mem_v, 2 ph_h, 3 ph_v, 4 anc_h, 5 anc_v,
// 6 out_h, 7 out_v, 8..11 heralding detectors.
// Join layout: 0..3 left pair [mem_h, mem_v, out_h, out_v] style, 4..7 right
// pair, 8..11 measurement detectors.

void validate_params(const EnsembleParams& pr) {
  if (!(pr.p >= 0.0 && pr.p <= 0.1))
    throw std::invalid_argument("ensemble: p outside [0, 0.1]");
  if (!(pr.q >= 0.0 && pr.q <= 1.0))
    throw std::invalid_argument("ensemble: q outside [0, 1]");
  if (!(pr.r_split >= 0.0 && pr.r_split <= 1.0))
    throw std::invalid_argument("ensemble: r_split outside [0, 1]");
  if (!(pr.eta_m >= 0.0 && pr.eta_m <= 1.0))
    throw std::invalid_argument("ensemble: eta_m outside [0, 1]");
  if (!(pr.gamma_rep > 0.0))
    throw std::invalid_argument("ensemble: gamma_rep must be positive");
}

FockStateVector vacuum(int modes) {
  FockStateVector v;
  v.modes = modes;
  v.n_max = 6;
  v.n_total_max = 12;
  v.amp[0] = cplx(1.0, 0.0);
  return v;
}

// Apply the pair-creation operator (mem_h ph_h + mem_v ph_v)/sqrt(2) once.
FockStateVector apply_pair_creation(const FockStateVector& v) {
  FockStateVector out = v;
  out.amp.clear();
  const double s2 = 1.0 / std::sqrt(2.0);
  for (const auto& [o, a] : v.amp) {
    for (auto [mg, mi] : {std::pair<int, int>{0, 2}, std::pair<int, int>{1, 3}}) {
      int ng = occ_get(o, mg) + 1;
      int ni = occ_get(o, mi) + 1;
      Occ k = occ_with(occ_with(o, mg, ng), mi, ni);
      out.amp[k] += a * s2 * std::sqrt((double)ng) * std::sqrt((double)ni);
    }
  }
  return out;
}

// Weight of seeing the packed detector record `pattern` given packed physical
// counts `phys`, all detectors at efficiency eta.
double pattern_weight(Occ pattern, Occ phys, double eta, int n_det) {
  double w = 1.0;
  for (int i = 0; i < n_det && w != 0.0; ++i)
    w *= fock::pnrd_weight(occ_get(pattern, i), occ_get(phys, i), eta);
  return w;
}

constexpr Occ kOneZeroOneZero = 1ull | (1ull << (2 * fock::kOccBits));

// Herald an incoherent list of pure branches: push each branch through the
// expander, weight the detector record, and collect the unnormalized
// conditional operator on the kept modes.
DensityOperator herald_pure(const std::vector<MixtureBranch>& branches,
                            SubstitutionExpander& ex, Occ pattern, double eta,
                            int kept_modes) {
  DensityOperator rho;
  rho.modes = kept_modes;
  rho.n_max = 6;
  rho.n_total_max = 12;
  for (const auto& br : branches) {
    SubstitutionExpander::Grouped groups;
    for (const auto& [o, a] : br.vec.amp) {
      const auto& g = ex.expand(o);
      for (const auto& [mo, kv] : g) {
        auto& d = groups[mo];
        for (const auto& [ko, amp] : kv) d[ko] += a * amp;
      }
    }
    for (const auto& [mo, kv] : groups) {
      double wt = pattern_weight(pattern, mo, eta, 4);
      if (wt == 0.0) continue;
      double w = br.weight * wt;
      for (const auto& [kb, ab] : kv)
        for (const auto& [kk, ak] : kv)
          rho.entries[{kb, kk}] += w * ab * std::conj(ak);
    }
  }
  return rho;
}

// Herald the product of two operator-valued inputs pushed jointly through the
// expander (the second input's modes sit above the first's).
DensityOperator herald_pair(const DensityOperator& r1,
                            const DensityOperator& r2, int shift_modes,
                            SubstitutionExpander& ex, Occ pattern, double eta,
                            int kept_modes) {
  const int shift = shift_modes * fock::kOccBits;
  DensityOperator rho;
  rho.modes = kept_modes;
  rho.n_max = 6;
  rho.n_total_max = 12;
  for (const auto& [p1, c1] : r1.entries) {
    for (const auto& [p2, c2] : r2.entries) {
      const auto& gb = ex.expand(p1.bra | (p2.bra << shift));
      const auto& gk = ex.expand(p1.ket | (p2.ket << shift));
      for (const auto& [mo, kvb] : gb) {
        auto it = gk.find(mo);
        if (it == gk.end()) continue;
        double wt = pattern_weight(pattern, mo, eta, 4);
        if (wt == 0.0) continue;
        cplx cw = c1 * c2 * wt;
        for (const auto& [kb, ab] : kvb)
          for (const auto& [kk, ak] : it->second)
            rho.entries[{kb, kk}] += cw * ab * std::conj(ak);
      }
    }
  }
  return rho;
}

// Four equivalent click records herald the same corrected state, so the total
// success probability is four times the probability of the reference record.
double finalize_herald(DensityOperator& rho) {
  double p = 4.0 * rho.trace();
  if (p > 0.0) {
    rho.scale(4.0 / p);
    rho.prune(kPruneTol);
  } else {
    rho.entries.clear();
  }
  return p;
}

LinearNetwork source_network(double r_split) {
  const double sr = std::sqrt(r_split);
  const double st = std::sqrt(1.0 - r_split);
  LinearNetwork net;
  net.modes = 12;
  net.rows[2] = {{9, 0.5}, {8, 0.5}, {10, 0.5}, {11, -0.5}};
  net.rows[3] = {{9, 0.5}, {8, 0.5}, {10, -0.5}, {11, 0.5}};
  net.rows[4] = {{10, sr * 0.5}, {11, sr * 0.5}, {9, sr * 0.5}, {8, -sr * 0.5}, {6, st}};
  net.rows[5] = {{10, sr * 0.5}, {11, sr * 0.5}, {9, -sr * 0.5}, {8, sr * 0.5}, {7, st}};
  return net;
}

// Two-photon fusion network. The measured H/V pairs of the two sides are
// mapped onto four detectors so that one click in each detector pair heralds
// the fusion.
LinearNetwork fusion_network(int a_h, int a_v, int b_h, int b_v) {
  const double s2 = 1.0 / std::sqrt(2.0);
  LinearNetwork net;
  net.modes = 12;
  net.rows[a_h] = {{10, s2}, {11, s2}};
  net.rows[a_v] = {{8, s2}, {9, -s2}};
  net.rows[b_h] = {{8, s2}, {9, s2}};
  net.rows[b_v] = {{10, s2}, {11, -s2}};
  return net;
}

JoinResult connect_pair(const DensityOperator& ra, bool a_right,
                        const DensityOperator& rb, bool b_right, double eta) {
  int ma_h = a_right ? 2 : 0, ma_v = a_right ? 3 : 1;
  int mb_h = b_right ? 6 : 4, mb_v = b_right ? 7 : 5;
  int ka_h = a_right ? 0 : 2, ka_v = a_right ? 1 : 3;
  int kb_h = b_right ? 4 : 6, kb_v = b_right ? 5 : 7;
  LinearNetwork net = fusion_network(ma_h, ma_v, mb_h, mb_v);
  fock::validate_isometry(net);
  SubstitutionExpander ex(std::move(net), {8, 9, 10, 11},
                          {ka_h, ka_v, kb_h, kb_v});
  JoinResult res;
  res.state = herald_pair(ra, rb, 4, ex, kOneZeroOneZero, eta, 4);
  res.p_success = finalize_herald(res.state);
  return res;
}

}  // namespace

std::vector<MixtureBranch> spdc_state(double p) {
  if (!(p >= 0.0 && p <= 0.1))
    throw std::invalid_argument("spdc_state: p outside [0, 0.1]");
  std::vector<MixtureBranch> out;
  FockStateVector v = vacuum(4);
  double fact = 1.0;
  for (int m = 0; m <= 2; ++m) {
    if (m > 0) {
      v = apply_pair_creation(v);
      fact *= m;
    }
    MixtureBranch br;
    br.weight = (1.0 - p) * std::pow(2.0, m) * std::pow(p, m) /
                (fact * fact * (m + 1));
    br.vec = v;
    out.push_back(std::move(br));
  }
  return out;
}

std::vector<MixtureBranch> single_photon_state(double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("single_photon_state: q outside [0, 1]");
  std::vector<MixtureBranch> out;
  if (q < 1.0) {
    MixtureBranch vac{1.0 - q, vacuum(1)};
    out.push_back(std::move(vac));
  }
  if (q > 0.0) {
    MixtureBranch one{q, vacuum(1)};
    one.vec.amp.clear();
    one.vec.amp[occ_with(0, 0, 1)] = cplx(1.0, 0.0);
    out.push_back(std::move(one));
  }
  return out;
}

HeraldedSource local_pair_source(const EnsembleParams& pr,
                                 const DetectorModel& d) {
  validate_params(pr);
  // Branches over the 12-mode source layout: the pair emission occupies
  // modes 0..3, the heralding photons land on modes 4 and 5.
  std::vector<MixtureBranch> branches;
  for (const auto& em : spdc_state(pr.p)) {
    for (int h_h = 0; h_h <= 1; ++h_h) {
      for (int h_v = 0; h_v <= 1; ++h_v) {
        double w = em.weight * (h_h ? pr.q : 1.0 - pr.q) *
                   (h_v ? pr.q : 1.0 - pr.q);
        if (w == 0.0) continue;
        MixtureBranch br;
        br.weight = w;
        br.vec = em.vec;
        br.vec.modes = 12;
        if (h_h || h_v) {
          std::unordered_map<Occ, cplx> shifted;
          for (const auto& [o, a] : br.vec.amp) {
            Occ k = o;
            if (h_h) k = occ_with(k, 4, 1);
            if (h_v) k = occ_with(k, 5, 1);
            shifted[k] = a;
          }
          br.vec.amp = std::move(shifted);
        }
        branches.push_back(std::move(br));
      }
    }
  }
  LinearNetwork net = source_network(pr.r_split);
  fock::validate_isometry(net);
  SubstitutionExpander ex(std::move(net), {8, 9, 10, 11}, {0, 1, 6, 7});
  HeraldedSource src;
  src.state = herald_pure(branches, ex, kOneZeroOneZero, d.eta_d, 4);
  src.p0_s = finalize_herald(src.state);
  return src;
}

JoinResult distribute_link(const HeraldedSource& src, double l0_km,
                           const ChannelModel& ch, const DetectorModel& d,
                           const EnsembleParams& pr) {
  double eta = pr.eta_m * transmittivity(ch, 0.5 * l0_km) * d.eta_d;
  return connect_pair(src.state, true, src.state, true, eta);
}

JoinResult swap_level(const fock::DensityOperator& state,
                      const DetectorModel& d, const EnsembleParams& pr) {
  return connect_pair(state, true, state, false, pr.eta_m * d.eta_d);
}

EnsembleChainResult ensemble_chain(const EnsembleParams& pr,
                                   const RepeaterGeometry& g,
                                   const ChannelModel& ch,
                                   const DetectorModel& d) {
  validate_params(pr);
  EnsembleChainResult res;
  HeraldedSource src = local_pair_source(pr, d);
  res.p0_s = src.p0_s;
  if (!(src.p0_s > 0.0)) return res;
  JoinResult link = distribute_link(src, g.segment_km(), ch, d, pr);
  res.p0 = link.p_success;
  if (!(res.p0 > 0.0)) return res;
  DensityOperator rho = std::move(link.state);
  for (int n = 0; n < g.n_levels; ++n) {
    JoinResult sw = swap_level(rho, d, pr);
    res.p_swap.push_back(sw.p_success);
    if (!(sw.p_success > 0.0)) return res;
    rho = std::move(sw.state);
  }
  double eta_key = pr.eta_m * d.eta_d;
  auto z = fock::qkd_click_and_error(rho, fock::PauliBasis::Z, eta_key);
  auto x = fock::qkd_click_and_error(rho, fock::PauliBasis::X, eta_key);
  res.p_click = z.p_click;
  res.e_z = z.qber;
  res.e_x = x.qber;
  res.state = std::move(rho);
  return res;
}

EnsembleRateResult secret_key_rate_ensemble(const EnsembleParams& pr,
                                            const RepeaterGeometry& g,
                                            const ChannelModel& ch,
                                            const DetectorModel& d) {
  EnsembleRateResult out;
  out.chain = ensemble_chain(pr, g, ch, d);
  out.t0 = g.segment_km() / ch.light_speed_km_s;
  if (!(out.chain.p0_s > 0.0)) return out;
  out.t0_source = 1.0 / (pr.gamma_rep * out.chain.p0_s);
  if (!(out.chain.p0 > 0.0) ||
      (int)out.chain.p_swap.size() != g.n_levels ||
      !(out.chain.p_click > 0.0))
    return out;
  double a = a_factor(out.chain.p0);
  double r_rep = rate_probabilistic(out.t0 + out.t0_source, g.n_levels, 0,
                                    out.chain.p0, out.chain.p_swap, {}, a);
  QberTriple q{out.chain.e_x, 0.0, out.chain.e_z};
  double rs = secret_fraction_bb84(q);
  out.breakdown = compose_qkd_rate(r_rep, out.chain.p_click, 1.0, rs, a);
  return out;
}

}  // namespace qrep
