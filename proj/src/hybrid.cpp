#include "qrep/hybrid.hpp"

#include <cmath>
#include <stdexcept>

namespace qrep {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double HybridLinkParams::probe_strength() const {
  if (alpha < 0.0) throw std::domain_error("hybrid link: alpha must be >= 0");
  if (!(theta > 0.0) || theta > kPi) {
    throw std::domain_error("hybrid link: theta must be in (0, pi]");
  }
  double s = std::sin(theta / 2.0);
  return alpha * alpha * s * s;
}

double DissipativeGate::x() const {
  if (!(p_g > 0.0) || p_g > 1.0) {
    throw std::domain_error("DissipativeGate: p_g must be in (0, 1]");
  }
  return kPi * (1.0 - p_g) / std::sqrt(p_g);
}

double DissipativeGate::p_c() const {
  return (1.0 + std::exp(-x() / 2.0)) / 2.0;
}

double hybrid_initial_fidelity_from_strength(double s, double eta_t,
                                             double eta_d) {
  double coeff = 1.0 + eta_t * (1.0 - 2.0 * eta_d);
  return (1.0 + std::exp(-2.0 * coeff * s)) / 2.0;
}

double hybrid_initial_fidelity(const HybridLinkParams& link,
                               const ChannelModel& ch,
                               const DetectorModel& d) {
  return hybrid_initial_fidelity_from_strength(
      link.probe_strength(), transmittivity(ch, link.l0_km), d.eta_d);
}

double hybrid_success_probability(double f0, double l0_km,
                                  const ChannelModel& ch,
                                  const DetectorModel& d) {
  if (f0 < 0.5 || f0 > 1.0) {
    throw std::domain_error("hybrid_success_probability: f0 outside [1/2, 1]");
  }
  double eta_t = transmittivity(ch, l0_km);
  double denom = 1.0 + eta_t * (1.0 - 2.0 * d.eta_d);
  if (denom <= 0.0) {
    throw std::domain_error(
        "hybrid_success_probability: unphysical parameter combination");
  }
  double expo = eta_t * d.eta_d / denom;
  // The heralding discriminates coherent probes whose overlap shrinks as the
  // target fidelity grows; the exponent converts fidelity into that overlap.
  return 1.0 - std::pow(2.0 * f0 - 1.0, expo);
}

BellState hybrid_swap_map(const BellState& left, const BellState& right,
                          const DissipativeGate& gate) {
  const double pc = gate.p_c();
  BellState ideal = bell_convolve(left, right);
  BellState out{0.0, 0.0, 0.0, 0.0};
  for (int l = 0; l < 4; ++l) {
    int z = bell_z(l), x = bell_x(l);
    double acc = 0.0;
    for (int fz = 0; fz < 2; ++fz) {
      for (int fx = 0; fx < 2; ++fx) {
        double w = (fz ? 1.0 - pc : pc) * (fx ? 1.0 - pc : pc);
        acc += w * ideal[bell_label(z ^ fz, x ^ fx)];
      }
    }
    out[l] = acc;
  }
  return out;
}

std::pair<BellState, double> hybrid_distill_map(const BellState& s,
                                                const DissipativeGate& gate) {
  const double pc = gate.p_c();
  // Two noisy gates act, one per station. Their phase flips combine into a
  // net flip of the kept pair's z label (probability v) and a net flip of the
  // measured parity (probability v), with v = 2 pc (1 - pc).
  const double v = 2.0 * pc * (1.0 - pc);
  double joint[4] = {0.0, 0.0, 0.0, 0.0};
  double p_d = 0.0;
  for (int l1 = 0; l1 < 4; ++l1) {
    for (int l2 = 0; l2 < 4; ++l2) {
      int z1 = bell_z(l1), x1 = bell_x(l1);
      int z2 = bell_z(l2), x2 = bell_x(l2);
      // The protocol's local half-rotations map x -> x xor z.
      int xt1 = x1 ^ z1, xt2 = x2 ^ z2;
      double w0 = s[l1] * s[l2];
      for (int gz = 0; gz < 2; ++gz) {
        for (int gf = 0; gf < 2; ++gf) {
          double w = w0 * (gz ? v : 1.0 - v) * (gf ? v : 1.0 - v);
          if ((xt1 ^ xt2 ^ gf) != 0) continue;  // parity check failed
          p_d += w;
          joint[bell_label(z1 ^ gz ^ z2, xt1)] += w;
        }
      }
    }
  }
  if (p_d <= 0.0) {
    throw std::runtime_error("hybrid_distill_map: zero success probability");
  }
  return {BellState{joint[0] / p_d, joint[1] / p_d, joint[2] / p_d,
                    joint[3] / p_d},
          p_d};
}

RateBreakdown secret_key_rate_hybrid(const HybridChainParams& cp,
                                     const RepeaterGeometry& g,
                                     const ChannelModel& ch,
                                     const DetectorModel& d,
                                     QkdProtocol protocol) {
  DissipativeGate gate{cp.p_g};
  BellState s{cp.f0, 1.0 - cp.f0, 0.0, 0.0};
  double p0 = hybrid_success_probability(cp.f0, g.segment_km(), ch, d);
  if (p0 <= 0.0) {
    return compose_qkd_rate(0.0, 1.0, 1.0, 0.0);
  }
  std::vector<double> p_distill;
  for (int i = 0; i < cp.k_rounds; ++i) {
    auto [next, p_d] = hybrid_distill_map(s, gate);
    s = next;
    p_distill.push_back(p_d);
  }
  for (int i = 0; i < cp.n_levels; ++i) {
    s = hybrid_swap_map(s, s, gate);
  }
  double r_signed = secret_fraction(s, protocol);
  std::vector<double> ps = success_probability_recursion(p0, p_distill);
  double t0 = fundamental_time(g, ch);
  double r_rep = rate_deterministic(t0, cp.n_levels, ps.back());
  return compose_qkd_rate(r_rep, 1.0, 1.0, r_signed);
}

}  // namespace qrep
