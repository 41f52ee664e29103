#pragma once

#include <utility>

#include "qrep/bell.hpp"
#include "qrep/rate.hpp"

namespace qrep {

// Repeater chain whose elementary links are heralded by unambiguous
// discrimination of coherent probe pulses and whose two-qubit gates carry
// dephasing-type noise.

struct HybridLinkParams {
  double alpha = 0.0;   // probe amplitude (dimensionless, real)
  double theta = 3.141592653589793;  // effective qubit-probe interaction phase
  double l0_km = 75.0;  // segment length

  // The link physics enters only through this combination.
  double probe_strength() const;  // alpha^2 sin^2(theta/2)
};

// Two-qubit gate whose imperfection acts as an independent phase flip on each
// participating qubit. p_g in (0, 1] is the underlying transmission-style
// quality; p_c is the probability that a given qubit escapes the flip.
struct DissipativeGate {
  double p_g = 1.0;

  double x() const;    // dephasing exponent pi (1 - p_g) / sqrt(p_g)
  double p_c() const;  // (1 + exp(-x/2)) / 2, in [1/2, 1]
};

// Fidelity of the heralded elementary pair (phase-mixture form (F, 1-F, 0, 0)).
double hybrid_initial_fidelity(const HybridLinkParams& link,
                               const ChannelModel& ch, const DetectorModel& d);
double hybrid_initial_fidelity_from_strength(double s, double eta_t,
                                             double eta_d);

// Success probability of the heralding measurement at a given target
// fidelity: 1 - (2 f0 - 1)^(eta_t eta_d / (1 + eta_t (1 - 2 eta_d))).
// Higher fidelity costs success probability; f0 = 1/2 succeeds always.
double hybrid_success_probability(double f0, double l0_km,
                                  const ChannelModel& ch,
                                  const DetectorModel& d);

// Entanglement swap with dephasing gate noise. Deterministic: the output is
// always normalized. Independent z-label and x-label flips, each with
// probability 1 - p_c, on top of the ideal label XOR.
BellState hybrid_swap_map(const BellState& left, const BellState& right,
                          const DissipativeGate& gate);

// One distillation round on two identical copies with dephasing gate noise.
// Returns the surviving normalized state and the success probability.
std::pair<BellState, double> hybrid_distill_map(const BellState& s,
                                                const DissipativeGate& gate);

struct HybridChainParams {
  double f0 = 1.0;
  double p_g = 1.0;
  int n_levels = 1;
  int k_rounds = 0;
};

// Full secret-key rate: heralded generation is probabilistic, all
// connections are deterministic, the key measurements are noiseless.
RateBreakdown secret_key_rate_hybrid(const HybridChainParams& cp,
                                     const RepeaterGeometry& g,
                                     const ChannelModel& ch,
                                     const DetectorModel& d,
                                     QkdProtocol protocol);

}  // namespace qrep
