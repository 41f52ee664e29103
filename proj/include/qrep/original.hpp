#pragma once

#include <utility>
#include <vector>

#include "qrep/bell.hpp"
#include "qrep/rate.hpp"

namespace qrep {

// Repeater chain with single-photon links, depolarizing two-qubit gates and
// misread-prone qubit readouts.

struct OriginalChainParams {
  double f0 = 1.0;   // elementary-pair fidelity (depolarized form)
  double p_g = 1.0;  // two-qubit gate quality
  int n_levels = 0;  // nesting depth: 2^n segments
  int k_rounds = 0;  // distillation rounds, all before any swapping
};

// Probability that an elementary attempt succeeds: photon survives the fiber.
double initial_success_probability(const ChannelModel& ch, double l0_km);

// Probability that a conclusive qubit readout reports the true outcome when
// the detector can also fire from dark counts.
double detection_gamma(const DetectorModel& d);

// Probability that both readouts of one entanglement swap are conclusive.
// Reduces to eta_d^2 without dark counts.
double swap_success_probability(const DetectorModel& d);

// Bell-diagonal map of one noisy entanglement swap: the two-qubit gate
// depolarizes with weight 1-p_g, and each of the two readouts is misreported
// with probability 1-gamma, which scrambles the correction applied to the
// surviving pair (z-label and x-label flips respectively).
BellState swap_map(const BellState& left, const BellState& right, double p_g,
                   double gamma);

// One recurrence-style distillation round on two identical copies with
// depolarizing gate noise. Returns the surviving normalized state and the
// success probability of the parity check.
std::pair<BellState, double> distill_map(const BellState& s, double p_g);

struct ChainResult {
  BellState state;
  std::vector<double> p_distill;  // success probability of each round
};

// k distillation rounds on the elementary state, then n_levels nested swaps
// of identical copies (balanced doubling tree).
ChainResult chain_evaluate(const OriginalChainParams& cp, double gamma);

// Raw key throughput before privacy amplification:
// (1/t0) r_sift (2/(3a))^(n+k) eta_d^(2(k+n+1)) p0 prod(p_d).
double raw_key_rate(double t0, int n_levels, int k_rounds, double eta_d,
                    double p0, const std::vector<double>& p_d, double a,
                    double r_sift = 1.0);

// Full secret-key rate. Perfect detectors make every connection
// deterministic (waiting-time average applies); any detection loss makes
// swaps probabilistic and switches to the lower-bound composition.
RateBreakdown secret_key_rate_original(const OriginalChainParams& cp,
                                       const RepeaterGeometry& g,
                                       const ChannelModel& ch,
                                       const DetectorModel& d,
                                       QkdProtocol protocol);

}  // namespace qrep
