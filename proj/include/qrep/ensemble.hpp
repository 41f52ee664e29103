#pragma once

#include <vector>

#include "qrep/fock.hpp"
#include "qrep/rate.hpp"

namespace qrep {

// Repeater chain built from heralded memory-photon pair sources: a two-mode
// pair emitter entangles a stored excitation with a flying photon, a
// beam-splitter network with two auxiliary single photons and two detector
// clicks heralds the local pair, and every later join is a linear-optics
// two-photon measurement. Detector dark counts are not modelled for this
// architecture; only efficiencies enter.

struct EnsembleParams {
  double p = 1e-3;         // pair-emission parameter of the source, in [0, 0.1]
  double q = 1.0;          // emission probability of each heralding photon
  double r_split = 0.5;    // tap reflectivity routing flying modes to the herald
  double eta_m = 1.0;      // memory write-read efficiency
  double gamma_rep = 5e7;  // source repetition rate, attempts per second
};

struct MixtureBranch {
  double weight = 1.0;
  fock::FockStateVector vec;  // deliberately unnormalized
};

// Emission of the memory/photon pair source as an incoherent list of pure
// branches over [mem_h, mem_v, ph_h, ph_v]: branch m holds m pairs and
// carries total weight (1-p) p^m once the vector norm is folded in, so the
// list trace is 1 - p^3 (the three-pair tail is dropped).
std::vector<MixtureBranch> spdc_state(double p);

// Single heralding photon: vacuum with weight 1-q, one photon with weight q.
std::vector<MixtureBranch> single_photon_state(double q);

struct HeraldedSource {
  double p0_s = 0.0;            // herald probability per source shot
  fock::DensityOperator state;  // [mem_h, mem_v, out_h, out_v], normalized
};

// Local memory-photon pair conditioned on the two-click herald.
HeraldedSource local_pair_source(const EnsembleParams& pr,
                                 const DetectorModel& d);

struct JoinResult {
  double p_success = 0.0;
  fock::DensityOperator state;  // [a_h, a_v, b_h, b_v], normalized
};

// Two heralded sources fire their flying modes through half a segment each;
// a central two-photon measurement fuses the far memories.
JoinResult distribute_link(const HeraldedSource& src, double l0_km,
                           const ChannelModel& ch, const DetectorModel& d,
                           const EnsembleParams& pr);

// Fuse the right end of a chain state with the left end of its neighbour by
// a local two-photon measurement after memory readout.
JoinResult swap_level(const fock::DensityOperator& state,
                      const DetectorModel& d, const EnsembleParams& pr);

struct EnsembleChainResult {
  double p0_s = 0.0;           // herald probability of one local pair
  double p0 = 0.0;             // segment success probability
  std::vector<double> p_swap;  // per-level swap success probabilities
  double p_click = 0.0;        // both-ends key-click probability
  double e_z = 0.0;
  double e_x = 0.0;
  fock::DensityOperator state;  // final long-distance pair
};

EnsembleChainResult ensemble_chain(const EnsembleParams& pr,
                                   const RepeaterGeometry& g,
                                   const ChannelModel& ch,
                                   const DetectorModel& d);

struct EnsembleRateResult {
  RateBreakdown breakdown;
  EnsembleChainResult chain;
  double t0 = 0.0;         // signalling time per segment attempt
  double t0_source = 0.0;  // average time to herald one local pair
};

// Secret-key rate with two-basis reconciliation. The photons of one segment
// meet in the middle, so one segment-length of signalling per attempt is
// used regardless of the round_trips field of the geometry.
EnsembleRateResult secret_key_rate_ensemble(const EnsembleParams& pr,
                                            const RepeaterGeometry& g,
                                            const ChannelModel& ch,
                                            const DetectorModel& d);

}  // namespace qrep
