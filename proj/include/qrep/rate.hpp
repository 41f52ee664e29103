#pragma once

#include <cstdint>
#include <vector>

namespace qrep {

// Fiber channel: exponential attenuation plus a finite signalling speed.
struct ChannelModel {
  double attenuation_db_per_km = 0.17;
  double light_speed_km_s = 2.0e5;  // speed of light in fiber
};

struct DetectorModel {
  double eta_d = 1.0;   // detector efficiency
  double p_dark = 0.0;  // dark-count probability per gated window
};

// Doubling architecture: the total distance is split into 2^n_levels
// elementary segments of equal length. round_trips is the number of
// segment-lengths of classical signalling needed per generation attempt:
// 2 when the pair source sits at one end of a segment, 1 when the photons
// meet in the middle.
struct RepeaterGeometry {
  double l_total_km = 600.0;
  int n_levels = 2;
  int round_trips = 2;

  double segment_km() const;
};

double transmittivity(const ChannelModel& ch, double length_km);

// Duration of one elementary generation attempt: round_trips * L0 / c.
double fundamental_time(const RepeaterGeometry& g, const ChannelModel& ch);

// Expected number of synchronized attempt slots until all 2^n segments hold a
// pair, when each segment retries independently with success probability p
// and keeps its pair once it succeeds (the maximum of 2^n geometric
// variables).
double z_average_attempts(int n_levels, double p);

// Closed form of the above for one doubling (two segments).
double z1_average_attempts(double p);

// Correction constant a(p) = 2(3-2p)/(3(2-p)) appearing in the probabilistic
// rate bound; decreases from 1 (p -> 0) to 2/3 (p = 1). Identically equal to
// (2/3) p z1_average_attempts(p).
double a_factor(double p);

// Success-probability bookkeeping across distillation rounds performed before
// any swapping: p[0] = p0 and p[i] = p_distill[i-1] / z1(p[i-1]), because each
// round consumes two pairs whose production takes z1 attempt slots on
// average. Returns the full sequence p[0..k].
std::vector<double> success_probability_recursion(
    double p0, const std::vector<double>& p_distill);

// Pair-per-second rate when every connection succeeds deterministically:
// 1 / (t0 * Z_n(p)).
double rate_deterministic(double t0, int n_levels, double p);

// Lower-bound pair rate when connections themselves are probabilistic:
// (1/t0) (2/(3a))^(n+k) p0 * prod(p_es) * prod(p_d).
double rate_probabilistic(double t0, int n_levels, int k_rounds, double p0,
                          const std::vector<double>& p_es,
                          const std::vector<double>& p_d, double a);

struct RateBreakdown {
  double r_rep = 0.0;           // long-distance pairs per second
  double p_click = 1.0;         // probability a key measurement registers
  double r_sift = 1.0;          // sifting efficiency
  double secret_fraction = 0.0; // clamped at zero
  double rate = 0.0;            // secret bits per second
  double a = 1.0;               // correction constant actually applied
  bool a_near_one = false;      // true when a > 0.999 (bound nearly saturated)
};

// rate = r_rep * p_click * r_sift * max(secret_fraction_signed, 0).
RateBreakdown compose_qkd_rate(double r_rep, double p_click, double r_sift,
                               double secret_fraction_signed, double a = 1.0);

struct McWaitingResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

// Empirical estimate of z_average_attempts: simulate 2^n segments retrying
// independently until each holds a pair, record the number of slots until the
// last one succeeds. Deterministic for a fixed seed.
McWaitingResult mc_waiting_time(int n_levels, double p, std::uint64_t trials,
                                std::uint64_t seed);

}  // namespace qrep
