#include "qrep/rate.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qrep {

namespace {

long double binomial_ld(unsigned n, unsigned k) {
  if (k > n) return 0.0L;
  if (k > n - k) k = n - k;
  long double r = 1.0L;
  for (unsigned i = 1; i <= k; ++i) {
    r = r * (long double)(n - k + i) / (long double)i;
  }
  return r;
}

double harmonic_number(std::uint64_t m) {
  if (m <= 4096) {
    long double h = 0.0L;
    for (std::uint64_t j = 1; j <= m; ++j) h += 1.0L / (long double)j;
    return (double)h;
  }
  // Euler-Maclaurin; error O(1/m^4), negligible at this size.
  const double euler_gamma = 0.57721566490153286;
  double md = (double)m;
  return std::log(md) + euler_gamma + 1.0 / (2.0 * md) -
         1.0 / (12.0 * md * md);
}

}  // namespace

double RepeaterGeometry::segment_km() const {
  return l_total_km / (double)(1ull << n_levels);
}

double transmittivity(const ChannelModel& ch, double length_km) {
  if (length_km < 0.0) throw std::domain_error("transmittivity: negative length");
  return std::pow(10.0, -ch.attenuation_db_per_km * length_km / 10.0);
}

double fundamental_time(const RepeaterGeometry& g, const ChannelModel& ch) {
  return (double)g.round_trips * g.segment_km() / ch.light_speed_km_s;
}

double z_average_attempts(int n_levels, double p) {
  if (n_levels < 0 || n_levels > 62) {
    throw std::domain_error("z_average_attempts: nesting level out of range");
  }
  if (!(p > 0.0) || p > 1.0) {
    throw std::domain_error("z_average_attempts: p must be in (0, 1]");
  }
  if (p >= 1.0) return 1.0;
  const std::uint64_t m = 1ull << n_levels;
  if (m == 1) return 1.0 / p;

  const double l1p = std::log1p(-p);  // ln(1-p) < 0
  const double theta = -l1p;
  if (m <= 32 && (double)m * theta < 0.05) {
    // Slow segments: the tail sum below would need ~1/theta iterations, so
    // fall back to inclusion-exclusion. Extended precision absorbs the
    // alternating cancellation, which is mild in this regime (the terms are
    // amplified by at most ~C(32,16)/(m H_m) relative to the result).
    long double tot = 0.0L;
    for (std::uint64_t j = 1; j <= m; ++j) {
      long double denom = -std::expm1l((long double)j * (long double)l1p);
      long double term = binomial_ld((unsigned)m, (unsigned)j) / denom;
      tot += (j % 2 == 1) ? term : -term;
    }
    return (double)tot;
  }
  if (m > 32 && (double)m * theta <= 2.0) {
    // Many segments, each slow: expected maximum of m geometrics approaches
    // H_m/theta + 1/2.
    return harmonic_number(m) / theta + 0.5;
  }

  // Tail sum E[T] = sum_{t>=0} P(T > t) = sum_{t>=0} (1 - (1-q^t)^m):
  // positive terms, no cancellation, geometric convergence once m q^t << 1
  // (~(ln m + 40)/theta iterations in total).
  const double q = 1.0 - p;
  double tot = 0.0;
  double qt = 1.0;
  for (std::uint64_t t = 0;; ++t) {
    double term =
        (qt >= 1.0) ? 1.0 : -std::expm1((double)m * std::log1p(-qt));
    tot += term;
    if (term < 1e-17 * (tot + 1.0)) break;
    qt *= q;
    if ((t & 0xFFF) == 0xFFF) qt = std::exp((double)(t + 1) * l1p);  // refresh drift
  }
  return tot;
}

double z1_average_attempts(double p) {
  if (!(p > 0.0) || p > 1.0) {
    throw std::domain_error("z1_average_attempts: p must be in (0, 1]");
  }
  return (3.0 - 2.0 * p) / (p * (2.0 - p));
}

double a_factor(double p) {
  if (!(p > 0.0) || p > 1.0) {
    throw std::domain_error("a_factor: p must be in (0, 1]");
  }
  return 2.0 * (3.0 - 2.0 * p) / (3.0 * (2.0 - p));
}

std::vector<double> success_probability_recursion(
    double p0, const std::vector<double>& p_distill) {
  std::vector<double> out;
  out.reserve(p_distill.size() + 1);
  out.push_back(p0);
  double p = p0;
  for (double pd : p_distill) {
    p = pd / z1_average_attempts(p);
    out.push_back(p);
  }
  return out;
}

double rate_deterministic(double t0, int n_levels, double p) {
  return 1.0 / (t0 * z_average_attempts(n_levels, p));
}

double rate_probabilistic(double t0, int n_levels, int k_rounds, double p0,
                          const std::vector<double>& p_es,
                          const std::vector<double>& p_d, double a) {
  if ((int)p_es.size() != n_levels || (int)p_d.size() != k_rounds) {
    throw std::invalid_argument(
        "rate_probabilistic: need one p_es per level and one p_d per round");
  }
  double r = std::pow(2.0 / (3.0 * a), (double)(n_levels + k_rounds)) / t0;
  r *= p0;
  for (double p : p_es) r *= p;
  for (double p : p_d) r *= p;
  return r;
}

RateBreakdown compose_qkd_rate(double r_rep, double p_click, double r_sift,
                               double secret_fraction_signed, double a) {
  RateBreakdown b;
  b.r_rep = r_rep;
  b.p_click = p_click;
  b.r_sift = r_sift;
  b.secret_fraction = secret_fraction_signed > 0.0 ? secret_fraction_signed : 0.0;
  b.rate = r_rep * p_click * r_sift * b.secret_fraction;
  b.a = a;
  b.a_near_one = a > 0.999;
  return b;
}

McWaitingResult mc_waiting_time(int n_levels, double p, std::uint64_t trials,
                                std::uint64_t seed) {
  if (trials < 10000) {
    throw std::invalid_argument("mc_waiting_time: need at least 1e4 trials");
  }
  if (!(p > 0.0) || p > 1.0) {
    throw std::domain_error("mc_waiting_time: p must be in (0, 1]");
  }
  const std::uint64_t m = 1ull << n_levels;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double l1p = std::log1p(-p);
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    double worst = 1.0;
    for (std::uint64_t s = 0; s < m; ++s) {
      double slots;
      if (p >= 1.0) {
        slots = 1.0;
      } else {
        double u = uni(rng);
        if (u <= 0.0) u = 5e-324;  // avoid log(0)
        // Inverse-CDF geometric draw: P(T > t) = (1-p)^t.
        slots = std::floor(std::log(u) / l1p) + 1.0;
      }
      if (slots > worst) worst = slots;
    }
    sum += worst;
    sumsq += worst * worst;
  }
  McWaitingResult res;
  res.trials = trials;
  res.mean = sum / (double)trials;
  double var = (sumsq - sum * sum / (double)trials) / (double)(trials - 1);
  if (var < 0.0) var = 0.0;
  res.std_error = std::sqrt(var / (double)trials);
  return res;
}

}  // namespace qrep
