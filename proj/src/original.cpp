#include "qrep/original.hpp"

#include <cmath>
#include <stdexcept>

namespace qrep {

double initial_success_probability(const ChannelModel& ch, double l0_km) {
  return transmittivity(ch, l0_km);
}

double detection_gamma(const DetectorModel& d) {
  double denom = d.eta_d + 2.0 * d.p_dark * (1.0 - d.eta_d);
  if (denom <= 0.0) {
    throw std::domain_error("detection_gamma: no conclusive events");
  }
  return (d.eta_d + d.p_dark * (1.0 - d.eta_d)) / denom;
}

double swap_success_probability(const DetectorModel& d) {
  double per = (1.0 - d.p_dark) * (d.eta_d + 2.0 * d.p_dark * (1.0 - d.eta_d));
  return per * per;
}

BellState swap_map(const BellState& left, const BellState& right, double p_g,
                   double gamma) {
  BellState ideal = bell_convolve(left, right);
  BellState out{0.0, 0.0, 0.0, 0.0};
  for (int l = 0; l < 4; ++l) {
    int z = bell_z(l), x = bell_x(l);
    double acc = 0.0;
    for (int fz = 0; fz < 2; ++fz) {
      for (int fx = 0; fx < 2; ++fx) {
        double w = (fz ? 1.0 - gamma : gamma) * (fx ? 1.0 - gamma : gamma);
        acc += w * ideal[bell_label(z ^ fz, x ^ fx)];
      }
    }
    out[l] = (1.0 - p_g) / 4.0 + p_g * acc;
  }
  return out;
}

std::pair<BellState, double> distill_map(const BellState& s, double p_g) {
  const double a = s.a, b = s.b, c = s.c, d = s.d;
  const double g2 = p_g * p_g;
  const double mix = (1.0 - g2) / 8.0;
  BellState num{g2 * (a * a + d * d) + mix, g2 * (2.0 * a * d) + mix,
                g2 * (b * b + c * c) + mix, g2 * (2.0 * b * c) + mix};
  double p_d = num.sum();
  if (p_d <= 0.0) {
    throw std::runtime_error("distill_map: zero success probability");
  }
  return {BellState{num.a / p_d, num.b / p_d, num.c / p_d, num.d / p_d}, p_d};
}

ChainResult chain_evaluate(const OriginalChainParams& cp, double gamma) {
  ChainResult res;
  res.state = depolarized_state(cp.f0);
  for (int i = 0; i < cp.k_rounds; ++i) {
    auto [next, p_d] = distill_map(res.state, cp.p_g);
    res.state = next;
    res.p_distill.push_back(p_d);
  }
  for (int i = 0; i < cp.n_levels; ++i) {
    res.state = swap_map(res.state, res.state, cp.p_g, gamma);
  }
  return res;
}

double raw_key_rate(double t0, int n_levels, int k_rounds, double eta_d,
                    double p0, const std::vector<double>& p_d, double a,
                    double r_sift) {
  if ((int)p_d.size() != k_rounds) {
    throw std::invalid_argument("raw_key_rate: need one p_d per round");
  }
  double r = r_sift / t0;
  r *= std::pow(2.0 / (3.0 * a), (double)(n_levels + k_rounds));
  r *= std::pow(eta_d, 2.0 * (double)(k_rounds + n_levels + 1));
  r *= p0;
  for (double p : p_d) r *= p;
  return r;
}

RateBreakdown secret_key_rate_original(const OriginalChainParams& cp,
                                       const RepeaterGeometry& g,
                                       const ChannelModel& ch,
                                       const DetectorModel& d,
                                       QkdProtocol protocol) {
  const double gamma = detection_gamma(d);
  ChainResult chain = chain_evaluate(cp, gamma);
  const double r_signed = secret_fraction(chain.state, protocol);

  const double t0 = fundamental_time(g, ch);
  const double p0 = initial_success_probability(ch, g.segment_km());
  std::vector<double> ps = success_probability_recursion(p0, chain.p_distill);
  const double p_final = ps.back();

  if (d.eta_d >= 1.0 && d.p_dark <= 0.0) {
    double r_rep = rate_deterministic(t0, cp.n_levels, p_final);
    return compose_qkd_rate(r_rep, 1.0, 1.0, r_signed);
  }

  const double a = a_factor(p_final);
  const double p_meas = swap_success_probability(d);
  std::vector<double> p_es(cp.n_levels, p_meas);
  std::vector<double> p_d_eff = chain.p_distill;
  for (double& p : p_d_eff) p *= p_meas;  // two-fold coincidence per round
  double r_rep = rate_probabilistic(t0, cp.n_levels, cp.k_rounds, p0, p_es,
                                    p_d_eff, a);
  const double p_click = d.eta_d * d.eta_d;
  return compose_qkd_rate(r_rep, p_click, 1.0, r_signed, a);
}

}  // namespace qrep
