#include "qrep/bell.hpp"

#include <cmath>
#include <stdexcept>

namespace qrep {

double BellState::operator[](int label) const {
  switch (label) {
    case 0: return a;
    case 1: return b;
    case 2: return c;
    case 3: return d;
  }
  throw std::out_of_range("BellState: label must be 0..3");
}

double& BellState::operator[](int label) {
  switch (label) {
    case 0: return a;
    case 1: return b;
    case 2: return c;
    case 3: return d;
  }
  throw std::out_of_range("BellState: label must be 0..3");
}

BellState bell_convolve(const BellState& s1, const BellState& s2) {
  BellState out{0.0, 0.0, 0.0, 0.0};
  for (int l1 = 0; l1 < 4; ++l1) {
    for (int l2 = 0; l2 < 4; ++l2) {
      int l = bell_label(bell_z(l1) ^ bell_z(l2), bell_x(l1) ^ bell_x(l2));
      out[l] += s1[l1] * s2[l2];
    }
  }
  return out;
}

QberTriple qber_from_bell_diagonal(const BellState& s) {
  return QberTriple{s.b + s.d, s.b + s.c, s.c + s.d};
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

BellState depolarized_state(double f0) {
  if (f0 < 0.25 || f0 > 1.0) {
    throw std::domain_error("depolarized_state: fidelity outside [1/4, 1]");
  }
  double rest = (1.0 - f0) / 3.0;
  return BellState{f0, rest, rest, rest};
}

double secret_fraction_bb84(const QberTriple& q) {
  return 1.0 - binary_entropy(q.e_z) - binary_entropy(q.e_x);
}

double secret_fraction_six_state(const QberTriple& q) {
  const double ex = q.e_x, ey = q.e_y, ez = q.e_z;
  if (ez <= 0.0) {
    // Limit of vanishing phase-plus-parity error: the term weighted by e_z
    // vanishes (its entropy argument stays bounded) and the remaining
    // conditional entropy collapses to a single binary term.
    return 1.0 - binary_entropy(0.5 * (ex + ey));
  }
  double t1 = ez * binary_entropy(0.5 * (1.0 + (ex - ey) / ez));
  double t2 = 0.0;
  if (ez < 1.0) {
    t2 = (1.0 - ez) *
         binary_entropy((1.0 - 0.5 * (ex + ey + ez)) / (1.0 - ez));
  }
  return 1.0 - t1 - t2 - binary_entropy(ez);
}

double secret_fraction(const BellState& s, QkdProtocol protocol) {
  QberTriple q = qber_from_bell_diagonal(s);
  return protocol == QkdProtocol::Bb84 ? secret_fraction_bb84(q)
                                       : secret_fraction_six_state(q);
}

}  // namespace qrep
