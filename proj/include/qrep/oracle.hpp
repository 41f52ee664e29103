#pragma once

#include <utility>

#include "qrep/bell.hpp"

namespace qrep {

// Brute-force references for the closed-form pair maps. Each circuit is
// played out on an explicit 16x16 two-pair density matrix with the noise
// inserted operator by operator, and the surviving pair is read back as
// Bell-basis weights. Slow but assumption-free.

// Entanglement swap with a depolarizing two-qubit gate and misread-prone
// readouts (readout reports the true outcome with probability gamma).
BellState oracle_swap_original(const BellState& s1, const BellState& s2,
                               double p_g, double gamma);

// One distillation round on two identical copies with depolarizing gates.
// Returns Bell weights of the kept pair and the parity-check success
// probability.
std::pair<BellState, double> oracle_distill_original(const BellState& s,
                                                     double p_g);

// Entanglement swap with dephasing-type gate noise: the gate leaves each
// participating qubit unflipped with probability p_c.
BellState oracle_swap_hybrid(const BellState& s1, const BellState& s2,
                             double p_c);

// One distillation round with dephasing-type gate noise.
std::pair<BellState, double> oracle_distill_hybrid(const BellState& s,
                                                   double p_c);

// Heralded-link reference: a coherent probe picks up qubit-dependent
// displacements, decoheres in the fiber, and is measured photon number by
// photon number; click-conditioned corrections are applied to the qubit
// pair. Returns the resulting pair fidelity and the herald probability,
// for comparison with the closed forms.
struct UsdLinkResult {
  double fidelity = 0.0;
  double p_success = 0.0;
};
UsdLinkResult oracle_usd_link(double s, double eta_t, double eta_d,
                              int n_max = 20);

}  // namespace qrep
