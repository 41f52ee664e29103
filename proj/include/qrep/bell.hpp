#pragma once

namespace qrep {

// Two-qubit state diagonal in the Bell basis. Weight order:
//   a -> phi+ = (|00> + |11>)/sqrt2
//   b -> phi- = (|00> - |11>)/sqrt2
//   c -> psi+ = (|01> + |10>)/sqrt2
//   d -> psi- = (|01> - |10>)/sqrt2
// Each basis vector carries a (z, x) label pair (z: phase bit, x: parity bit):
// phi+ = (0,0), phi- = (1,0), psi+ = (0,1), psi- = (1,1). The numeric label
// used throughout is z + 2x, so labels compose by bitwise XOR under
// entanglement swapping.
struct BellState {
  double a = 1.0, b = 0.0, c = 0.0, d = 0.0;

  double operator[](int label) const;
  double& operator[](int label);
  double sum() const { return a + b + c + d; }
};

inline int bell_label(int z, int x) { return z + 2 * x; }
inline int bell_z(int label) { return label & 1; }
inline int bell_x(int label) { return (label >> 1) & 1; }

// Weight distribution after an ideal Bell measurement joins two pairs:
// the surviving pair's label is the XOR of the two input labels.
BellState bell_convolve(const BellState& s1, const BellState& s2);

// Discordant-outcome fractions per measurement basis. For a Bell-diagonal
// state: e_x = b + d, e_y = b + c, e_z = c + d (in the Y basis one party
// flips her bit, since phi+ is anticorrelated there).
struct QberTriple {
  double e_x = 0.0, e_y = 0.0, e_z = 0.0;
};

QberTriple qber_from_bell_diagonal(const BellState& s);

double binary_entropy(double x);

// Depolarized (Werner-form) state of fidelity f0 with respect to phi+.
// Valid for f0 in [1/4, 1]; throws std::domain_error outside.
BellState depolarized_state(double f0);

enum class QkdProtocol { Bb84, SixState };

// Asymptotic secret fractions. Signed: a negative value means no key can be
// distilled; callers clamp at zero when composing rates.
double secret_fraction_bb84(const QberTriple& q);
double secret_fraction_six_state(const QberTriple& q);
double secret_fraction(const BellState& s, QkdProtocol protocol);

}  // namespace qrep
