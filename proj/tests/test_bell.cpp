#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "qrep/bell.hpp"

using namespace qrep;

namespace {

double shannon4(const BellState& s) {
  double h = 0.0;
  for (int l = 0; l < 4; ++l) {
    double w = s[l];
    if (w > 0.0) h -= w * std::log2(w);
  }
  return h;
}

}  // namespace

TEST_CASE("label algebra round-trips and composes by XOR") {
  for (int z = 0; z <= 1; ++z)
    for (int x = 0; x <= 1; ++x) {
      int l = bell_label(z, x);
      CHECK(bell_z(l) == z);
      CHECK(bell_x(l) == x);
    }
  CHECK(bell_label(0, 0) == 0);
  CHECK(bell_label(1, 0) == 1);
  CHECK(bell_label(0, 1) == 2);
  CHECK(bell_label(1, 1) == 3);
}

TEST_CASE("joining pure labelled pairs XORs their labels") {
  for (int l1 = 0; l1 < 4; ++l1) {
    for (int l2 = 0; l2 < 4; ++l2) {
      BellState s1, s2;
      s1.a = s1.b = s1.c = s1.d = 0.0;
      s2 = s1;
      s1[l1] = 1.0;
      s2[l2] = 1.0;
      BellState out = bell_convolve(s1, s2);
      for (int l = 0; l < 4; ++l)
        CHECK(out[l] == doctest::Approx(l == (l1 ^ l2) ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("joining a weighted pair with itself") {
  BellState s{0.7, 0.1, 0.1, 0.1};
  BellState out = bell_convolve(s, s);
  CHECK(out.a == doctest::Approx(0.52).epsilon(1e-12));
  CHECK(out.b == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(out.c == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(out.d == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(out.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("discordant fractions per basis") {
  BellState s{0.6, 0.2, 0.15, 0.05};
  QberTriple q = qber_from_bell_diagonal(s);
  CHECK(q.e_x == doctest::Approx(0.25).epsilon(1e-14));   // b + d
  CHECK(q.e_y == doctest::Approx(0.35).epsilon(1e-14));   // b + c
  CHECK(q.e_z == doctest::Approx(0.20).epsilon(1e-14));   // c + d
}

TEST_CASE("depolarized state splits infidelity evenly") {
  BellState s = depolarized_state(0.7);
  CHECK(s.a == doctest::Approx(0.7));
  CHECK(s.b == doctest::Approx(0.1));
  CHECK(s.c == doctest::Approx(0.1));
  CHECK(s.d == doctest::Approx(0.1));
  QberTriple q = qber_from_bell_diagonal(s);
  CHECK(q.e_z == doctest::Approx(0.2).epsilon(1e-14));
  CHECK_THROWS_AS((void)depolarized_state(0.2), std::domain_error);
  CHECK_THROWS_AS((void)depolarized_state(1.1), std::domain_error);
}

TEST_CASE("binary entropy edge values and a frozen interior point") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(binary_entropy(0.11) == doctest::Approx(0.499915958164528).epsilon(1e-14));
  CHECK(binary_entropy(0.25) == binary_entropy(0.75));
}

TEST_CASE("two-basis secret fraction crosses zero near 11 percent") {
  QberTriple q1{0.11, 0.11, 0.11};
  CHECK(secret_fraction_bb84(q1) ==
        doctest::Approx(1.0 - 2.0 * 0.499915958164528).epsilon(1e-10));
  CHECK(secret_fraction_bb84(q1) > 0.0);
  QberTriple q2{0.12, 0.12, 0.12};
  CHECK(secret_fraction_bb84(q2) < 0.0);
  QberTriple q0{0.0, 0.0, 0.0};
  CHECK(secret_fraction_bb84(q0) == doctest::Approx(1.0));
}

TEST_CASE("three-basis secret fraction equals one minus the weight entropy") {
  // For Bell-diagonal states the three observed error rates determine the
  // weights, and the secret fraction reduces to 1 - H(weights).
  const BellState states[] = {
      depolarized_state(0.9),
      {0.7, 0.1, 0.1, 0.1},
      {0.85, 0.05, 0.06, 0.04},
      {0.6, 0.25, 0.1, 0.05},
      {0.95, 0.05, 0.0, 0.0},
  };
  for (const BellState& s : states) {
    double r = secret_fraction_six_state(qber_from_bell_diagonal(s));
    CHECK(r == doctest::Approx(1.0 - shannon4(s)).epsilon(1e-12));
  }
  double r_werner = secret_fraction_six_state(
      qber_from_bell_diagonal(depolarized_state(0.9)));
  CHECK(r_werner == doctest::Approx(0.3725081563386031).epsilon(1e-13));
}

TEST_CASE("three-basis reconciliation tolerates more noise than two-basis") {
  const BellState states[] = {
      depolarized_state(0.88),
      {0.8, 0.08, 0.07, 0.05},
  };
  for (const BellState& s : states) {
    QberTriple q = qber_from_bell_diagonal(s);
    CHECK(secret_fraction_six_state(q) > secret_fraction_bb84(q));
  }
}

TEST_CASE("protocol dispatch matches the direct calls") {
  BellState s{0.9, 0.04, 0.03, 0.03};
  QberTriple q = qber_from_bell_diagonal(s);
  CHECK(secret_fraction(s, QkdProtocol::Bb84) ==
        doctest::Approx(secret_fraction_bb84(q)).epsilon(1e-15));
  CHECK(secret_fraction(s, QkdProtocol::SixState) ==
        doctest::Approx(secret_fraction_six_state(q)).epsilon(1e-15));
}
