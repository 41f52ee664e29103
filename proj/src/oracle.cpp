#include "qrep/oracle.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "qrep/fock.hpp"

namespace qrep {

namespace {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;    // row-major 2x2
using Mat4 = std::array<cplx, 16>;   // row-major 4x4
using Mat16 = std::array<cplx, 256>; // row-major 16x16

// Qubit q (0 = leftmost) of a 4-qubit basis index.
inline int bit4(int idx, int q) { return (idx >> (3 - q)) & 1; }

const Mat2 kI2{1.0, 0.0, 0.0, 1.0};
const Mat2 kX{0.0, 1.0, 1.0, 0.0};
const Mat2 kZ{1.0, 0.0, 0.0, -1.0};

Mat2 mul2(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r[(std::size_t)(2 * i + j)] += a[(std::size_t)(2 * i + k)] * b[(std::size_t)(2 * k + j)];
  return r;
}

Mat4 kron22(const Mat2& a, const Mat2& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      r[(std::size_t)(4 * i + j)] =
          a[(std::size_t)(2 * (i >> 1) + (j >> 1))] * b[(std::size_t)(2 * (i & 1) + (j & 1))];
  return r;
}

Mat4 mul4(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < 4; ++k) s += a[(std::size_t)(4 * i + k)] * b[(std::size_t)(4 * k + j)];
      r[(std::size_t)(4 * i + j)] = s;
    }
  return r;
}

Mat4 adj4(const Mat4& a) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[(std::size_t)(4 * i + j)] = std::conj(a[(std::size_t)(4 * j + i)]);
  return r;
}

Mat16 mul16(const Mat16& a, const Mat16& b) {
  Mat16 r{};
  for (int i = 0; i < 16; ++i)
    for (int k = 0; k < 16; ++k) {
      cplx aik = a[(std::size_t)(16 * i + k)];
      if (aik == cplx(0.0, 0.0)) continue;
      for (int j = 0; j < 16; ++j) r[(std::size_t)(16 * i + j)] += aik * b[(std::size_t)(16 * k + j)];
    }
  return r;
}

Mat16 adj16(const Mat16& a) {
  Mat16 r{};
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) r[(std::size_t)(16 * i + j)] = std::conj(a[(std::size_t)(16 * j + i)]);
  return r;
}

Mat16 conj16(const Mat16& u, const Mat16& rho) {
  return mul16(mul16(u, rho), adj16(u));
}

// Single-qubit operator embedded at position pos of four qubits.
Mat16 op_on(const Mat2& u, int pos) {
  Mat16 r{};
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      bool diag = true;
      for (int q = 0; q < 4 && diag; ++q)
        if (q != pos && bit4(i, q) != bit4(j, q)) diag = false;
      if (!diag) continue;
      r[(std::size_t)(16 * i + j)] = u[(std::size_t)(2 * bit4(i, pos) + bit4(j, pos))];
    }
  return r;
}

Mat16 cnot16(int ctrl, int tgt) {
  Mat16 r{};
  for (int j = 0; j < 16; ++j) {
    int i = j;
    if (bit4(j, ctrl) == 1) i = j ^ (1 << (3 - tgt));
    r[(std::size_t)(16 * i + j)] = 1.0;
  }
  return r;
}

// Bell vectors in label order [phi+, phi-, psi+, psi-].
const double kS2 = 1.0 / std::sqrt(2.0);
const std::array<std::array<cplx, 4>, 4> kBellVec{{
    {kS2, 0.0, 0.0, kS2},
    {kS2, 0.0, 0.0, -kS2},
    {0.0, kS2, kS2, 0.0},
    {0.0, kS2, -kS2, 0.0},
}};

Mat4 bell_rho4(const BellState& s) {
  Mat4 r{};
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        r[(std::size_t)(4 * i + j)] += s[l] * kBellVec[(std::size_t)l][(std::size_t)i] *
                          std::conj(kBellVec[(std::size_t)l][(std::size_t)j]);
  return r;
}

Mat16 kron44(const Mat4& a, const Mat4& b) {
  Mat16 r{};
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      r[(std::size_t)(16 * i + j)] =
          a[(std::size_t)(4 * (i >> 2) + (j >> 2))] * b[(std::size_t)(4 * (i & 3) + (j & 3))];
  return r;
}

// Partial trace keeping qubits k0 < k1 (in that order).
Mat4 trace_keep(const Mat16& r, int k0, int k1) {
  int o0 = -1, o1 = -1;
  for (int q = 0; q < 4; ++q)
    if (q != k0 && q != k1) (o0 < 0 ? o0 : o1) = q;
  Mat4 red{};
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      if (bit4(i, o0) != bit4(j, o0) || bit4(i, o1) != bit4(j, o1)) continue;
      int bi = (bit4(i, k0) << 1) | bit4(i, k1);
      int bj = (bit4(j, k0) << 1) | bit4(j, k1);
      red[(std::size_t)(4 * bi + bj)] += r[(std::size_t)(16 * i + j)];
    }
  return red;
}

BellState bell_coeffs(const Mat4& rho) {
  BellState s{};
  for (int l = 0; l < 4; ++l) {
    cplx acc = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        acc += std::conj(kBellVec[(std::size_t)l][(std::size_t)i]) * rho[(std::size_t)(4 * i + j)] *
               kBellVec[(std::size_t)l][(std::size_t)j];
    s[l] = acc.real();
  }
  return s;
}

// Depolarizing-failure branch of a gate on (q_a, q_b): those two qubits are
// replaced by the maximally mixed state, the others keep their reduced state.
Mat16 depolarized_on(const Mat16& rho, int q_a, int q_b) {
  int o0 = -1, o1 = -1;
  for (int q = 0; q < 4; ++q)
    if (q != q_a && q != q_b) (o0 < 0 ? o0 : o1) = q;
  Mat4 red = trace_keep(rho, o0, o1);
  Mat16 dep{};
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      if (bit4(i, q_a) != bit4(j, q_a) || bit4(i, q_b) != bit4(j, q_b)) continue;
      int bi = (bit4(i, o0) << 1) | bit4(i, o1);
      int bj = (bit4(j, o0) << 1) | bit4(j, o1);
      dep[(std::size_t)(16 * i + j)] = 0.25 * red[(std::size_t)(4 * bi + bj)];
    }
  return dep;
}

const Mat2 kPp{0.5, 0.5, 0.5, 0.5};    // |+><+|
const Mat2 kPm{0.5, -0.5, -0.5, 0.5};  // |-><-|
const Mat2 kP0{1.0, 0.0, 0.0, 0.0};
const Mat2 kP1{0.0, 0.0, 0.0, 1.0};

// Correction on the surviving pair's second qubit for reported outcomes
// (x-readout, z-readout); chosen so the noiseless swap of two phi+ pairs
// returns phi+.
const Mat2& correction(int rs, int rt) {
  static const Mat2 kZX = mul2(kZ, kX);
  if (rs == 0 && rt == 0) return kI2;
  if (rs == 1 && rt == 0) return kZ;
  if (rs == 0 && rt == 1) return kX;
  return kZX;
}

BellState swap_dense(const BellState& s1, const BellState& s2,
                     bool depolarizing, double par, double gamma) {
  Mat16 rho = kron44(bell_rho4(s1), bell_rho4(s2));
  Mat16 cx = cnot16(1, 2);
  Mat16 rho_t;
  if (depolarizing) {
    Mat16 ideal = conj16(cx, rho);
    Mat16 dep = depolarized_on(rho, 1, 2);
    for (std::size_t i = 0; i < 256; ++i) rho_t[i] = par * ideal[i] + (1.0 - par) * dep[i];
  } else {
    // dephasing gate: independent Z on the control and X on the target,
    // each evaded with probability par, before the ideal gate
    Mat16 mixed{};
    Mat16 z1 = op_on(kZ, 1), x2 = op_on(kX, 2);
    for (int ez = 0; ez <= 1; ++ez)
      for (int ex = 0; ex <= 1; ++ex) {
        double w = (ez ? 1.0 - par : par) * (ex ? 1.0 - par : par);
        Mat16 t = rho;
        if (ez) t = conj16(z1, t);
        if (ex) t = conj16(x2, t);
        for (std::size_t i = 0; i < 256; ++i) mixed[i] += w * t[i];
      }
    rho_t = conj16(cx, mixed);
  }

  const std::array<const Mat2*, 2> px{&kPp, &kPm};
  const std::array<const Mat2*, 2> pz{&kP0, &kP1};
  Mat4 out{};
  for (int si = 0; si <= 1; ++si) {
    for (int ti = 0; ti <= 1; ++ti) {
      Mat16 m = mul16(op_on(*px[(std::size_t)si], 1), op_on(*pz[(std::size_t)ti], 2));
      Mat16 sub = conj16(m, rho_t);
      Mat4 red = trace_keep(sub, 0, 3);
      for (int fs = 0; fs <= 1; ++fs) {
        for (int ft = 0; ft <= 1; ++ft) {
          double w = (fs ? 1.0 - gamma : gamma) * (ft ? 1.0 - gamma : gamma);
          if (w == 0.0) continue;
          Mat4 cf = kron22(kI2, correction(si ^ fs, ti ^ ft));
          Mat4 fixed = mul4(mul4(cf, red), adj4(cf));
          for (std::size_t i = 0; i < 16; ++i) out[i] += w * fixed[i];
        }
      }
    }
  }
  return bell_coeffs(out);
}

std::pair<BellState, double> distill_dense(const BellState& s,
                                           bool depolarizing, double par) {
  // exp(-i pi/4 X) on the first lab's qubits, its adjoint on the second's
  const Mat2 ra{kS2, cplx(0.0, -kS2), cplx(0.0, -kS2), kS2};
  const Mat2 rb{kS2, cplx(0.0, kS2), cplx(0.0, kS2), kS2};
  Mat16 rho = kron44(bell_rho4(s), bell_rho4(s));
  Mat16 rot = mul16(mul16(op_on(ra, 0), op_on(rb, 1)),
                    mul16(op_on(ra, 2), op_on(rb, 3)));
  rho = conj16(rot, rho);

  auto noisy_cnot = [&](const Mat16& r, int src, int tgt) {
    Mat16 u = cnot16(src, tgt);
    if (depolarizing) {
      Mat16 ideal = conj16(u, r);
      Mat16 dep = depolarized_on(r, src, tgt);
      Mat16 out;
      for (std::size_t i = 0; i < 256; ++i) out[i] = par * ideal[i] + (1.0 - par) * dep[i];
      return out;
    }
    Mat16 mixed{};
    Mat16 zs = op_on(kZ, src), xt = op_on(kX, tgt);
    for (int ez = 0; ez <= 1; ++ez)
      for (int ex = 0; ex <= 1; ++ex) {
        double w = (ez ? 1.0 - par : par) * (ex ? 1.0 - par : par);
        Mat16 t = r;
        if (ez) t = conj16(zs, t);
        if (ex) t = conj16(xt, t);
        for (std::size_t i = 0; i < 256; ++i) mixed[i] += w * t[i];
      }
    return conj16(u, mixed);
  };
  rho = noisy_cnot(rho, 0, 2);
  rho = noisy_cnot(rho, 1, 3);

  Mat4 out{};
  for (int o = 0; o <= 1; ++o) {
    const Mat2& po = o ? kP1 : kP0;
    Mat16 m = mul16(op_on(po, 2), op_on(po, 3));
    Mat16 sub = conj16(m, rho);
    Mat4 red = trace_keep(sub, 0, 1);
    for (std::size_t i = 0; i < 16; ++i) out[i] += red[i];
  }
  double pd = 0.0;
  for (int i = 0; i < 4; ++i) pd += out[(std::size_t)(4 * i + i)].real();
  if (pd > 0.0)
    for (auto& c : out) c /= pd;
  return {bell_coeffs(out), pd};
}

}  // namespace

BellState oracle_swap_original(const BellState& s1, const BellState& s2,
                               double p_g, double gamma) {
  return swap_dense(s1, s2, true, p_g, gamma);
}

std::pair<BellState, double> oracle_distill_original(const BellState& s,
                                                     double p_g) {
  return distill_dense(s, true, p_g);
}

BellState oracle_swap_hybrid(const BellState& s1, const BellState& s2,
                             double p_c) {
  return swap_dense(s1, s2, false, p_c, 1.0);
}

std::pair<BellState, double> oracle_distill_hybrid(const BellState& s,
                                                   double p_c) {
  return distill_dense(s, false, p_c);
}

UsdLinkResult oracle_usd_link(double s, double eta_t, double eta_d,
                              int n_max) {
  if (!(s >= 0.0)) throw std::invalid_argument("oracle_usd_link: s < 0");
  if (!(eta_t >= 0.0 && eta_t <= 1.0) || !(eta_d >= 0.0 && eta_d <= 1.0))
    throw std::invalid_argument("oracle_usd_link: efficiency outside [0, 1]");
  if (n_max < 1 || n_max > (int)fock::kOccMask)
    throw std::invalid_argument("oracle_usd_link: n_max out of range");

  using fock::Occ;
  const cplx beta(0.0, std::sqrt(2.0 * eta_t * s));
  const double pmix = 0.5 * (1.0 + std::exp(-2.0 * (1.0 - eta_t) * s));

  // modes: 0 qubit A, 1 qubit B, 2 first probe quadrant, 3 second
  auto coherent_on = [&](std::unordered_map<Occ, cplx> v, int mode,
                         cplx amp) {
    std::unordered_map<Occ, cplx> out;
    double pref = std::exp(-0.5 * std::norm(amp));
    for (const auto& [o, a] : v) {
      cplx c = pref;
      for (int n = 0; n <= n_max; ++n) {
        if (n > 0) c *= amp / std::sqrt((double)n);
        if (std::abs(c) < 1e-18) {
          if (n > 0) break;
          continue;
        }
        out[fock::occ_with(o, mode, n)] += a * c;
      }
    }
    return out;
  };

  struct Component {
    int z1, z2;
    cplx a1, a2;
    int sign;
  };
  const std::array<Component, 4> comps{{{0, 0, 0.0, beta, +1},
                                        {1, 1, 0.0, -beta, -1},
                                        {0, 1, -beta, 0.0, +1},
                                        {1, 0, beta, 0.0, -1}}};

  Mat4 rho{};
  double p0 = 0.0;
  for (auto [sign, w] : {std::pair<int, double>{+1, pmix},
                         std::pair<int, double>{-1, 1.0 - pmix}}) {
    std::unordered_map<Occ, cplx> vec;
    for (const auto& cm : comps) {
      double s2 = (cm.sign == 1 || sign == 1) ? 1.0 : -1.0;
      std::unordered_map<Occ, cplx> v;
      Occ base = fock::occ_with(fock::occ_with(0, 0, cm.z1), 1, cm.z2);
      v[base] = 0.5 * s2;
      v = coherent_on(std::move(v), 2, cm.a1);
      v = coherent_on(std::move(v), 3, cm.a2);
      for (const auto& [o, a] : v) vec[o] += a;
    }
    // group by probe photon numbers
    std::unordered_map<Occ, std::unordered_map<int, cplx>> groups;
    for (const auto& [o, a] : vec) {
      Occ mo = fock::occ_with(fock::occ_with(0, 0, fock::occ_get(o, 2)), 1,
                              fock::occ_get(o, 3));
      int ko = (fock::occ_get(o, 0) << 1) | fock::occ_get(o, 1);
      groups[mo][ko] += a;
    }
    for (int first_det = 1; first_det >= 0; --first_det) {
      for (int n = 1; n <= n_max; ++n) {
        int want0 = first_det ? n : 0;
        int want1 = first_det ? 0 : n;
        for (const auto& [mo, kv] : groups) {
          double wt = fock::pnrd_weight(want0, fock::occ_get(mo, 0), eta_d) *
                      fock::pnrd_weight(want1, fock::occ_get(mo, 1), eta_d);
          if (wt == 0.0) continue;
          double norm_kv = 0.0;
          for (const auto& [kb, ab] : kv) {
            norm_kv += std::norm(ab);
            for (const auto& [kk, ak] : kv) {
              double ph = 1.0;
              if (n % 2 == 1)
                ph = ((kb >> 1) & 1 ? -1.0 : 1.0) * ((kk >> 1) & 1 ? -1.0 : 1.0);
              int cb = first_det ? (kb ^ 2) : kb;  // click family relabels qubit A
              int ck = first_det ? (kk ^ 2) : kk;
              rho[(std::size_t)(4 * cb + ck)] += w * wt * ph * ab * std::conj(ak);
            }
          }
          p0 += w * wt * norm_kv;
        }
      }
    }
  }
  double tr = 0.0;
  for (int i = 0; i < 4; ++i) tr += rho[(std::size_t)(4 * i + i)].real();
  UsdLinkResult res;
  res.p_success = p0;
  if (tr > 0.0)
    res.fidelity = 0.5 *
                   (rho[0] + rho[15] + rho[3] + rho[12]).real() / tr;
  return res;
}

}  // namespace qrep
