#include "qrep/fock.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qrep::fock {

int occ_total(Occ o, int modes) {
  int t = 0;
  for (int m = 0; m < modes; ++m) t += occ_get(o, m);
  return t;
}

double FockStateVector::norm2() const {
  double s = 0.0;
  for (const auto& [o, a] : amp) s += std::norm(a);
  return s;
}

double DensityOperator::trace() const {
  double s = 0.0;
  for (const auto& [p, c] : entries)
    if (p.bra == p.ket) s += c.real();
  return s;
}

void DensityOperator::scale(double f) {
  for (auto& [p, c] : entries) c *= f;
}

void DensityOperator::prune(double rel_tol) {
  double mx = 0.0;
  for (const auto& [p, c] : entries) mx = std::max(mx, std::abs(c));
  if (mx <= 0.0) return;
  double cut = mx * rel_tol;
  for (auto it = entries.begin(); it != entries.end();) {
    if (std::abs(it->second) < cut)
      it = entries.erase(it);
    else
      ++it;
  }
}

double pnrd_weight(int n_seen, int n_phys, double eta) {
  if (n_seen < 0 || n_phys < 0 || n_seen > n_phys) return 0.0;
  if (eta < 0.0 || eta > 1.0)
    throw std::invalid_argument("pnrd_weight: eta outside [0, 1]");
  long double w = 1.0L;
  // binomial(n_phys, n_seen) via multiplicative loop
  for (int i = 1; i <= n_seen; ++i)
    w *= (long double)(n_phys - n_seen + i) / (long double)i;
  for (int i = 0; i < n_seen; ++i) w *= (long double)eta;
  for (int i = 0; i < n_phys - n_seen; ++i) w *= (long double)(1.0 - eta);
  return (double)w;
}

std::vector<double> pnrd_operator(const PnrdElement& elem, int n_max) {
  std::vector<double> d((std::size_t)n_max + 1, 0.0);
  for (int t = 0; t <= n_max; ++t) d[(std::size_t)t] = pnrd_weight(elem.n, t, elem.eta);
  return d;
}

void validate_isometry(const LinearNetwork& net) {
  std::vector<int> listed;
  for (const auto& [m, row] : net.rows) listed.push_back(m);
  for (std::size_t i = 0; i < listed.size(); ++i) {
    for (std::size_t j = i; j < listed.size(); ++j) {
      cplx inner = 0.0;
      for (const auto& t1 : net.rows.at(listed[i]))
        for (const auto& t2 : net.rows.at(listed[j]))
          if (t1.mode == t2.mode) inner += std::conj(t1.coeff) * t2.coeff;
      double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(inner - want) > 1e-10)
        throw std::invalid_argument(
            "validate_isometry: rows " + std::to_string(listed[i]) + " and " +
            std::to_string(listed[j]) + " not orthonormal");
    }
  }
}

namespace {

// Full expansion of one occupation through the substitution rows.
std::unordered_map<Occ, cplx> expand_full(const LinearNetwork& net, Occ in) {
  std::unordered_map<Occ, cplx> cur;
  cur[0] = cplx(1.0, 0.0);
  for (int m = 0; m < net.modes; ++m) {
    int n = occ_get(in, m);
    if (n == 0) continue;
    std::vector<ModeTerm> self{{m, cplx(1.0, 0.0)}};
    auto it = net.rows.find(m);
    const std::vector<ModeTerm>& row = (it != net.rows.end()) ? it->second : self;
    long double fact = 1.0L;
    for (int rep = 1; rep <= n; ++rep) fact *= rep;
    for (int rep = 0; rep < n; ++rep) {
      std::unordered_map<Occ, cplx> nxt;
      nxt.reserve(cur.size() * row.size());
      for (const auto& [o, a] : cur) {
        for (const auto& t : row) {
          int cnt = occ_get(o, t.mode);
          if (cnt + 1 > (int)kOccMask)
            throw std::overflow_error("expand_full: mode occupation overflow");
          nxt[occ_with(o, t.mode, cnt + 1)] +=
              a * t.coeff * std::sqrt((double)(cnt + 1));
        }
      }
      cur = std::move(nxt);
    }
    double inv = 1.0 / std::sqrt((double)fact);
    for (auto& [o, a] : cur) a *= inv;
  }
  return cur;
}

}  // namespace

FockStateVector apply_linear_network(const FockStateVector& v,
                                     const LinearNetwork& net) {
  validate_isometry(net);
  FockStateVector out;
  out.modes = net.modes;
  out.n_max = v.n_max;
  out.n_total_max = v.n_total_max;
  for (const auto& [o, a] : v.amp) {
    auto exp = expand_full(net, o);
    for (const auto& [eo, ea] : exp) {
      bool keep = occ_total(eo, net.modes) <= out.n_total_max;
      for (int m = 0; keep && m < net.modes; ++m)
        if (occ_get(eo, m) > out.n_max) keep = false;
      if (keep) out.amp[eo] += a * ea;
    }
  }
  return out;
}

DensityOperator apply_linear_network(const DensityOperator& rho,
                                     const LinearNetwork& net) {
  validate_isometry(net);
  DensityOperator out;
  out.modes = net.modes;
  out.n_max = rho.n_max;
  out.n_total_max = rho.n_total_max;
  std::unordered_map<Occ, std::unordered_map<Occ, cplx>> memo;
  auto expand = [&](Occ o) -> const std::unordered_map<Occ, cplx>& {
    auto it = memo.find(o);
    if (it == memo.end()) it = memo.emplace(o, expand_full(net, o)).first;
    return it->second;
  };
  for (const auto& [p, c] : rho.entries) {
    const auto& eb = expand(p.bra);
    const auto& ek = expand(p.ket);
    for (const auto& [ob, ab] : eb)
      for (const auto& [ok, ak] : ek)
        out.entries[{ob, ok}] += c * ab * std::conj(ak);
  }
  return out;
}

MeasureResult measure_pattern(const DensityOperator& rho,
                              const std::vector<MeasuredMode>& pattern) {
  bool measured[kMaxModes] = {};
  for (const auto& mm : pattern) {
    if (mm.mode < 0 || mm.mode >= rho.modes)
      throw std::invalid_argument("measure_pattern: mode out of range");
    measured[mm.mode] = true;
  }
  std::vector<int> kept;
  for (int m = 0; m < rho.modes; ++m)
    if (!measured[m]) kept.push_back(m);

  MeasureResult res;
  res.conditional.modes = (int)kept.size();
  res.conditional.n_max = rho.n_max;
  res.conditional.n_total_max = rho.n_total_max;
  for (const auto& [p, c] : rho.entries) {
    double w = 1.0;
    bool ok = true;
    for (const auto& mm : pattern) {
      int nb = occ_get(p.bra, mm.mode);
      if (nb != occ_get(p.ket, mm.mode)) {
        ok = false;
        break;
      }
      w *= pnrd_weight(mm.elem.n, nb, mm.elem.eta);
      if (w == 0.0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Occ nb2 = 0, nk2 = 0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      nb2 = occ_with(nb2, (int)i, occ_get(p.bra, kept[i]));
      nk2 = occ_with(nk2, (int)i, occ_get(p.ket, kept[i]));
    }
    res.conditional.entries[{nb2, nk2}] += c * w;
  }
  res.probability = res.conditional.trace();
  if (res.probability > 0.0)
    res.conditional.scale(1.0 / res.probability);
  else
    res.conditional.entries.clear();
  return res;
}

FockStateVector coherent_state(cplx amplitude, int n_max) {
  FockStateVector v;
  v.modes = 1;
  v.n_max = n_max;
  v.n_total_max = n_max;
  double a2 = std::norm(amplitude);
  cplx c = std::exp(-0.5 * a2);
  double covered = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) c *= amplitude / std::sqrt((double)n);
    v.amp[occ_with(0, 0, n)] = c;
    covered += std::norm(c);
  }
  if (1.0 - covered > 1e-12)
    throw std::invalid_argument("coherent_state: truncation loses more than 1e-12 weight");
  return v;
}

ClickStats qkd_click_and_error(const DensityOperator& rho, PauliBasis basis,
                               double eta) {
  if (rho.modes != 4)
    throw std::invalid_argument("qkd_click_and_error: state must have 4 modes");
  const double s2 = 1.0 / std::sqrt(2.0);
  const cplx i1(0.0, 1.0);
  LinearNetwork net;
  net.modes = 4;
  switch (basis) {
    case PauliBasis::Z:
      break;
    case PauliBasis::X:
      net.rows[0] = {{0, s2}, {1, s2}};
      net.rows[1] = {{0, s2}, {1, -s2}};
      net.rows[2] = {{2, s2}, {3, s2}};
      net.rows[3] = {{2, s2}, {3, -s2}};
      break;
    case PauliBasis::Y:
      net.rows[0] = {{0, s2}, {1, s2}};
      net.rows[1] = {{0, i1 * s2}, {1, -i1 * s2}};
      net.rows[2] = {{2, s2}, {3, s2}};
      net.rows[3] = {{2, -i1 * s2}, {3, i1 * s2}};
      break;
  }
  DensityOperator rot = net.rows.empty() ? rho : apply_linear_network(rho, net);

  auto pattern_prob = [&](int n0, int n1, int n2, int n3) {
    std::vector<MeasuredMode> pat = {
        {0, {n0, eta}}, {1, {n1, eta}}, {2, {n2, eta}}, {3, {n3, eta}}};
    return measure_pattern(rot, pat).probability;
  };
  double ok1 = pattern_prob(1, 0, 1, 0);
  double ok2 = pattern_prob(0, 1, 0, 1);
  double er1 = pattern_prob(1, 0, 0, 1);
  double er2 = pattern_prob(0, 1, 1, 0);
  ClickStats st;
  st.p_click = ok1 + ok2 + er1 + er2;
  st.p_err = er1 + er2;
  st.qber = (st.p_click > 0.0) ? st.p_err / st.p_click : 0.0;
  return st;
}

SubstitutionExpander::SubstitutionExpander(LinearNetwork net,
                                           std::vector<int> measured,
                                           std::vector<int> kept)
    : net_(std::move(net)),
      measured_(std::move(measured)),
      kept_(std::move(kept)) {}

const SubstitutionExpander::Grouped& SubstitutionExpander::expand(Occ in) {
  auto it = cache_.find(in);
  if (it != cache_.end()) return it->second;
  auto full = expand_full(net_, in);
  Grouped g;
  for (const auto& [o, a] : full) {
    Occ mo = 0, ko = 0;
    for (std::size_t i = 0; i < measured_.size(); ++i)
      mo = occ_with(mo, (int)i, occ_get(o, measured_[i]));
    for (std::size_t i = 0; i < kept_.size(); ++i)
      ko = occ_with(ko, (int)i, occ_get(o, kept_[i]));
    g[mo][ko] += a;
  }
  return cache_.emplace(in, std::move(g)).first->second;
}

}  // namespace qrep::fock
