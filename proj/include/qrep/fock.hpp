#pragma once

#include <complex>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qrep::fock {

using cplx = std::complex<double>;

// Occupation-number list packed five bits per mode: up to 12 modes, up to 31
// photons per mode.
using Occ = std::uint64_t;
constexpr int kOccBits = 5;
constexpr std::uint64_t kOccMask = 31;
constexpr int kMaxModes = 12;

inline int occ_get(Occ o, int mode) {
  return (int)((o >> (kOccBits * mode)) & kOccMask);
}
inline Occ occ_with(Occ o, int mode, int n) {
  int sh = kOccBits * mode;
  return (o & ~(kOccMask << sh)) | ((Occ)n << sh);
}
int occ_total(Occ o, int modes);

struct FockStateVector {
  int modes = 1;
  int n_max = 6;        // per-mode truncation
  int n_total_max = 6;  // global photon bound
  std::unordered_map<Occ, cplx> amp;

  double norm2() const;
};

struct OccPair {
  Occ bra = 0, ket = 0;
  bool operator==(const OccPair&) const = default;
};
struct OccPairHash {
  std::size_t operator()(const OccPair& p) const {
    std::uint64_t h = p.bra * 0x9e3779b97f4a7c15ull;
    h ^= p.ket + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return (std::size_t)h;
  }
};

struct DensityOperator {
  int modes = 1;
  int n_max = 6;
  int n_total_max = 6;
  std::unordered_map<OccPair, cplx, OccPairHash> entries;

  double trace() const;
  void scale(double f);
  // Drop entries below rel_tol times the largest magnitude.
  void prune(double rel_tol);
};

// Photon-counting outcome n with detector efficiency eta.
struct PnrdElement {
  int n = 0;
  double eta = 1.0;
};

double pnrd_weight(int n_seen, int n_phys, double eta);

// Diagonal weights of the counting outcome on photon numbers t = 0..n_max.
std::vector<double> pnrd_operator(const PnrdElement& elem, int n_max);

// Mode map given as substitution rows: the creation operator of each listed
// mode is replaced by the given combination of creation operators. Modes
// without a row are untouched.
struct ModeTerm {
  int mode;
  cplx coeff;
};
struct LinearNetwork {
  int modes = 1;
  std::unordered_map<int, std::vector<ModeTerm>> rows;
};

// Throws std::invalid_argument unless the listed rows are pairwise
// orthonormal within 1e-10.
void validate_isometry(const LinearNetwork& net);

FockStateVector apply_linear_network(const FockStateVector& v,
                                     const LinearNetwork& net);
DensityOperator apply_linear_network(const DensityOperator& rho,
                                     const LinearNetwork& net);

// Photon-count conditioning: probability of seeing the listed counts on the
// listed modes, and the normalized conditional state on the remaining modes
// (mode indices are compacted in ascending order of the surviving modes).
struct MeasuredMode {
  int mode;
  PnrdElement elem;
};
struct MeasureResult {
  double probability = 0.0;
  DensityOperator conditional;
};
MeasureResult measure_pattern(const DensityOperator& rho,
                              const std::vector<MeasuredMode>& pattern);

FockStateVector coherent_state(cplx amplitude, int n_max);

enum class PauliBasis { X, Y, Z };

struct ClickStats {
  double p_click = 0.0;
  double p_err = 0.0;
  double qber = 0.0;
};

// Key measurement on a dual-rail pair [a_h, a_v, b_h, b_v]: both parties see
// exactly one photon, discordant ports count as errors (in the Y basis one
// party flips, folded into the port phasing).
ClickStats qkd_click_and_error(const DensityOperator& rho, PauliBasis basis,
                               double eta);

// Expansion of input occupations through substitution rows, grouped by the
// occupation landing on the measured modes; results are cached per input.
class SubstitutionExpander {
 public:
  using KeptAmp = std::unordered_map<Occ, cplx>;
  using Grouped = std::unordered_map<Occ, KeptAmp>;

  SubstitutionExpander(LinearNetwork net, std::vector<int> measured,
                       std::vector<int> kept);
  const Grouped& expand(Occ in);

 private:
  LinearNetwork net_;
  std::vector<int> measured_, kept_;
  std::unordered_map<Occ, Grouped> cache_;
};

}  // namespace qrep::fock
