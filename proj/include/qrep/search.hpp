#pragma once

#include <functional>
#include <string>
#include <vector>

namespace qrep {

enum class ThresholdOutcome { Value, NoConstraint, Infeasible };

struct ThresholdResult {
  ThresholdOutcome outcome = ThresholdOutcome::Infeasible;
  double value = 0.0;
};

// Smallest x in [lo, hi] with pred(x) true, assuming pred switches from
// false to true once. NoConstraint when pred holds already at lo;
// Infeasible when it fails even at hi.
ThresholdResult bisect_threshold(const std::function<bool(double)>& pred,
                                 double lo, double hi, double tol = 1e-4);

struct MaximizeResult {
  double arg = 0.0;
  double value = 0.0;
};

// Golden-section refinement of a single interior maximum.
MaximizeResult golden_section_max(const std::function<double(double)>& f,
                                  double lo, double hi, int iters = 80);

// Grid scan (n_grid points including both ends) followed by golden-section
// refinement of the bracket around the best grid point.
MaximizeResult maximize_scalar(const std::function<double(double)>& f,
                               double lo, double hi, int n_grid = 41);

struct Axis {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  bool log10 = false;    // scan in log10 space
  bool discrete = false; // integer-valued, enumerated exhaustively
};

struct OptimizeResult {
  std::vector<double> args;
  double value = 0.0;
};

// Coordinate-ascent maximization: each pass refreshes every axis in turn
// (grid plus golden sections for continuous axes, enumeration for discrete
// ones) while the others stay fixed.
OptimizeResult maximize_axes(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<Axis>& axes, int n_grid = 41, int passes = 3);

}  // namespace qrep
