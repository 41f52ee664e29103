#include "qrep/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrep {

ThresholdResult bisect_threshold(const std::function<bool(double)>& pred,
                                 double lo, double hi, double tol) {
  if (!(lo < hi)) throw std::invalid_argument("bisect_threshold: lo >= hi");
  if (!(tol > 0.0)) throw std::invalid_argument("bisect_threshold: tol <= 0");
  if (pred(lo)) return {ThresholdOutcome::NoConstraint, lo};
  if (!pred(hi)) return {ThresholdOutcome::Infeasible, hi};
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return {ThresholdOutcome::Value, 0.5 * (lo + hi)};
}

MaximizeResult golden_section_max(const std::function<double(double)>& f,
                                  double lo, double hi, int iters) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  MaximizeResult r;
  r.arg = (fc > fd) ? c : d;
  r.value = std::max(fc, fd);
  double mid = 0.5 * (a + b), fmid = f(mid);
  if (fmid > r.value) {
    r.arg = mid;
    r.value = fmid;
  }
  return r;
}

MaximizeResult maximize_scalar(const std::function<double(double)>& f,
                               double lo, double hi, int n_grid) {
  if (!(lo <= hi)) throw std::invalid_argument("maximize_scalar: lo > hi");
  if (n_grid < 2 || lo == hi) {
    double v = f(lo);
    return {lo, v};
  }
  int best = 0;
  double best_v = 0.0;
  std::vector<double> xs((std::size_t)n_grid);
  for (int i = 0; i < n_grid; ++i) {
    double x = lo + (hi - lo) * (double)i / (double)(n_grid - 1);
    xs[(std::size_t)i] = x;
    double v = f(x);
    if (i == 0 || v > best_v) {
      best = i;
      best_v = v;
    }
  }
  double a = xs[(std::size_t)std::max(0, best - 1)];
  double b = xs[(std::size_t)std::min(n_grid - 1, best + 1)];
  MaximizeResult refined = golden_section_max(f, a, b);
  if (refined.value >= best_v) return refined;
  return {xs[(std::size_t)best], best_v};
}

OptimizeResult maximize_axes(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<Axis>& axes, int n_grid, int passes) {
  std::vector<double> args(axes.size());
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const Axis& ax = axes[i];
    args[i] = ax.discrete ? ax.lo : 0.5 * (ax.lo + ax.hi);
  }
  double value = 0.0;
  for (int pass = 0; pass < passes; ++pass) {
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const Axis& ax = axes[i];
      if (ax.discrete) {
        double best_x = args[i], best_v = 0.0;
        bool first = true;
        for (double x = ax.lo; x <= ax.hi + 0.5; x += 1.0) {
          args[i] = std::round(x);
          double v = f(args);
          if (first || v > best_v) {
            best_x = args[i];
            best_v = v;
            first = false;
          }
        }
        args[i] = best_x;
        value = best_v;
      } else {
        double lo = ax.log10 ? std::log10(ax.lo) : ax.lo;
        double hi = ax.log10 ? std::log10(ax.hi) : ax.hi;
        auto slice = [&](double x) {
          args[i] = ax.log10 ? std::pow(10.0, x) : x;
          return f(args);
        };
        MaximizeResult r = maximize_scalar(slice, lo, hi, n_grid);
        args[i] = ax.log10 ? std::pow(10.0, r.arg) : r.arg;
        value = r.value;
      }
    }
  }
  return {args, value};
}

}  // namespace qrep
