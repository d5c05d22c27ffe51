#pragma once

#include <cmath>
#include <functional>

namespace bswsn::optim {

// Golden-section maximization on [lo, hi]; assumes unimodality inside the
// bracket. Deterministic fixed-iteration variant.
inline double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double tol = 1e-12, int max_iter = 200) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Coarse scan to bracket the global maximum, then golden-section inside the
// winning cell. Robust when the objective is only piecewise unimodal.
inline double scan_golden_max(const std::function<double(double)>& f, double lo, double hi,
                              int scan_points = 64, double tol = 1e-12) {
  if (scan_points < 3) scan_points = 3;
  double best_x = lo, best_f = f(lo);
  const double h = (hi - lo) / (scan_points - 1);
  for (int i = 1; i < scan_points; ++i) {
    const double x = (i == scan_points - 1) ? hi : lo + i * h;
    const double fx = f(x);
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  const double a = std::max(lo, best_x - h);
  const double b = std::min(hi, best_x + h);
  const double refined = golden_section_max(f, a, b, tol);
  return f(refined) > best_f ? refined : best_x;
}

// Bisection for a strictly decreasing g on [lo, hi] with g(lo) > 0 > g(hi).
inline double bisect_decreasing_root(const std::function<double(double)>& g, double lo, double hi,
                                     int iterations = 200) {
  double a = lo, b = hi;
  for (int i = 0; i < iterations; ++i) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    if (g(m) > 0.0)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

}  // namespace bswsn::optim
