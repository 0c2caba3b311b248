#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's numerics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline double score(const std::vector<double>& x, const std::vector<double>& w, double b) {
  long double s = b;
  for (std::size_t j = 0; j < w.size(); ++j) s += (long double)x[j] * w[j];
  return double(s);
}

inline double half_norm2(const std::vector<double>& w) {
  long double s = 0;
  for (double v : w) s += (long double)v * v;
  return double(s / 2);
}

// 1/2|w|^2 + C sum max(0, 1 - y (w.x + b))
inline double hinge_objective(const Dense& x, const std::vector<int>& y, double C,
                              const std::vector<double>& w, double b) {
  long double loss = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    loss += std::max(0.0, 1.0 - y[i] * score(x[i], w, b));
  return half_norm2(w) + double(C * loss);
}

// 1/2|w|^2 + C sum max(0, |w.x + b - y| - eps)
inline double tube_objective(const Dense& x, const std::vector<double>& y, double C, double eps,
                             const std::vector<double>& w, double b) {
  long double loss = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    loss += std::max(0.0, std::abs(score(x[i], w, b) - y[i]) - eps);
  return half_norm2(w) + double(C * loss);
}

// The loss is convex piecewise linear in b, so its minimum sits on a breakpoint.
template <typename F>
double min_over_breakpoints(const std::vector<double>& breaks, F f) {
  double best = std::numeric_limits<double>::infinity();
  for (double b : breaks) best = std::min(best, f(b));
  return best;
}

inline double hinge_profile(const Dense& x, const std::vector<int>& y, double C,
                            const std::vector<double>& w) {
  std::vector<double> br;
  for (std::size_t i = 0; i < x.size(); ++i) br.push_back(y[i] - score(x[i], w, 0.0));
  return min_over_breakpoints(br, [&](double b) { return hinge_objective(x, y, C, w, b); });
}

inline double tube_profile(const Dense& x, const std::vector<double>& y, double C, double eps,
                           const std::vector<double>& w) {
  std::vector<double> br;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = score(x[i], w, 0.0);
    br.push_back(y[i] - s - eps);
    br.push_back(y[i] - s + eps);
  }
  return min_over_breakpoints(br, [&](double b) { return tube_objective(x, y, C, eps, w, b); });
}

// Dense grid over w in [-R, R]^d (d <= 2) with exact inner minimization over
// b, then repeated zooming around the best cell.
template <typename Profile>
double grid_minimum(std::size_t d, double R, Profile profile) {
  std::vector<double> center(d, 0.0);
  double half = R;
  std::size_t steps = 401;
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    const double h = 2 * half / double(steps - 1);
    std::vector<double> arg = center;
    std::vector<double> w(d);
    const std::size_t outer = d >= 1 ? steps : 1;
    const std::size_t inner = d >= 2 ? steps : 1;
    for (std::size_t i = 0; i < outer; ++i) {
      for (std::size_t j = 0; j < inner; ++j) {
        if (d >= 1) w[0] = center[0] - half + h * double(i);
        if (d >= 2) w[1] = center[1] - half + h * double(j);
        const double v = profile(w);
        if (v < best) {
          best = v;
          arg = w;
        }
      }
    }
    if (h < 1e-7) break;
    center = arg;
    half = 3 * h;
    steps = 61;
  }
  return best;
}

inline double mae(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs((long double)a[i] - b[i]);
  return double(s / a.size());
}

// Computational (sums-of-products) form, evaluated in long double.
inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const long double n = a.size();
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sx += a[i];
    sy += b[i];
    sxx += (long double)a[i] * a[i];
    syy += (long double)b[i] * b[i];
    sxy += (long double)a[i] * b[i];
  }
  const long double num = n * sxy - sx * sy;
  const long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  return double(num / den);
}

}  // namespace oracle
