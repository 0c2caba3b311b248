#pragma once

// Linear soft-margin solver shared by the classifier and the regressor.
//
// Primal:  min_{w,b} 1/2 |w|^2 + sum_r weight_r * max(0, sigma_r * (w.x_{row_r} + b - z0_r))
// Dual:    min_v 1/2 v^T K v + c^T v   s.t.  sum_t v_t = 0,  lower_t <= v_t <= upper_t
// with K the linear kernel over rows, w = sum_t v_t x_{row_t}, and b the
// (unregularized) multiplier of the equality constraint.
//
// The dual is solved by maximal-violating-pair updates. After every pass the
// primal iterate is moved by exact line search towards the point recovered
// from the current dual, followed by an exact bias minimization, so the
// recorded primal objective never increases.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "catfish/features.hpp"

namespace catfish::solver {

struct Ramp {
  std::uint32_t row = 0;
  double sigma = 1.0;  // +1 or -1
  double z0 = 0.0;
  double weight = 1.0;
};

struct Problem {
  const FeatureMatrix* x = nullptr;
  std::vector<std::uint32_t> var_row;
  std::vector<double> linear;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Ramp> ramps;
};

struct Options {
  double tolerance = 1e-6;
  std::size_t max_epochs = 1000;
  std::uint64_t seed = 0;
  std::size_t cache_bytes = std::size_t{128} << 20;
};

struct Solution {
  std::vector<double> weights;
  double bias = 0.0;
  bool converged = false;
  std::size_t epochs = 0;
  std::size_t iterations = 0;
  double max_violation = 0.0;
  std::vector<double> objective_history;  // primal objective after each pass
};

Solution solve(const Problem& problem, const Options& options);

double dot(const FeatureVector& x, std::span<const double> w);

// Exact primal objective for the given ramps.
double primal_objective(const FeatureMatrix& x, std::span<const Ramp> ramps,
                        std::span<const double> w, double b);

// Exact minimizer over b of the ramp loss, given per-row scores w.x.
// Flat minimizing intervals resolve to their midpoint.
double optimal_bias(std::span<const double> scores, std::span<const Ramp> ramps);

// Exact minimizer over t in [0, 1] of
//   1/2 |w + t d|^2 + sum_r ramp_r(s0 + t ds)
// where quad_a = |d|^2 and quad_b = w.d.
double line_search(double quad_a, double quad_b, std::span<const double> s0,
                   std::span<const double> ds, std::span<const Ramp> ramps);

}  // namespace catfish::solver
