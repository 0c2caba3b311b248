#include "catfish/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "catfish/error.hpp"
#include "catfish/rng.hpp"

namespace catfish::solver {

namespace {

constexpr double kTau = 1e-12;

bool uniform_weights(std::span<const Ramp> ramps) {
  return std::all_of(ramps.begin(), ramps.end(),
                     [&](const Ramp& r) { return r.weight == ramps.front().weight; });
}

// Lazily computed kernel columns K(., r), cached up to a byte budget.
class KernelCache {
 public:
  KernelCache(const FeatureMatrix& x, std::size_t budget_bytes)
      : x_(x), columns_(x.size()), scratch_(2, std::vector<double>(x.size())),
        dense_(x.dimension, 0.0) {
    const std::size_t per_column = std::max<std::size_t>(1, x.size()) * sizeof(double);
    max_cached_ = std::max<std::size_t>(2, budget_bytes / per_column);
    diag_.resize(x.size());
    for (std::size_t r = 0; r < x.size(); ++r) {
      double s = 0.0;
      for (const auto& [k, v] : x.rows[r].entries) s += v * v;
      diag_[r] = s;
    }
  }

  double diag(std::size_t r) const { return diag_[r]; }

  // `slot` selects a scratch buffer for uncached columns (0 or 1).
  const std::vector<double>& column(std::size_t r, int slot) {
    if (!columns_[r].empty()) return columns_[r];
    std::vector<double>& out = cached_ < max_cached_ ? columns_[r] : scratch_[slot];
    if (&out == &columns_[r]) ++cached_;
    out.assign(x_.size(), 0.0);
    for (const auto& [k, v] : x_.rows[r].entries) dense_[k] = v;
    for (std::size_t t = 0; t < x_.size(); ++t) {
      double s = 0.0;
      for (const auto& [k, v] : x_.rows[t].entries) s += v * dense_[k];
      out[t] = s;
    }
    for (const auto& [k, v] : x_.rows[r].entries) dense_[k] = 0.0;
    return out;
  }

 private:
  const FeatureMatrix& x_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::vector<double>> scratch_;
  std::vector<double> dense_;
  std::vector<double> diag_;
  std::size_t cached_ = 0;
  std::size_t max_cached_ = 0;
};

struct Iterate {
  std::vector<double> w;
  double b = 0.0;
  std::vector<double> scores;  // w.x per row, without bias
  double objective = 0.0;
};

std::vector<double> row_scores(const FeatureMatrix& x, std::span<const double> w) {
  std::vector<double> s(x.size());
  for (std::size_t r = 0; r < x.size(); ++r) s[r] = dot(x.rows[r], w);
  return s;
}

double ramp_loss(std::span<const double> scores, double b, std::span<const Ramp> ramps) {
  double loss = 0.0;
  for (const auto& r : ramps) {
    const double a = r.sigma * ((scores[r.row] + b) - r.z0);
    if (a > 0.0) loss += r.weight * a;
  }
  return loss;
}

double half_norm_sq(std::span<const double> w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return 0.5 * s;
}

}  // namespace

double dot(const FeatureVector& x, std::span<const double> w) {
  double s = 0.0;
  for (const auto& [k, v] : x.entries) s += v * w[k];
  return s;
}

double primal_objective(const FeatureMatrix& x, std::span<const Ramp> ramps,
                        std::span<const double> w, double b) {
  if (w.size() != x.dimension) throw DimensionError("weight dimension does not match features");
  const auto scores = row_scores(x, w);
  return half_norm_sq(w) + ramp_loss(scores, b, ramps);
}

double optimal_bias(std::span<const double> scores, std::span<const Ramp> ramps) {
  if (ramps.empty()) return 0.0;
  struct Point {
    double at;
    double weight;
    std::size_t order;
  };
  std::vector<Point> pts;
  pts.reserve(ramps.size());
  const bool uniform = uniform_weights(ramps);
  double slope = 0.0;
  for (std::size_t k = 0; k < ramps.size(); ++k) {
    const Ramp& r = ramps[k];
    const double w = uniform ? 1.0 : r.weight;
    pts.push_back({r.z0 - scores[r.row], w, k});
    if (r.sigma < 0) slope -= w;
  }
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.at < b.at || (a.at == b.at && a.order < b.order);
  });
  if (slope >= 0.0) return pts.front().at;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    slope += pts[k].weight;
    if (slope > 0.0) return pts[k].at;
    if (slope == 0.0) {
      return k + 1 < pts.size() ? (pts[k].at + pts[k + 1].at) / 2.0 : pts[k].at;
    }
  }
  return pts.back().at;
}

double line_search(double quad_a, double quad_b, std::span<const double> s0,
                   std::span<const double> ds, std::span<const Ramp> ramps) {
  struct Cross {
    double t;
    double gain;
    std::size_t order;
  };
  std::vector<Cross> crosses;
  double slope = quad_b;
  for (std::size_t k = 0; k < ramps.size(); ++k) {
    const Ramp& r = ramps[k];
    const double a = r.sigma * ((s0[r.row]) - r.z0);
    const double c = r.sigma * ds[r.row];
    if (a > 0.0 || (a == 0.0 && c > 0.0)) slope += r.weight * c;
    if (c != 0.0) {
      const double t = -a / c;
      if (t > 0.0 && t < 1.0) crosses.push_back({t, r.weight * std::abs(c), k});
    }
  }
  std::sort(crosses.begin(), crosses.end(), [](const Cross& a, const Cross& b) {
    return a.t < b.t || (a.t == b.t && a.order < b.order);
  });
  double lo = 0.0;
  std::size_t k = 0;
  while (true) {
    const double hi = k < crosses.size() ? crosses[k].t : 1.0;
    if (quad_a * lo + slope >= 0.0) return lo;
    if (quad_a > 0.0) {
      const double root = -slope / quad_a;
      if (root < hi) return root;
    }
    if (k >= crosses.size()) return 1.0;
    const double at = crosses[k].t;
    while (k < crosses.size() && crosses[k].t == at) slope += crosses[k++].gain;
    lo = at;
  }
}

Solution solve(const Problem& problem, const Options& options) {
  const FeatureMatrix& x = *problem.x;
  const std::size_t nvar = problem.var_row.size();
  const std::size_t dim = x.dimension;
  if (nvar == 0) throw ConfigError("solver needs at least one variable");
  if (problem.linear.size() != nvar || problem.lower.size() != nvar || problem.upper.size() != nvar) {
    throw ConfigError("inconsistent solver problem");
  }

  KernelCache kernel(x, options.cache_bytes);
  std::vector<double> v(nvar, 0.0);
  std::vector<double> grad(problem.linear);
  std::vector<std::size_t> order(nvar);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(options.seed, 0x5eed));
  rng.shuffle(order);

  const std::span<const Ramp> ramps(problem.ramps);
  Solution sol;

  Iterate cur;
  cur.w.assign(dim, 0.0);
  cur.scores.assign(x.size(), 0.0);
  cur.b = optimal_bias(cur.scores, ramps);
  cur.objective = ramp_loss(cur.scores, cur.b, ramps);

  auto advance_primal = [&] {
    Iterate cand;
    cand.w.assign(dim, 0.0);
    for (std::size_t t = 0; t < nvar; ++t) {
      if (v[t] == 0.0) continue;
      for (const auto& [k, val] : x.rows[problem.var_row[t]].entries) cand.w[k] += v[t] * val;
    }
    cand.scores = row_scores(x, cand.w);
    cand.b = optimal_bias(cand.scores, ramps);
    cand.objective = half_norm_sq(cand.w) + ramp_loss(cand.scores, cand.b, ramps);

    std::vector<double> s0(x.size()), ds(x.size());
    double qa = 0.0, qb = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = cand.w[k] - cur.w[k];
      qa += d * d;
      qb += cur.w[k] * d;
    }
    for (std::size_t r = 0; r < x.size(); ++r) {
      s0[r] = cur.scores[r] + cur.b;
      ds[r] = (cand.scores[r] + cand.b) - s0[r];
    }
    const double t = line_search(qa, qb, s0, ds, ramps);

    Iterate next;
    next.w.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) next.w[k] = cur.w[k] + t * (cand.w[k] - cur.w[k]);
    next.scores = row_scores(x, next.w);
    next.b = optimal_bias(next.scores, ramps);
    next.objective = half_norm_sq(next.w) + ramp_loss(next.scores, next.b, ramps);

    // Rounding can leave the line-search point a hair above an endpoint.
    Iterate* best = &next;
    if (cand.objective < best->objective) best = &cand;
    if (best->objective <= cur.objective) cur = std::move(*best);
    sol.objective_history.push_back(cur.objective);
  };

  const std::size_t max_iterations = options.max_epochs * nvar;
  double violation = 0.0;
  while (true) {
    std::size_t up = nvar, low = nvar;
    for (std::size_t t : order) {
      if (v[t] < problem.upper[t] && (up == nvar || grad[t] < grad[up])) up = t;
      if (v[t] > problem.lower[t] && (low == nvar || grad[t] > grad[low])) low = t;
    }
    violation = (up == nvar || low == nvar) ? 0.0 : grad[low] - grad[up];
    if (violation <= options.tolerance) {
      sol.converged = true;
      break;
    }
    if (sol.iterations >= max_iterations) break;

    const std::size_t i = up, j = low;
    const std::size_t ri = problem.var_row[i], rj = problem.var_row[j];
    const auto& ki = kernel.column(ri, 0);
    const auto& kj = kernel.column(rj, 1);
    const double eta = std::max(kernel.diag(ri) + kernel.diag(rj) - 2.0 * ki[rj], kTau);
    double delta = (grad[j] - grad[i]) / eta;
    delta = std::min(delta, problem.upper[i] - v[i]);
    delta = std::min(delta, v[j] - problem.lower[j]);
    if (delta > 0.0) {
      v[i] = (delta == problem.upper[i] - v[i]) ? problem.upper[i] : v[i] + delta;
      v[j] = (delta == v[j] - problem.lower[j]) ? problem.lower[j] : v[j] - delta;
      for (std::size_t t = 0; t < nvar; ++t) {
        const std::size_t rt = problem.var_row[t];
        grad[t] += delta * (ki[rt] - kj[rt]);
      }
    }
    ++sol.iterations;
    if (sol.iterations % nvar == 0) advance_primal();
  }
  if (sol.objective_history.empty() || sol.iterations % nvar != 0) advance_primal();

  sol.epochs = (sol.iterations + nvar - 1) / nvar;
  sol.max_violation = violation;
  sol.weights = std::move(cur.w);
  sol.bias = cur.b;
  return sol;
}

}  // namespace catfish::solver
