#pragma once

// Derivative-free minimisation over R^N with the standard Nelder-Mead
// simplex (reflection 1, expansion 2, contraction 1/2, shrink 1/2).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace pitchap {

struct NelderMeadOptions {
  std::size_t max_evals = 200;
  // Initial simplex edge along each axis, relative to the start coordinate
  // (absolute `min_step` is used when that coordinate is zero).
  double relative_step = 0.10;
  double min_step = 0.05;
  // Stop when the spread of simplex values falls below this.
  double f_tolerance = 1e-12;
  double x_tolerance = 1e-10;
};

template <std::size_t N>
struct NelderMeadResult {
  std::array<double, N> x{};
  double value = 0.0;
  std::size_t evals = 0;
  std::vector<double> history;  // best-so-far after each evaluation
};

template <std::size_t N, class F>
NelderMeadResult<N> nelder_mead(F&& f, const std::array<double, N>& start,
                                const NelderMeadOptions& opt = {}) {
  using Point = std::array<double, N>;
  NelderMeadResult<N> res;
  res.x = start;

  auto eval = [&](const Point& p) {
    const double v = f(p);
    ++res.evals;
    if (res.history.empty() || v < res.value) {
      res.value = v;
      res.x = p;
    }
    res.history.push_back(res.value);
    return v;
  };
  auto budget_left = [&] { return res.evals < opt.max_evals; };

  std::array<Point, N + 1> simplex;
  std::array<double, N + 1> values;
  simplex[0] = start;
  values[0] = eval(start);
  std::size_t filled = 1;
  for (std::size_t i = 0; i < N && budget_left(); ++i) {
    Point p = start;
    const double h = p[i] != 0.0 ? opt.relative_step * std::abs(p[i]) : opt.min_step;
    p[i] += h;
    simplex[i + 1] = p;
    values[i + 1] = eval(p);
    ++filled;
  }
  if (filled < N + 1) return res;

  std::array<std::size_t, N + 1> order;
  auto combine = [](const Point& a, const Point& b, double t) {
    Point out;
    for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  while (budget_left()) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[N - 1];

    if (std::abs(values[worst] - values[best]) <= opt.f_tolerance) {
      double size = 0.0;
      for (std::size_t k = 0; k <= N; ++k)
        for (std::size_t i = 0; i < N; ++i)
          size = std::max(size, std::abs(simplex[k][i] - simplex[best][i]));
      if (size <= opt.x_tolerance) break;
    }

    Point centroid{};
    for (std::size_t k = 0; k <= N; ++k) {
      if (k == worst) continue;
      for (std::size_t i = 0; i < N; ++i) centroid[i] += simplex[k][i] / static_cast<double>(N);
    }

    const Point reflected = combine(centroid, simplex[worst], -1.0);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      if (!budget_left()) {
        simplex[worst] = reflected;
        values[worst] = fr;
        break;
      }
      const Point expanded = combine(centroid, simplex[worst], -2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    if (!budget_left()) break;
    const bool outside = fr < values[worst];
    const Point contracted = outside ? combine(centroid, reflected, 0.5)
                                     : combine(centroid, simplex[worst], 0.5);
    const double fc = eval(contracted);
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k <= N && budget_left(); ++k) {
      if (k == best) continue;
      simplex[k] = combine(simplex[best], simplex[k], 0.5);
      values[k] = eval(simplex[k]);
    }
  }
  return res;
}

}  // namespace pitchap
