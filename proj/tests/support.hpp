#pragma once

// Shared generators for the test suites: random fields and measures, the
// truncated-Gaussian family used by the 1D studies, and disk indicators.

#include <cmath>
#include <random>

#include "wbary/grid.hpp"
#include "wbary/legendre.hpp"

namespace tsup {

using namespace wbary;

inline ArrayXd random_field(std::mt19937& rng, Index size, double lo,
                            double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  ArrayXd v(size);
  for (Index i = 0; i < size; ++i) v[i] = dist(rng);
  return v;
}

inline Measure random_measure(std::mt19937& rng, const Grid& g) {
  ScalarField raw{g, random_field(rng, g.size(), 0.0, 1.0)};
  return normalize(raw);
}

inline Potential random_convex(std::mt19937& rng, const Grid& g, double lo,
                               double hi) {
  Potential raw{g, random_field(rng, g.size(), lo, hi), false};
  return convexify(raw);
}

// Node masses by cell integrals of N(a, sigma^2) restricted to [0, 1].
inline Measure trunc_gaussian_1d(const Grid& g, double a, double sigma) {
  const double s = std::max(sigma, 1e-12) * std::sqrt(2.0);
  auto cdf = [&](double x) { return 0.5 * (1.0 + std::erf((x - a) / s)); };
  Measure m;
  m.grid = g;
  m.mass.resize(g.n);
  double prev = cdf(0.0);
  for (int i = 0; i < g.n; ++i) {
    double right =
        (i == g.n - 1) ? cdf(1.0) : cdf(0.5 * (g.node(i) + g.node(i + 1)));
    m.mass[i] = std::max(right - prev, 0.0);
    prev = right;
  }
  m.mass /= m.mass.sum();
  return m;
}

// Uniform mass on the nodes inside a disk.
inline Measure disk_measure(const Grid& g, double cx, double cy, double r) {
  Measure m;
  m.grid = g;
  m.mass = ArrayXd::Zero(g.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      double dx = g.node(i) - cx, dy = g.node(j) - cy;
      if (dx * dx + dy * dy <= r * r) m.mass[flat(g, i, j)] = 1.0;
    }
  m.mass /= m.mass.sum();
  return m;
}

// Normalized Gaussian bump evaluated at nodes (2D).
inline Measure blob_measure(const Grid& g, double cx, double cy,
                            double sigma) {
  Measure m;
  m.grid = g;
  m.mass.resize(g.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      double dx = g.node(i) - cx, dy = g.node(j) - cy;
      m.mass[flat(g, i, j)] = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
    }
  m.mass /= m.mass.sum();
  return m;
}

inline double mean_axis(const Measure& m, int axis) {
  double total = 0.0;
  if (m.grid.dim == 1) {
    for (int i = 0; i < m.grid.n; ++i) total += m.grid.node(i) * m.mass[i];
    return total;
  }
  for (int i = 0; i < m.grid.n; ++i)
    for (int j = 0; j < m.grid.n; ++j)
      total += m.grid.node(axis == 0 ? i : j) * m.mass[flat(m.grid, i, j)];
  return total;
}

}  // namespace tsup
