#include "wbary/transport.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "wbary/errors.hpp"

namespace wbary {

namespace {

std::atomic<long> g_conservation_checks{0};

// Splits a coordinate into a containing interval index i0 in [0, n-2] and
// the fractional offset r in [0, 1] relative to node i0 (r may reach 1 only
// at the domain's far end because i0 is clamped to n-2).
inline void locate(double p, double h, int n, int& i0, double& r) {
  double f = p / h;
  i0 = std::min(std::max(static_cast<int>(std::floor(f)), 0), n - 2);
  r = f - i0;
}

void push_1d(const Measure& nu, const VectorField& g, int k, ArrayXd& out) {
  const int n = nu.grid.n;
  const double h = nu.grid.h();
  const ArrayXd& gx = g.comp[0];
  for (int i = 0; i < n; ++i) {
    double m = nu.mass[i];
    if (m == 0.0) continue;
    double a = gx[i];
    double b = gx[std::min(i + 1, n - 1)];
    double w = m / k;
    for (int s = 0; s < k; ++s) {
      double alpha = (s + 0.5) / k;
      double p = a + alpha * (b - a);
      p = std::min(std::max(p, 0.0), 1.0);
      int i0;
      double r;
      locate(p, h, n, i0, r);
      // Inverse-distance over the two bracketing nodes reduces to linear
      // weights, which are exact at node hits (r = 0 or 1).
      out[i0] += w * (1.0 - r);
      out[i0 + 1] += w * r;
    }
  }
}

void push_2d(const Measure& nu, const VectorField& g, int k, ArrayXd& out) {
  const int n = nu.grid.n;
  const double h = nu.grid.h();
  const ArrayXd& g0 = g.comp[0];
  const ArrayXd& g1 = g.comp[1];
  for (int i = 0; i < n; ++i) {
    const int ic = std::min(i + 1, n - 1);
    for (int j = 0; j < n; ++j) {
      double m = nu.mass[flat(nu.grid, i, j)];
      if (m == 0.0) continue;
      const int jc = std::min(j + 1, n - 1);
      const Index c00 = flat(nu.grid, i, j), c10 = flat(nu.grid, ic, j);
      const Index c01 = flat(nu.grid, i, jc), c11 = flat(nu.grid, ic, jc);
      double w = m / (static_cast<double>(k) * k);
      for (int s = 0; s < k; ++s) {
        double a = (s + 0.5) / k;
        for (int t = 0; t < k; ++t) {
          double b = (t + 0.5) / k;
          double w00 = (1 - a) * (1 - b), w10 = a * (1 - b);
          double w01 = (1 - a) * b, w11 = a * b;
          double px = w00 * g0[c00] + w10 * g0[c10] + w01 * g0[c01] + w11 * g0[c11];
          double py = w00 * g1[c00] + w10 * g1[c10] + w01 * g1[c01] + w11 * g1[c11];
          px = std::min(std::max(px, 0.0), 1.0);
          py = std::min(std::max(py, 0.0), 1.0);
          int i0, j0;
          double r1, r2;
          locate(px, h, n, i0, r1);
          locate(py, h, n, j0, r2);
          double dx0 = r1 * h, dx1 = (1.0 - r1) * h;
          double dy0 = r2 * h, dy1 = (1.0 - r2) * h;
          double d00 = std::sqrt(dx0 * dx0 + dy0 * dy0);
          double d10 = std::sqrt(dx1 * dx1 + dy0 * dy0);
          double d01 = std::sqrt(dx0 * dx0 + dy1 * dy1);
          double d11 = std::sqrt(dx1 * dx1 + dy1 * dy1);
          const Index t00 = flat(nu.grid, i0, j0), t10 = flat(nu.grid, i0 + 1, j0);
          const Index t01 = flat(nu.grid, i0, j0 + 1), t11 = flat(nu.grid, i0 + 1, j0 + 1);
          if (d00 == 0.0) {
            out[t00] += w;
          } else if (d10 == 0.0) {
            out[t10] += w;
          } else if (d01 == 0.0) {
            out[t01] += w;
          } else if (d11 == 0.0) {
            out[t11] += w;
          } else {
            double q00 = 1.0 / d00, q10 = 1.0 / d10, q01 = 1.0 / d01, q11 = 1.0 / d11;
            double scale = w / (q00 + q10 + q01 + q11);
            out[t00] += scale * q00;
            out[t10] += scale * q10;
            out[t01] += scale * q01;
            out[t11] += scale * q11;
          }
        }
      }
    }
  }
}

}  // namespace

VectorField gradient(const Potential& phi) {
  const Grid& g = phi.grid;
  const int n = g.n;
  const double h = g.h();
  VectorField out;
  out.grid = g;
  if (g.dim == 1) {
    out.comp[0].resize(n);
    out.comp[0][0] = (phi.v[1] - phi.v[0]) / h;
    for (int i = 1; i < n; ++i) out.comp[0][i] = (phi.v[i] - phi.v[i - 1]) / h;
  } else {
    out.comp[0].resize(g.size());
    out.comp[1].resize(g.size());
    for (int i = 0; i < n; ++i) {
      const int im = (i == 0) ? 1 : i;
      const int ib = (i == 0) ? 0 : i - 1;
      for (int j = 0; j < n; ++j) {
        const int jm = (j == 0) ? 1 : j;
        const int jb = (j == 0) ? 0 : j - 1;
        out.comp[0][flat(g, i, j)] = (phi.v[flat(g, im, j)] - phi.v[flat(g, ib, j)]) / h;
        out.comp[1][flat(g, i, j)] = (phi.v[flat(g, i, jm)] - phi.v[flat(g, i, jb)]) / h;
      }
    }
  }
  return out;
}

Measure pushforward(const Measure& nu, const Potential& phi, int split_k) {
  require_same_grid(nu.grid, phi.grid);
  if (!phi.convex) throw NotConvex("pushforward requires a convex potential");
  if (split_k < 1) throw InvalidSplit("split_k must be >= 1");
  if (!nu.mass.allFinite() || !phi.v.allFinite())
    throw NonFiniteInput("pushforward: non-finite input");

  VectorField g = gradient(phi);
  Measure out;
  out.grid = nu.grid;
  out.mass = ArrayXd::Zero(nu.grid.size());
  if (nu.grid.dim == 1)
    push_1d(nu, g, split_k, out.mass);
  else
    push_2d(nu, g, split_k, out.mass);

  // Inline invariant: redistribution may move mass but never create,
  // destroy or negate it. Checked on every call; see conservation_checks().
  const double in_total = nu.mass.sum();
  if (std::abs(out.mass.sum() - in_total) >
      1e-12 * std::max(1.0, std::abs(in_total)))
    throw ConservationError("pushforward: mass not conserved");
  if (out.mass.minCoeff() < 0.0)
    throw ConservationError("pushforward: negative mass deposited");
  g_conservation_checks.fetch_add(1, std::memory_order_relaxed);
  return out;
}

long conservation_checks() {
  return g_conservation_checks.load(std::memory_order_relaxed);
}

Measure descent_step(const Measure& nu, const Potential& phi_bar, double tau,
                     int split_k) {
  require_same_grid(nu.grid, phi_bar.grid);
  if (!(tau > 0.0 && tau <= 1.0))
    throw std::invalid_argument("descent_step: tau must lie in (0, 1]");
  if (!phi_bar.convex) throw NotConvex("descent_step requires a convex potential");
  Potential q = quadratic_potential(nu.grid);
  Potential psi{nu.grid, (1.0 - tau) * q.v + tau * phi_bar.v, true};
  return pushforward(nu, psi, split_k);
}

}  // namespace wbary
