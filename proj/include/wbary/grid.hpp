#pragma once

#include <Eigen/Dense>

#include "wbary/errors.hpp"

namespace wbary {

using Eigen::ArrayXd;
using Eigen::Index;

/** Square node lattice on [0,1]^d, d in {1,2}.
 *
 * Nodes sit at i/(n-1) per axis, endpoints included, spacing h = 1/(n-1).
 * 2D fields are stored flat in row-major order: index(i,j) = i*n + j with
 * x1 = i*h varying slowest and x2 = j*h fastest.
 */
struct Grid {
  int dim = 1;
  int n = 3;  // nodes per axis, >= 3

  double h() const { return 1.0 / (n - 1); }
  Index size() const { return dim == 1 ? n : Index(n) * n; }
  double node(int i) const { return static_cast<double>(i) / (n - 1); }
  /** Node coordinates along one axis. */
  ArrayXd coords() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

inline Index flat(const Grid& g, int i, int j) { return Index(i) * g.n + j; }

/** Unconstrained scalar node data (residuals, gradient directions). */
struct ScalarField {
  Grid grid;
  ArrayXd v;
};

/** Nonnegative node masses summing to 1. */
struct Measure {
  Grid grid;
  ArrayXd mass;
};

/** Candidate Kantorovich potential. `convex` marks values produced by
 *  convexification (or otherwise known grid-convex); operations that
 *  require convexity trust this flag. */
struct Potential {
  Grid grid;
  ArrayXd v;
  bool convex = false;
};

/** Throws GridMismatch unless both grids are identical. */
void require_same_grid(const Grid& a, const Grid& b);

/** Throws unless `m` is a valid measure: finite, nonnegative masses summing
 *  to 1 within `tol`. */
void validate_measure(const Measure& m, double tol = 1e-12);

/** Builds a probability measure from raw nonnegative node weights:
 *  mass = (1 - floor_eps) * raw/sum(raw) + floor_eps * uniform.
 *
 *  The floor term bounds every mass below by floor_eps/n^d, which some
 *  callers use to keep densities away from zero. */
Measure normalize(const ScalarField& raw, double floor_eps = 0.0);

/** The potential x -> ||x||^2/2 whose gradient is the identity map. */
Potential quadratic_potential(const Grid& g);

/** Convention helper: psi(x) = ||x||^2/2 - phi(x). Applying it twice gives
 *  phi back; it converts between the scalar-product and squared-difference
 *  forms of the conjugate. */
Potential cost_complement(const Potential& phi);

}  // namespace wbary
