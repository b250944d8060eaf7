#pragma once

#include <Eigen/Dense>

#include "wbary/grid.hpp"

/** Slow, independent reference implementations used to validate the fast
 *  paths. Everything here favors directness over speed and is written
 *  against the same conventions as the library proper (row-major flat
 *  layout, half-quadratic cost, unit-square grids). */
namespace wbary::oracle {

/** O(n^2) Legendre conjugate of samples v at coordinates x, evaluated at
 *  the same coordinates. Ties resolve to the lowest index, matching the
 *  fast sweep. */
ArrayXd conjugate_brute(const ArrayXd& v, const ArrayXd& x);

/** O(n^4) two-dimensional conjugate taking the max over all grid nodes in
 *  one joint expression (no separable pass). */
Potential conjugate_brute_2d(const Potential& phi);

/** Brute conjugate in either dimension. */
Potential conjugate_brute(const Potential& phi);

struct LpSolution {
  double value;           // optimal transport cost
  Eigen::MatrixXd plan;   // optimal coupling, plan(i, j) >= 0
};

/** Exact discrete optimal transport between histograms a (size L) and b
 *  (size R) under cost(i, j), solved with the transportation simplex
 *  (northwest-corner start, lowest-index pivoting). Supplies and demands
 *  must be nonnegative and balanced to ~1e-12. */
LpSolution lp_ot(const ArrayXd& a, const ArrayXd& b,
                 const Eigen::MatrixXd& cost);

/** Half squared Euclidean distance between all node pairs of a grid, the
 *  cost matrix matching the dual objective's convention. */
Eigen::MatrixXd half_sqdist_cost(const Grid& grid);

/** Squared 2-Wasserstein distance (half-quadratic convention) between two
 *  measures on a shared 1D grid via the quantile formula: trapezoidal
 *  quadrature of (F_nu^{-1} - F_mu^{-1})^2 / 2 over 10^4 uniform quantile
 *  levels. Inverse CDFs step to the lowest node whose CDF reaches the
 *  level. */
double quantile_w2_1d(const Measure& nu, const Measure& mu);

/** 1D barycenter of equal-weight measures by averaging inverse CDFs on
 *  10^4 midpoint quantile levels and re-depositing 1e-4 mass per level
 *  onto the two bracketing nodes with linear weights. */
Measure quantile_barycenter_1d(const std::vector<Measure>& measures);

/** Negative Neumann Laplacian stencil applied densely (each axis is the
 *  path-graph second difference over h^2). */
ScalarField apply_neg_laplacian(const ScalarField& u);

/** Dense mean-zero solve of the same Neumann system the spectral solver
 *  targets, via an explicitly assembled stencil matrix with the constant
 *  mode pinned by a rank-one shift. Guards n <= 64 per axis. */
ScalarField dense_neumann_solve(const ScalarField& rhs, double mean_tol = 1e-10);

}  // namespace wbary::oracle
