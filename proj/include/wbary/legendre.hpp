#pragma once

#include "wbary/grid.hpp"

namespace wbary {

/** Discrete Legendre conjugate on one axis:
 *    out[j] = max_i (coords[i]*coords[j] - values[i]),
 *  the supremum restricted to the node set. Runs in O(n) via a lower
 *  convex hull and a monotone maximizer sweep; agrees with the O(n^2)
 *  definition (ties resolve to the smaller node index).
 */
ArrayXd conjugate_1d(const ArrayXd& values, const ArrayXd& coords);

/** 2D conjugate phi*(y) = max_x (<x,y> - phi(x)) over grid nodes,
 *  computed by conjugating every row in x2 and then every column of the
 *  negated intermediate in x1. O(n^2) total. Output is flagged convex. */
Potential conjugate_2d(const Potential& phi);

/** Dimension-dispatching conjugate (1D sweep or the 2D separable pass). */
Potential conjugate(const Potential& phi);

/** Double conjugate (phi*)*: the largest grid-convex minorant of phi.
 *  Pointwise <= phi, idempotent, flagged convex. */
Potential convexify(const Potential& phi);

/** True when along-axis second differences are >= -tol (numerical
 *  convexity along grid lines). */
bool grid_convex(const Potential& phi, double tol);

namespace detail {
/** Workspace-free core used by the public wrappers: out may not alias v.
 *  hull must hold at least n ints. */
void conjugate_sweep(const double* v, const double* x, int n, double* out,
                     int* hull);
}  // namespace detail

}  // namespace wbary
