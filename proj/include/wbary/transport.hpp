#pragma once

#include "wbary/grid.hpp"

namespace wbary {

/** Per-node vector data: comp[0] along x1, comp[1] along x2 (2D only). */
struct VectorField {
  Grid grid;
  ArrayXd comp[2];
};

/** Backward-difference gradient (phi_i - phi_{i-1})/h along each axis;
 *  index-0 faces use the forward difference so the field is defined
 *  everywhere. For convex phi the per-axis components are nondecreasing
 *  along grid lines. */
VectorField gradient(const Potential& phi);

/** Mass-splitting pushforward (grad phi)_# nu.
 *
 *  Each source cell (the quadrilateral spanned by the gradient images of
 *  nodes (i,j), (i+1,j), (i,j+1), (i+1,j+1), indices clamped at the far
 *  boundary) receives its node's mass, divided uniformly over a split_k x
 *  split_k bilinear sub-mesh at centered weights (i'-1/2)/split_k. Every
 *  sub-point deposits its share on the four corners of the containing
 *  target cell, weighted inversely to distance (an exact node hit takes
 *  the full share); images outside [0,1]^d are clamped to the boundary.
 *  1D collapses to segments, two bracketing nodes, and linear weights.
 *
 *  Conserves total mass to roundoff and never creates negative mass; both
 *  invariants are asserted inline on every call (ConservationError on
 *  violation).
 */
Measure pushforward(const Measure& nu, const Potential& phi, int split_k = 4);

/** Process-wide count of pushforward calls that passed the inline
 *  conservation checks. Monotone; useful for auditing long runs. */
long conservation_checks();

/** One Wasserstein descent step: pushes nu through the map
 *  (1-tau) id + tau grad(phi_bar), realized as the pushforward under the
 *  auxiliary potential psi_tau = (1-tau) ||x||^2/2 + tau phi_bar (convex
 *  as a convex combination, so the pushforward precondition holds). */
Measure descent_step(const Measure& nu, const Potential& phi_bar, double tau,
                     int split_k = 4);

}  // namespace wbary
