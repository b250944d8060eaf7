#pragma once

#include <vector>

#include "wbary/grid.hpp"
#include "wbary/poisson.hpp"

namespace wbary {

/** Semi-discrete dual objective of the half-quadratic transport problem,
 *
 *    I(phi) = sum_x (||x||^2/2 - phi(x)) nu(x)
 *           + sum_y (||y||^2/2 - phi*(y)) mu(y),
 *
 *  evaluated with a caller-supplied conjugate phi_star. For any phi this is
 *  a lower bound on the optimal half-quadratic transport cost between nu
 *  and mu (weak duality); at the optimal pair it equals W2(nu, mu)^2, which
 *  here carries the 1/2 cost convention. */
double dual_value(const Measure& nu, const Measure& mu, const Potential& phi,
                  const Potential& phi_star);

/** H1 ascent direction for I at phi: the Neumann-Poisson preimage of the
 *  density-view residual ((grad phi*)_# mu - nu) / h^d, projected to mean
 *  zero. phi_star must be the conjugate of phi. The result is mean-zero. */
ScalarField h1_gradient(const NeumannPoisson& solver, const Measure& nu,
                        const Measure& mu, const Potential& phi_star,
                        int split_k = 4);

/** Convenience overload: conjugates phi and uses a per-thread cached
 *  solver for the grid. */
ScalarField h1_gradient(const Measure& nu, const Measure& mu,
                        const Potential& phi, int split_k = 4);

struct AscentStep {
  Potential phi;       // updated potential, convexified
  Potential phi_star;  // its exact conjugate
  double value;        // dual objective of the updated pair
};

/** One H1 gradient-ascent step on I: phi_hat = phi + eta * h1_gradient,
 *  then double conjugation restores convexity. Conjugacy of the returned
 *  pair is exact because conjugation is idempotent after one round trip. */
AscentStep ascent_step(const NeumannPoisson& solver, const Measure& nu,
                       const Measure& mu, const Potential& phi,
                       const Potential& phi_star, double eta, int split_k = 4);

/** Convenience overload with a per-thread cached solver; phi need not be
 *  convex (it is conjugated as given). */
AscentStep ascent_step(const Measure& nu, const Measure& mu,
                       const Potential& phi, double eta, int split_k = 4);

struct W2Options {
  int iters = 200;
  double eta0 = 0.5;
  double eta_decay = 0.99;
  int split_k = 4;
};

struct W2Result {
  double value;               // best dual value seen (lower bound on W2^2)
  Potential phi;              // potential attaining it
  std::vector<double> trace;  // dual value per iteration, starting at phi = q
};

/** Runs ascent_step from phi = ||x||^2/2 with backtracking-style step decay:
 *  whenever an iteration fails to improve the dual value, eta shrinks by
 *  eta_decay (the step is still taken). Returns the maximum dual value
 *  seen and the potential that attained it. */
W2Result solve_w2(const Measure& nu, const Measure& mu, const W2Options& opt = {});

inline W2Result solve_w2(const Measure& nu, const Measure& mu, int iters,
                         double eta0, double eta_decay) {
  return solve_w2(nu, mu, W2Options{iters, eta0, eta_decay, 4});
}

}  // namespace wbary
