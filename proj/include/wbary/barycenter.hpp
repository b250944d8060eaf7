#pragma once

#include <vector>

#include "wbary/dual.hpp"
#include "wbary/grid.hpp"

namespace wbary {

enum class TauSchedule { Exp, InvT, Const };

struct BarycenterOptions {
  int iters = 300;
  TauSchedule tau_schedule = TauSchedule::Exp;
  double tau0 = 0.5;        // step size used by the Const schedule
  double eta0 = 0.05;       // initial per-measure ascent step
  double eta_decay = 0.99;  // multiplicative decay on non-improving steps
  int split_k = 4;
  double floor_eps = 0.0;   // uniform mass mixed into the initial iterate
  bool use_updated_potentials = false;  // average post-update potentials
  int threads = 1;
  bool deterministic = false;  // force the sequential code path
};

struct IterationReport {
  int t;                            // 1-based iteration index
  std::vector<double> dual_values;  // per-measure dual objective at entry
  double objective;                 // arithmetic mean of dual_values
  double stationarity;              // sum_x ||x - grad(phi_bar)(x)||^2 nu(x)
  double tau;                       // descent step applied this iteration
  std::vector<double> eta;          // per-measure ascent steps used
};

struct BarycenterResult {
  Measure barycenter;
  std::vector<Potential> potentials;  // final per-measure potentials
  std::vector<IterationReport> reports;
};

/** Alternating dual-ascent / Wasserstein-descent barycenter solver.
 *
 *  State: an iterate nu (initialized to the arithmetic mean of the inputs,
 *  optionally floored) and one convex potential per input (initialized to
 *  ||x||^2/2). Per iteration, every potential takes one H1 ascent step on
 *  its dual objective with effective step eta_i / n, the step sizes decay
 *  on non-improvement, and nu moves through the gradient of the averaged
 *  potential with step tau from the schedule. Reported dual values are
 *  measured at entry, before the ascent. By default the average uses the
 *  entry potentials; use_updated_potentials switches to the post-ascent
 *  ones. The iterate stays a valid measure (nonnegative, unit mass) at
 *  every step; violations throw rather than propagate.
 *
 *  With threads > 1 the per-measure ascents run concurrently; they are
 *  independent, so the result is identical to the sequential path, which
 *  deterministic forces. */
BarycenterResult compute_barycenter(const std::vector<Measure>& measures,
                                    const BarycenterOptions& opt = {});

/** Transport suboptimality of nu relative to the averaged potential:
 *  sum_x ||x - grad(phi_bar)(x)||^2 nu(x). Zero only when grad(phi_bar)
 *  fixes the support of nu. On a grid the backward-difference gradient of
 *  ||x||^2/2 sits half a cell off the identity, so even the ideal pair
 *  floors at dim * h^2 / 4 for full-support nu. */
double stationarity_metric(const Measure& nu, const Potential& phi_bar);

/** Barycenter objective (1/n) sum_i W2(nu, mu_i)^2, each term evaluated by
 *  solve_w2 under the given budget; a lower bound that tightens as the
 *  budget grows. */
double barycenter_functional(const Measure& nu,
                             const std::vector<Measure>& measures,
                             const W2Options& opt = {});

/** tau for 1-based iteration t of T: Exp is exp(-t/T), InvT is 1/t, Const
 *  is tau0 throughout. All values lie in (0, 1]. */
double tau_at(TauSchedule schedule, double tau0, int t, int T);

}  // namespace wbary
