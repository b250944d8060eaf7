#include "wbary/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <thread>

#include "wbary/errors.hpp"
#include "wbary/legendre.hpp"
#include "wbary/transport.hpp"

namespace wbary {

double tau_at(TauSchedule schedule, double tau0, int t, int T) {
  switch (schedule) {
    case TauSchedule::Exp:
      return std::exp(-static_cast<double>(t) / T);
    case TauSchedule::InvT:
      return 1.0 / t;
    case TauSchedule::Const:
      return tau0;
  }
  return tau0;
}

double stationarity_metric(const Measure& nu, const Potential& phi_bar) {
  require_same_grid(nu.grid, phi_bar.grid);
  VectorField g = gradient(phi_bar);
  const Grid& grid = nu.grid;
  double total = 0.0;
  if (grid.dim == 1) {
    for (int i = 0; i < grid.n; ++i) {
      double d = grid.node(i) - g.comp[0][i];
      total += d * d * nu.mass[i];
    }
  } else {
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j) {
        Index id = flat(grid, i, j);
        double d0 = grid.node(i) - g.comp[0][id];
        double d1 = grid.node(j) - g.comp[1][id];
        total += (d0 * d0 + d1 * d1) * nu.mass[id];
      }
  }
  return total;
}

double barycenter_functional(const Measure& nu,
                             const std::vector<Measure>& measures,
                             const W2Options& opt) {
  if (measures.empty()) throw std::invalid_argument("no measures");
  double total = 0.0;
  for (const Measure& mu : measures) total += solve_w2(nu, mu, opt).value;
  return total / measures.size();
}

namespace {

struct MeasureState {
  Potential phi;
  Potential star;
  double eta;
  // per-iteration scratch, filled by the ascent worker
  double val_entry = 0.0;
  Potential phi_next;
  Potential star_next;
  bool decreased = false;
};

void ascend_one(const NeumannPoisson& solver, const Measure& nu,
                const Measure& mu, MeasureState& st, double eff_eta,
                int split_k) {
  st.val_entry = dual_value(nu, mu, st.phi, st.star);
  AscentStep step =
      ascent_step(solver, nu, mu, st.phi, st.star, eff_eta, split_k);
  st.decreased = step.value < st.val_entry;
  st.phi_next = std::move(step.phi);
  st.star_next = std::move(step.phi_star);
}

}  // namespace

BarycenterResult compute_barycenter(const std::vector<Measure>& measures,
                                    const BarycenterOptions& opt) {
  if (measures.empty()) throw std::invalid_argument("no measures");
  const Grid grid = measures.front().grid;
  for (const Measure& mu : measures) {
    require_same_grid(grid, mu.grid);
    validate_measure(mu);
  }
  if (opt.iters < 0) throw std::invalid_argument("iters must be >= 0");
  const int n = static_cast<int>(measures.size());

  Measure nu;
  nu.grid = grid;
  nu.mass = ArrayXd::Zero(grid.size());
  for (const Measure& mu : measures) nu.mass += mu.mass;
  nu.mass /= n;
  if (opt.floor_eps > 0.0) {
    ScalarField raw{grid, nu.mass};
    nu = normalize(raw, opt.floor_eps);
  }

  Potential q = quadratic_potential(grid);
  Potential q_star = conjugate(q);
  std::vector<MeasureState> states(n);
  for (MeasureState& st : states) {
    st.phi = q;
    st.star = q_star;
    st.eta = opt.eta0;
  }

  const int workers =
      opt.deterministic ? 1 : std::max(1, std::min(opt.threads, n));
  std::vector<std::unique_ptr<NeumannPoisson>> solvers;
  solvers.reserve(workers);
  for (int w = 0; w < workers; ++w)
    solvers.push_back(std::make_unique<NeumannPoisson>(grid));

  BarycenterResult out;
  out.reports.reserve(opt.iters);

  for (int t = 1; t <= opt.iters; ++t) {
    if (workers == 1) {
      for (int i = 0; i < n; ++i)
        ascend_one(*solvers[0], nu, measures[i], states[i],
                   states[i].eta / n, opt.split_k);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (int i = w; i < n; i += workers)
            ascend_one(*solvers[w], nu, measures[i], states[i],
                       states[i].eta / n, opt.split_k);
        });
      }
      for (std::thread& th : pool) th.join();
    }

    Potential phi_bar{grid, ArrayXd::Zero(grid.size()), true};
    for (const MeasureState& st : states)
      phi_bar.v += opt.use_updated_potentials ? st.phi_next.v : st.phi.v;
    phi_bar.v /= n;

    IterationReport rep;
    rep.t = t;
    rep.dual_values.resize(n);
    rep.eta.resize(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      rep.dual_values[i] = states[i].val_entry;
      rep.eta[i] = states[i].eta;
      sum += states[i].val_entry;
    }
    rep.objective = sum / n;
    rep.stationarity = stationarity_metric(nu, phi_bar);
    rep.tau = tau_at(opt.tau_schedule, opt.tau0, t, opt.iters);
    out.reports.push_back(std::move(rep));

    nu = descent_step(nu, phi_bar, out.reports.back().tau, opt.split_k);
    validate_measure(nu);

    for (MeasureState& st : states) {
      if (st.decreased) st.eta *= opt.eta_decay;
      st.phi = std::move(st.phi_next);
      st.star = std::move(st.star_next);
    }
  }

  out.barycenter = std::move(nu);
  out.potentials.reserve(n);
  for (MeasureState& st : states) out.potentials.push_back(std::move(st.phi));
  return out;
}

}  // namespace wbary
