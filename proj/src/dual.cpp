#include "wbary/dual.hpp"

#include <cmath>

#include "wbary/legendre.hpp"
#include "wbary/transport.hpp"

namespace wbary {

double dual_value(const Measure& nu, const Measure& mu, const Potential& phi,
                  const Potential& phi_star) {
  require_same_grid(nu.grid, mu.grid);
  require_same_grid(nu.grid, phi.grid);
  require_same_grid(nu.grid, phi_star.grid);
  Potential q = quadratic_potential(nu.grid);
  return ((q.v - phi.v) * nu.mass).sum() + ((q.v - phi_star.v) * mu.mass).sum();
}

ScalarField h1_gradient(const NeumannPoisson& solver, const Measure& nu,
                        const Measure& mu, const Potential& phi_star,
                        int split_k) {
  require_same_grid(nu.grid, mu.grid);
  Measure push = pushforward(mu, phi_star, split_k);
  ArrayXd r = push.mass - nu.mass;
  // Both mass vectors sum to one, so the mean is roundoff; removing it makes
  // the zero-frequency pin in the solver an exact projection.
  r -= r.mean();
  const double hd = std::pow(nu.grid.h(), nu.grid.dim);
  // The compatibility guard must tolerate the 1/h^d scaling: the roundoff
  // bound holds for r itself, and dividing by h^d amplifies it equally.
  return ScalarField{nu.grid, solver.neg_inv_laplacian(r / hd, 1e-10 / hd)};
}

ScalarField h1_gradient(const Measure& nu, const Measure& mu,
                        const Potential& phi, int split_k) {
  Potential star = conjugate(phi);
  ScalarField rhs{nu.grid, ArrayXd()};
  Measure push = pushforward(mu, star, split_k);
  ArrayXd r = push.mass - nu.mass;
  r -= r.mean();
  const double hd = std::pow(nu.grid.h(), nu.grid.dim);
  rhs.v = r / hd;
  return neg_inv_laplacian(rhs, 1e-10 / hd);
}

AscentStep ascent_step(const NeumannPoisson& solver, const Measure& nu,
                       const Measure& mu, const Potential& phi,
                       const Potential& phi_star, double eta, int split_k) {
  ScalarField u = h1_gradient(solver, nu, mu, phi_star, split_k);
  Potential hat{phi.grid, phi.v + eta * u.v, false};
  AscentStep out;
  out.phi_star = conjugate(hat);
  out.phi = conjugate(out.phi_star);
  out.value = dual_value(nu, mu, out.phi, out.phi_star);
  return out;
}

AscentStep ascent_step(const Measure& nu, const Measure& mu,
                       const Potential& phi, double eta, int split_k) {
  ScalarField u = h1_gradient(nu, mu, phi, split_k);
  Potential hat{phi.grid, phi.v + eta * u.v, false};
  AscentStep out;
  out.phi_star = conjugate(hat);
  out.phi = conjugate(out.phi_star);
  out.value = dual_value(nu, mu, out.phi, out.phi_star);
  return out;
}

W2Result solve_w2(const Measure& nu, const Measure& mu, const W2Options& opt) {
  require_same_grid(nu.grid, mu.grid);
  NeumannPoisson solver(nu.grid);
  Potential phi = quadratic_potential(nu.grid);
  Potential star = conjugate(phi);
  double value = dual_value(nu, mu, phi, star);
  W2Result out;
  out.value = value;
  out.phi = phi;
  out.trace.reserve(opt.iters + 1);
  out.trace.push_back(value);
  double eta = opt.eta0;
  for (int t = 0; t < opt.iters; ++t) {
    AscentStep step = ascent_step(solver, nu, mu, phi, star, eta, opt.split_k);
    if (step.value < value) eta *= opt.eta_decay;
    phi = std::move(step.phi);
    star = std::move(step.phi_star);
    value = step.value;
    out.trace.push_back(value);
    if (value > out.value) {
      out.value = value;
      out.phi = phi;
    }
  }
  return out;
}

}  // namespace wbary
