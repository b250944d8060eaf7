#include "wbary/grid.hpp"

#include <cmath>

namespace wbary {

ArrayXd Grid::coords() const {
  ArrayXd x(n);
  for (int i = 0; i < n; ++i) x[i] = node(i);
  return x;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw GridMismatch("grids differ");
}

void validate_measure(const Measure& m, double tol) {
  if (m.mass.size() != m.grid.size()) throw GridMismatch("mass size vs grid");
  if (!m.mass.allFinite()) throw NonFiniteInput("measure has non-finite mass");
  if ((m.mass < 0.0).any()) throw NegativeInput("measure has negative mass");
  if (std::abs(m.mass.sum() - 1.0) > tol)
    throw std::invalid_argument("measure mass does not sum to 1");
}

Measure normalize(const ScalarField& raw, double floor_eps) {
  if (raw.v.size() != raw.grid.size()) throw GridMismatch("field size vs grid");
  if (!raw.v.allFinite()) throw NonFiniteInput("normalize: non-finite input");
  if ((raw.v < 0.0).any()) throw NegativeInput("normalize: negative input");
  const double total = raw.v.sum();
  if (total <= 0.0) throw AllZeroInput("normalize: all-zero input");
  Measure out{raw.grid, ArrayXd(raw.v.size())};
  const double uniform = 1.0 / static_cast<double>(raw.grid.size());
  out.mass = (1.0 - floor_eps) * (raw.v / total) + floor_eps * uniform;
  return out;
}

Potential quadratic_potential(const Grid& g) {
  Potential p{g, ArrayXd(g.size()), true};
  if (g.dim == 1) {
    for (int i = 0; i < g.n; ++i) {
      const double x = g.node(i);
      p.v[i] = 0.5 * x * x;
    }
  } else {
    for (int i = 0; i < g.n; ++i) {
      const double x1 = g.node(i);
      for (int j = 0; j < g.n; ++j) {
        const double x2 = g.node(j);
        p.v[flat(g, i, j)] = 0.5 * (x1 * x1 + x2 * x2);
      }
    }
  }
  return p;
}

Potential cost_complement(const Potential& phi) {
  Potential q = quadratic_potential(phi.grid);
  return Potential{phi.grid, q.v - phi.v, false};
}

}  // namespace wbary
