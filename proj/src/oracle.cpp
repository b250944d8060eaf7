#include "wbary/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wbary/errors.hpp"

namespace wbary::oracle {

ArrayXd conjugate_brute(const ArrayXd& v, const ArrayXd& x) {
  const int n = static_cast<int>(v.size());
  ArrayXd out(n);
  for (int j = 0; j < n; ++j) {
    double y = x[j];
    double best = x[0] * y - v[0];
    for (int i = 1; i < n; ++i) {
      double cand = x[i] * y - v[i];
      if (cand > best) best = cand;  // ties keep the lowest index
    }
    out[j] = best;
  }
  return out;
}

Potential conjugate_brute_2d(const Potential& phi) {
  const Grid& g = phi.grid;
  const int n = g.n;
  Potential out{g, ArrayXd(g.size()), true};
  for (int j1 = 0; j1 < n; ++j1) {
    double y1 = g.node(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      double y2 = g.node(j2);
      double best = -std::numeric_limits<double>::infinity();
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2) {
          double cand =
              g.node(i1) * y1 + g.node(i2) * y2 - phi.v[flat(g, i1, i2)];
          if (cand > best) best = cand;
        }
      out.v[flat(g, j1, j2)] = best;
    }
  }
  return out;
}

Potential conjugate_brute(const Potential& phi) {
  if (phi.grid.dim == 1) {
    Potential out{phi.grid, conjugate_brute(phi.v, phi.grid.coords()), true};
    return out;
  }
  return conjugate_brute_2d(phi);
}

namespace {

struct BasicCell {
  int i, j;
  double flow;
};

}  // namespace

LpSolution lp_ot(const ArrayXd& a, const ArrayXd& b,
                 const Eigen::MatrixXd& cost) {
  const int L = static_cast<int>(a.size());
  const int R = static_cast<int>(b.size());
  if (L < 1 || R < 1 || cost.rows() != L || cost.cols() != R)
    throw GridMismatch("lp_ot: size mismatch");
  if ((a < 0).any() || (b < 0).any())
    throw NegativeInput("lp_ot: negative supply or demand");
  const double ta = a.sum(), tb = b.sum();
  if (std::abs(ta - tb) > 1e-9 * std::max(1.0, ta))
    throw Infeasible("lp_ot: unbalanced supply and demand");

  // Northwest-corner start: walks the staircase from (0,0) to (L-1,R-1),
  // yielding exactly L+R-1 basic cells (some possibly zero).
  std::vector<BasicCell> basis;
  basis.reserve(L + R - 1);
  {
    int i = 0, j = 0;
    double ra = a[0], rb = b[0];
    while (true) {
      double f = std::min(ra, rb);
      basis.push_back({i, j, f});
      if (i == L - 1 && j == R - 1) break;
      if ((ra <= rb && i < L - 1) || j == R - 1) {
        rb = std::max(rb - f, 0.0);
        ra = a[++i];
      } else {
        ra = std::max(ra - f, 0.0);
        rb = b[++j];
      }
    }
  }

  const int nodes = L + R;  // left nodes 0..L-1, right nodes L..L+R-1
  const double eps = 1e-12 * (1.0 + cost.cwiseAbs().maxCoeff());
  std::vector<double> u(L), v(R);
  std::vector<char> seen(nodes);
  std::vector<std::vector<int>> adj(nodes);
  std::vector<int> parent_edge(nodes), order;
  const long max_pivots = 10000L * nodes;

  for (long pivot = 0;; ++pivot) {
    if (pivot == max_pivots)
      throw Infeasible("lp_ot: pivot limit exceeded");

    for (auto& lst : adj) lst.clear();
    for (int c = 0; c < static_cast<int>(basis.size()); ++c) {
      adj[basis[c].i].push_back(c);
      adj[L + basis[c].j].push_back(c);
    }

    // Duals from the basis tree: u_i + v_j = cost(i, j) on basic cells.
    std::fill(seen.begin(), seen.end(), 0);
    order.assign(1, 0);
    seen[0] = 1;
    u[0] = 0.0;
    for (size_t k = 0; k < order.size(); ++k) {
      int node = order[k];
      for (int c : adj[node]) {
        int other = (node < L) ? L + basis[c].j : basis[c].i;
        if (seen[other]) continue;
        seen[other] = 1;
        if (other >= L)
          v[other - L] = cost(basis[c].i, basis[c].j) - u[basis[c].i];
        else
          u[other] = cost(basis[c].i, basis[c].j) - v[basis[c].j];
        order.push_back(other);
      }
    }

    // Entering cell: lowest-index cell with negative reduced cost.
    int ei = -1, ej = -1;
    for (int i = 0; i < L && ei < 0; ++i)
      for (int j = 0; j < R; ++j)
        if (cost(i, j) - u[i] - v[j] < -eps) {
          ei = i;
          ej = j;
          break;
        }
    if (ei < 0) break;  // optimal

    // Unique tree path from left node ei to right node L+ej.
    std::fill(seen.begin(), seen.end(), 0);
    std::deque<int> queue{ei};
    seen[ei] = 1;
    parent_edge[ei] = -1;
    while (!queue.empty()) {
      int node = queue.front();
      queue.pop_front();
      if (node == L + ej) break;
      for (int c : adj[node]) {
        int other = (node < L) ? L + basis[c].j : basis[c].i;
        if (seen[other]) continue;
        seen[other] = 1;
        parent_edge[other] = c;
        queue.push_back(other);
      }
    }

    // Walking back from L+ej, path edges alternate -,+,-,... seen from the
    // entering cell, which takes +theta.
    std::vector<int> path;
    for (int node = L + ej; node != ei;) {
      int c = parent_edge[node];
      path.push_back(c);
      node = (node >= L) ? basis[c].i : L + basis[c].j;
    }
    double theta = std::numeric_limits<double>::infinity();
    int leaving = -1;
    long leaving_cell = -1;
    for (size_t k = path.size() - 1; k < path.size(); k -= 2) {
      // minus edges are every other edge starting from the one at ei's end
      const BasicCell& c = basis[path[k]];
      long cell_id = static_cast<long>(c.i) * R + c.j;
      if (c.flow < theta || (c.flow == theta && cell_id < leaving_cell)) {
        theta = c.flow;
        leaving = path[k];
        leaving_cell = cell_id;
      }
    }
    for (size_t k = path.size() - 1; k < path.size(); --k) {
      bool minus = ((path.size() - 1 - k) % 2) == 0;
      basis[path[k]].flow += minus ? -theta : theta;
    }
    basis[leaving] = {ei, ej, theta};
    for (BasicCell& c : basis) c.flow = std::max(c.flow, 0.0);
  }

  LpSolution out;
  out.plan = Eigen::MatrixXd::Zero(L, R);
  out.value = 0.0;
  for (const BasicCell& c : basis) {
    out.plan(c.i, c.j) += c.flow;
    out.value += c.flow * cost(c.i, c.j);
  }
  return out;
}

Eigen::MatrixXd half_sqdist_cost(const Grid& grid) {
  const Index m = grid.size();
  const int n = grid.n;
  Eigen::MatrixXd cost(m, m);
  if (grid.dim == 1) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double d = grid.node(i) - grid.node(j);
        cost(i, j) = 0.5 * d * d;
      }
  } else {
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j1 = 0; j1 < n; ++j1)
          for (int j2 = 0; j2 < n; ++j2) {
            double d1 = grid.node(i1) - grid.node(j1);
            double d2 = grid.node(i2) - grid.node(j2);
            cost(flat(grid, i1, i2), flat(grid, j1, j2)) =
                0.5 * (d1 * d1 + d2 * d2);
          }
  }
  return cost;
}

namespace {

// Inverse CDF at level q: lowest node index whose CDF reaches q.
inline int inv_cdf(const ArrayXd& cdf, double q) {
  const double* begin = cdf.data();
  const double* end = begin + cdf.size();
  const double* it = std::lower_bound(begin, end, q);
  int idx = static_cast<int>(it - begin);
  return std::min(idx, static_cast<int>(cdf.size()) - 1);
}

ArrayXd cumsum(const ArrayXd& mass) {
  ArrayXd out(mass.size());
  double run = 0.0;
  for (Index i = 0; i < mass.size(); ++i) {
    run += mass[i];
    out[i] = run;
  }
  return out;
}

}  // namespace

double quantile_w2_1d(const Measure& nu, const Measure& mu) {
  require_same_grid(nu.grid, mu.grid);
  if (nu.grid.dim != 1)
    throw GridMismatch("quantile_w2_1d: 1D grids only");
  const ArrayXd cn = cumsum(nu.mass);
  const ArrayXd cm = cumsum(mu.mass);
  const Grid& g = nu.grid;
  const int levels = 10000;
  double total = 0.0;
  for (int l = 0; l <= levels; ++l) {
    double q = static_cast<double>(l) / levels;
    double d = g.node(inv_cdf(cn, q)) - g.node(inv_cdf(cm, q));
    double integrand = 0.5 * d * d;
    total += (l == 0 || l == levels) ? 0.5 * integrand : integrand;
  }
  return total / levels;
}

Measure quantile_barycenter_1d(const std::vector<Measure>& measures) {
  if (measures.empty())
    throw std::invalid_argument("quantile_barycenter_1d: no measures");
  const Grid& g = measures.front().grid;
  if (g.dim != 1) throw GridMismatch("quantile_barycenter_1d: 1D grids only");
  std::vector<ArrayXd> cdfs;
  cdfs.reserve(measures.size());
  for (const Measure& m : measures) {
    require_same_grid(g, m.grid);
    cdfs.push_back(cumsum(m.mass));
  }
  const int levels = 10000;
  const double h = g.h();
  Measure out;
  out.grid = g;
  out.mass = ArrayXd::Zero(g.size());
  for (int l = 0; l < levels; ++l) {
    double q = (l + 0.5) / levels;
    double avg = 0.0;
    for (const ArrayXd& cdf : cdfs) avg += g.node(inv_cdf(cdf, q));
    avg /= static_cast<double>(cdfs.size());
    double f = avg / h;
    int i0 = std::min(std::max(static_cast<int>(std::floor(f)), 0), g.n - 2);
    double r = f - i0;
    out.mass[i0] += (1.0 - r) / levels;
    out.mass[i0 + 1] += r / levels;
  }
  return out;
}

ScalarField apply_neg_laplacian(const ScalarField& u) {
  const Grid& g = u.grid;
  const int n = g.n;
  const double ih2 = 1.0 / (g.h() * g.h());
  ScalarField out{g, ArrayXd::Zero(g.size())};
  if (g.dim == 1) {
    for (int i = 0; i < n; ++i) {
      if (i > 0) out.v[i] += ih2 * (u.v[i] - u.v[i - 1]);
      if (i < n - 1) out.v[i] += ih2 * (u.v[i] - u.v[i + 1]);
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Index id = flat(g, i, j);
        if (i > 0) out.v[id] += ih2 * (u.v[id] - u.v[flat(g, i - 1, j)]);
        if (i < n - 1) out.v[id] += ih2 * (u.v[id] - u.v[flat(g, i + 1, j)]);
        if (j > 0) out.v[id] += ih2 * (u.v[id] - u.v[flat(g, i, j - 1)]);
        if (j < n - 1) out.v[id] += ih2 * (u.v[id] - u.v[flat(g, i, j + 1)]);
      }
  }
  return out;
}

ScalarField dense_neumann_solve(const ScalarField& rhs, double mean_tol) {
  const Grid& g = rhs.grid;
  if (g.n > 64)
    throw std::invalid_argument("dense_neumann_solve: grid too large");
  const Index m = g.size();
  if (rhs.v.size() != m) throw GridMismatch("dense_neumann_solve: size");
  if (!rhs.v.allFinite())
    throw NonFiniteInput("dense_neumann_solve: non-finite rhs");
  if (std::abs(rhs.v.sum()) > mean_tol)
    throw NotMeanZero("dense_neumann_solve: rhs must be mean-zero");

  const int n = g.n;
  const double ih2 = 1.0 / (g.h() * g.h());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  auto couple = [&](Index p, Index q) {
    A(p, p) += ih2;
    A(p, q) -= ih2;
  };
  if (g.dim == 1) {
    for (int i = 0; i + 1 < n; ++i) {
      couple(i, i + 1);
      couple(i + 1, i);
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i + 1 < n) {
          couple(flat(g, i, j), flat(g, i + 1, j));
          couple(flat(g, i + 1, j), flat(g, i, j));
        }
        if (j + 1 < n) {
          couple(flat(g, i, j), flat(g, i, j + 1));
          couple(flat(g, i, j + 1), flat(g, i, j));
        }
      }
  }
  // Rank-one shift pins the constant mode; on mean-zero data the solution
  // coincides with the pseudo-inverse and is itself mean-zero.
  A.array() += 1.0 / static_cast<double>(m);
  Eigen::VectorXd sol = A.ldlt().solve(rhs.v.matrix());
  ScalarField out{g, sol.array()};
  out.v -= out.v.mean();
  return out;
}

}  // namespace wbary::oracle
