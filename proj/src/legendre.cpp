#include "wbary/legendre.hpp"

#include <vector>

namespace wbary {

namespace detail {

void conjugate_sweep(const double* v, const double* x, int n, double* out,
                     int* hull) {
  // lower hull of (x_i, v_i); collinear middle points are dropped so the
  // sweep below lands on the smallest maximizer index, like the brute scan
  int m = 0;
  for (int i = 0; i < n; ++i) {
    while (m >= 2) {
      const int a = hull[m - 2], b = hull[m - 1];
      if ((v[b] - v[a]) * (x[i] - x[b]) >= (v[i] - v[b]) * (x[b] - x[a]))
        --m;
      else
        break;
    }
    hull[m++] = i;
  }
  int k = 0;
  for (int j = 0; j < n; ++j) {
    const double y = x[j];
    while (k + 1 < m &&
           x[hull[k + 1]] * y - v[hull[k + 1]] > x[hull[k]] * y - v[hull[k]])
      ++k;
    out[j] = x[hull[k]] * y - v[hull[k]];
  }
}

}  // namespace detail

ArrayXd conjugate_1d(const ArrayXd& values, const ArrayXd& coords) {
  if (!values.allFinite()) throw NonFiniteInput("conjugate_1d: non-finite");
  const int n = static_cast<int>(values.size());
  ArrayXd out(n);
  std::vector<int> hull(n);
  detail::conjugate_sweep(values.data(), coords.data(), n, out.data(),
                          hull.data());
  return out;
}

Potential conjugate_2d(const Potential& phi) {
  if (!phi.v.allFinite()) throw NonFiniteInput("conjugate_2d: non-finite");
  const Grid& g = phi.grid;
  const int n = g.n;
  const ArrayXd x = g.coords();
  Potential out{g, ArrayXd(g.size()), true};
  ArrayXd mid(g.size());
  std::vector<int> hull(n);
  // rows: mid(i, j2) = max_j (x_j y_j2 - phi(i, j))
  for (int i = 0; i < n; ++i)
    detail::conjugate_sweep(phi.v.data() + Index(i) * n, x.data(), n,
                            mid.data() + Index(i) * n, hull.data());
  // columns: out(j1, j2) = max_i (x_i y_j1 + mid(i, j2))
  ArrayXd col(n), colOut(n);
  for (int j2 = 0; j2 < n; ++j2) {
    for (int i = 0; i < n; ++i) col[i] = -mid[Index(i) * n + j2];
    detail::conjugate_sweep(col.data(), x.data(), n, colOut.data(),
                            hull.data());
    for (int i = 0; i < n; ++i) out.v[Index(i) * n + j2] = colOut[i];
  }
  return out;
}

Potential conjugate(const Potential& phi) {
  if (phi.grid.dim == 1) {
    if (!phi.v.allFinite()) throw NonFiniteInput("conjugate: non-finite");
    return Potential{phi.grid, conjugate_1d(phi.v, phi.grid.coords()), true};
  }
  return conjugate_2d(phi);
}

Potential convexify(const Potential& phi) { return conjugate(conjugate(phi)); }

bool grid_convex(const Potential& phi, double tol) {
  const Grid& g = phi.grid;
  const int n = g.n;
  if (g.dim == 1) {
    for (int i = 1; i + 1 < n; ++i)
      if (phi.v[i + 1] - 2.0 * phi.v[i] + phi.v[i - 1] < -tol) return false;
    return true;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 1; j + 1 < n; ++j)
      if (phi.v[flat(g, i, j + 1)] - 2.0 * phi.v[flat(g, i, j)] +
              phi.v[flat(g, i, j - 1)] <
          -tol)
        return false;
  for (int j = 0; j < n; ++j)
    for (int i = 1; i + 1 < n; ++i)
      if (phi.v[flat(g, i + 1, j)] - 2.0 * phi.v[flat(g, i, j)] +
              phi.v[flat(g, i - 1, j)] <
          -tol)
        return false;
  return true;
}

}  // namespace wbary
