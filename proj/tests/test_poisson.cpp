#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wbary/errors.hpp"
#include "wbary/oracle.hpp"
#include "wbary/poisson.hpp"
#include "support.hpp"

using namespace wbary;

namespace {

// DCT-II basis vector along one axis with eigenvalue (2 - 2cos(pi k/n))/h^2.
ArrayXd cosine_mode(const Grid& g, int k) {
  ArrayXd v(g.n);
  for (int i = 0; i < g.n; ++i)
    v[i] = std::cos(M_PI * k * (2 * i + 1) / (2.0 * g.n));
  return v;
}

double eigenvalue(const Grid& g, int k) {
  return (2.0 - 2.0 * std::cos(M_PI * k / g.n)) / (g.h() * g.h());
}

}  // namespace

TEST_CASE("zero right-hand side maps to zero") {
  Grid g{2, 12};
  NeumannPoisson solver(g);
  ArrayXd u = solver.neg_inv_laplacian(ArrayXd::Zero(g.size()));
  CHECK(u.abs().maxCoeff() == 0.0);
}

TEST_CASE("cosine modes are eigenvectors") {
  SUBCASE("1D") {
    Grid g{1, 16};
    NeumannPoisson solver(g);
    for (int k : {1, 3, 7, 15}) {
      ArrayXd rhs = cosine_mode(g, k);
      ArrayXd u = solver.neg_inv_laplacian(rhs, 1e-9);
      CHECK((u - rhs / eigenvalue(g, k)).abs().maxCoeff() <= 1e-12);
    }
  }
  SUBCASE("2D product mode") {
    Grid g{2, 16};
    NeumannPoisson solver(g);
    ArrayXd m1 = cosine_mode(g, 2), m2 = cosine_mode(g, 5);
    ArrayXd rhs(g.size());
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) rhs[flat(g, i, j)] = m1[i] * m2[j];
    ArrayXd u = solver.neg_inv_laplacian(rhs, 1e-9);
    double lam = eigenvalue(g, 2) + eigenvalue(g, 5);
    CHECK((u - rhs / lam).abs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("matches the dense oracle on random mean-zero data") {
  std::mt19937 rng(42);
  for (int dim : {1, 2}) {
    Grid g{dim, 16};
    NeumannPoisson solver(g);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      ArrayXd rhs = tsup::random_field(rng, g.size(), -1.0, 1.0);
      rhs -= rhs.mean();
      ArrayXd fast = solver.neg_inv_laplacian(rhs);
      ScalarField dense = oracle::dense_neumann_solve({g, rhs});
      worst = std::max(worst, (fast - dense.v).abs().maxCoeff());
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("solving then applying the stencil reproduces the rhs") {
  std::mt19937 rng(7);
  Grid g{2, 24};
  NeumannPoisson solver(g);
  ArrayXd rhs = tsup::random_field(rng, g.size(), -1.0, 1.0);
  rhs -= rhs.mean();
  ScalarField u{g, solver.neg_inv_laplacian(rhs)};
  ArrayXd back = oracle::apply_neg_laplacian(u).v;
  double rel = (back - rhs).abs().maxCoeff() / rhs.abs().maxCoeff();
  CHECK(rel <= 1e-10);
}

TEST_CASE("linearity, symmetry, positivity, mean-zero output") {
  std::mt19937 rng(9);
  Grid g{1, 32};
  NeumannPoisson solver(g);
  ArrayXd r1 = tsup::random_field(rng, g.size(), -1.0, 1.0);
  ArrayXd r2 = tsup::random_field(rng, g.size(), -1.0, 1.0);
  r1 -= r1.mean();
  r2 -= r2.mean();
  ArrayXd u1 = solver.neg_inv_laplacian(r1);
  ArrayXd u2 = solver.neg_inv_laplacian(r2);

  ArrayXd combo = solver.neg_inv_laplacian(0.5 * r1 - 2.0 * r2, 1e-9);
  CHECK((combo - (0.5 * u1 - 2.0 * u2)).abs().maxCoeff() <= 1e-12);

  // (-Laplacian)^+ is symmetric positive definite on mean-zero data
  CHECK(std::abs((r1 * u2).sum() - (u1 * r2).sum()) <= 1e-10);
  CHECK((r1 * u1).sum() > 0.0);
  CHECK((r2 * u2).sum() > 0.0);

  CHECK(std::abs(u1.mean()) <= 1e-13);
  CHECK(std::abs(u2.mean()) <= 1e-13);
}

TEST_CASE("input validation") {
  Grid g{1, 8};
  NeumannPoisson solver(g);
  CHECK_THROWS_AS(solver.neg_inv_laplacian(ArrayXd::Ones(8)), NotMeanZero);
  CHECK_THROWS_AS(solver.neg_inv_laplacian(ArrayXd::Zero(5)), GridMismatch);
  ArrayXd bad = ArrayXd::Zero(8);
  bad[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(solver.neg_inv_laplacian(bad), NonFiniteInput);
}

TEST_CASE("free-function wrapper and instance determinism") {
  std::mt19937 rng(21);
  Grid g{2, 10};
  ArrayXd rhs = tsup::random_field(rng, g.size(), -1.0, 1.0);
  rhs -= rhs.mean();

  NeumannPoisson a(g), b(g);
  ArrayXd ua = a.neg_inv_laplacian(rhs);
  ArrayXd ub = b.neg_inv_laplacian(rhs);
  CHECK((ua - ub).abs().maxCoeff() == 0.0);

  ScalarField uf = neg_inv_laplacian(ScalarField{g, rhs});
  CHECK((uf.v - ua).abs().maxCoeff() == 0.0);
}
