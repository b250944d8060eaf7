#pragma once

#include "wbary/grid.hpp"

namespace wbary {

/** Spectral solver for the discrete zero-Neumann Poisson problem
 *  -Δ_h u = f on the grid, O(m log m) per solve.
 *
 *  The discrete operator is the symmetric path-graph Laplacian scaled by
 *  1/h^2 (1D rows: [1,-1]/h^2 at the ends, [-1,2,-1]/h^2 inside; the 2D
 *  operator is its tensor sum). Its kernel is the constants, so the right
 *  hand side must be mean-zero and the solution is gauged to mean zero by
 *  pinning the zero cosine mode. Diagonalized by the DCT-II basis
 *  cos(pi k (2i+1) / (2n)) with eigenvalues (2 - 2 cos(pi k / n)) / h^2.
 *
 *  One instance owns its FFTW plans and workspace; create one per thread
 *  for concurrent use.
 */
class NeumannPoisson {
 public:
  explicit NeumannPoisson(const Grid& g);
  ~NeumannPoisson();
  NeumannPoisson(const NeumannPoisson&) = delete;
  NeumannPoisson& operator=(const NeumannPoisson&) = delete;

  const Grid& grid() const { return grid_; }

  /** Solves -Δ_h u = rhs for mean-zero rhs (node sum within mean_tol of 0,
   *  else NotMeanZero); small residue is projected out. Output has exact
   *  zero mode (mean zero up to roundoff). */
  ArrayXd neg_inv_laplacian(const ArrayXd& rhs,
                            double mean_tol = 1e-10) const;

 private:
  Grid grid_;
  ArrayXd inv_eigs_;       // 1/((2n)^d * lambda_k), zero mode pinned to 0
  mutable ArrayXd buf_;    // in-place transform workspace
  void* fwd_ = nullptr;    // fftw_plan
  void* inv_ = nullptr;
};

/** Convenience wrapper over a per-thread solver cache keyed by grid. */
ScalarField neg_inv_laplacian(const ScalarField& rhs, double mean_tol = 1e-10);

}  // namespace wbary
