#include "wbary/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace wbary {

namespace {
// FFTW plan creation/destruction is not thread-safe
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

NeumannPoisson::NeumannPoisson(const Grid& g) : grid_(g) {
  const int n = g.n;
  buf_.resize(g.size());
  ArrayXd lam(n);
  const double h = g.h();
  for (int k = 0; k < n; ++k)
    lam[k] = (2.0 - 2.0 * std::cos(M_PI * k / n)) / (h * h);
  const double norm = (g.dim == 1) ? 2.0 * n : 4.0 * double(n) * n;
  inv_eigs_.resize(g.size());
  if (g.dim == 1) {
    inv_eigs_[0] = 0.0;
    for (int k = 1; k < n; ++k) inv_eigs_[k] = 1.0 / (norm * lam[k]);
  } else {
    for (int k1 = 0; k1 < n; ++k1)
      for (int k2 = 0; k2 < n; ++k2) {
        const Index id = flat(g, k1, k2);
        const double l = lam[k1] + lam[k2];
        inv_eigs_[id] = (k1 == 0 && k2 == 0) ? 0.0 : 1.0 / (norm * l);
      }
  }
  std::lock_guard<std::mutex> lock(plan_mutex());
  if (g.dim == 1) {
    fwd_ = fftw_plan_r2r_1d(n, buf_.data(), buf_.data(), FFTW_REDFT10,
                            FFTW_ESTIMATE);
    inv_ = fftw_plan_r2r_1d(n, buf_.data(), buf_.data(), FFTW_REDFT01,
                            FFTW_ESTIMATE);
  } else {
    fwd_ = fftw_plan_r2r_2d(n, n, buf_.data(), buf_.data(), FFTW_REDFT10,
                            FFTW_REDFT10, FFTW_ESTIMATE);
    inv_ = fftw_plan_r2r_2d(n, n, buf_.data(), buf_.data(), FFTW_REDFT01,
                            FFTW_REDFT01, FFTW_ESTIMATE);
  }
}

NeumannPoisson::~NeumannPoisson() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

ArrayXd NeumannPoisson::neg_inv_laplacian(const ArrayXd& rhs,
                                          double mean_tol) const {
  if (rhs.size() != grid_.size())
    throw GridMismatch("neg_inv_laplacian: rhs size vs grid");
  if (!rhs.allFinite()) throw NonFiniteInput("neg_inv_laplacian: non-finite");
  if (std::abs(rhs.sum()) > mean_tol)
    throw NotMeanZero("neg_inv_laplacian: rhs sum exceeds tolerance");
  buf_ = rhs;
  fftw_execute(static_cast<fftw_plan>(fwd_));
  buf_ *= inv_eigs_;  // zero mode pinned: exact mean-zero projection
  fftw_execute(static_cast<fftw_plan>(inv_));
  return buf_;
}

ScalarField neg_inv_laplacian(const ScalarField& rhs, double mean_tol) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<NeumannPoisson>>
      cache;
  auto& slot = cache[{rhs.grid.dim, rhs.grid.n}];
  if (!slot) slot = std::make_unique<NeumannPoisson>(rhs.grid);
  return ScalarField{rhs.grid, slot->neg_inv_laplacian(rhs.v, mean_tol)};
}

}  // namespace wbary
