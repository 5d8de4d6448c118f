#pragma once

#include <Eigen/Dense>
#include <cstdlib>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dsrecon/moments.hpp"

namespace dsr::kernels {

// Worker cap: DSRECON_THREADS when set, otherwise the OpenMP default.
int configured_threads();

// True inside an active OpenMP parallel region (nested loops stay serial).
bool in_parallel_region();

inline bool should_parallelize(long n, bool force_serial) {
  if (force_serial || in_parallel_region()) return false;
  return configured_threads() > 1 && n >= 2;
}

// Independent index tasks with static scheduling; results must be written to
// per-index slots so serial and parallel execution are bit-identical.
template <class F>
void parallel_for(long n, F&& fn, bool force_serial = false) {
#ifdef _OPENMP
  if (should_parallelize(n, force_serial)) {
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
#endif
  for (long i = 0; i < n; ++i) fn(i);
}

// Deterministic reduction: indices are split into fixed chunks of kChunk,
// each chunk accumulated in index order, chunk partials merged in chunk
// order. The result is independent of the thread count, and the serial
// reference follows the same association.
constexpr long kReduceChunk = 256;

template <class State, class PerIndex, class Merge>
State chunked_reduce(long n, State zero, PerIndex&& accumulate, Merge&& merge,
                     bool force_serial = false) {
  const long n_chunks = n > 0 ? (n + kReduceChunk - 1) / kReduceChunk : 0;
  std::vector<State> partials(static_cast<size_t>(n_chunks), zero);
  parallel_for(
      n_chunks,
      [&](long c) {
        const long lo = c * kReduceChunk;
        const long hi = std::min(n, lo + kReduceChunk);
        for (long i = lo; i < hi; ++i) accumulate(partials[c], i);
      },
      force_serial);
  State total = std::move(zero);
  for (auto& p : partials) merge(total, std::move(p));
  return total;
}

struct ReluMomentsBatch {
  Eigen::MatrixXd Ephi;                  // T x M
  std::vector<Eigen::MatrixXd> Ezphi;    // T blocks M x M
  std::vector<Eigen::MatrixXd> Ephiphi;  // T blocks M x M
};

namespace serial {
ReluMomentsBatch relu_moments_batch(const Eigen::MatrixXd& mu,
                                    const std::vector<Eigen::MatrixXd>& cov);
std::vector<long> histogram_counts(const Eigen::MatrixXd& points,
                                   const Eigen::VectorXd& lo,
                                   const Eigen::VectorXd& inv_width,
                                   int bins_per_dim);
}  // namespace serial

// mu is T x M; cov holds T covariance blocks (may be zero matrices).
ReluMomentsBatch relu_moments_batch(const Eigen::MatrixXd& mu,
                                    const std::vector<Eigen::MatrixXd>& cov,
                                    bool force_serial = false);

// Occupancy counts over a regular grid with bins_per_dim bins per dimension,
// flat index fastest along dimension 0. Out-of-range points are clamped to
// the boundary bins.
std::vector<long> histogram_counts(const Eigen::MatrixXd& points,
                                   const Eigen::VectorXd& lo,
                                   const Eigen::VectorXd& inv_width,
                                   int bins_per_dim,
                                   bool force_serial = false);

}  // namespace dsr::kernels
