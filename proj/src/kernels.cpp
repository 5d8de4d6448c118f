#include "dsrecon/kernels.hpp"

#include <algorithm>
#include <cstring>

#include "dsrecon/errors.hpp"

namespace dsr::kernels {

int configured_threads() {
  static const int cached = [] {
    int n = 1;
#ifdef _OPENMP
    n = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("DSRECON_THREADS")) {
      const int cap = std::atoi(env);
      if (cap >= 1) n = std::min(n, cap);
    }
    return n;
  }();
  return cached;
}

bool in_parallel_region() {
#ifdef _OPENMP
  return omp_in_parallel() != 0;
#else
  return false;
#endif
}

namespace {

void moments_into(const Eigen::MatrixXd& mu,
                  const std::vector<Eigen::MatrixXd>& cov,
                  ReluMomentsBatch& out, long t) {
  const ReluMoments m = relu_moments_step(mu.row(t).transpose(), cov[t]);
  out.Ephi.row(t) = m.Ephi.transpose();
  out.Ezphi[t] = m.Ezphi;
  out.Ephiphi[t] = m.Ephiphi;
}

inline long flat_bin(const Eigen::MatrixXd& points, long i,
                     const Eigen::VectorXd& lo,
                     const Eigen::VectorXd& inv_width, int bins) {
  long idx = 0, stride = 1;
  for (int d = 0; d < points.cols(); ++d) {
    int b = static_cast<int>((points(i, d) - lo[d]) * inv_width[d]);
    b = std::clamp(b, 0, bins - 1);
    idx += stride * b;
    stride *= bins;
  }
  return idx;
}

}  // namespace

namespace serial {

ReluMomentsBatch relu_moments_batch(const Eigen::MatrixXd& mu,
                                    const std::vector<Eigen::MatrixXd>& cov) {
  const long T = mu.rows();
  ReluMomentsBatch out;
  out.Ephi.resize(T, mu.cols());
  out.Ezphi.resize(T);
  out.Ephiphi.resize(T);
  for (long t = 0; t < T; ++t) moments_into(mu, cov, out, t);
  return out;
}

std::vector<long> histogram_counts(const Eigen::MatrixXd& points,
                                   const Eigen::VectorXd& lo,
                                   const Eigen::VectorXd& inv_width,
                                   int bins_per_dim) {
  long n_bins = 1;
  for (int d = 0; d < points.cols(); ++d) n_bins *= bins_per_dim;
  std::vector<long> counts(n_bins, 0);
  for (long i = 0; i < points.rows(); ++i)
    ++counts[flat_bin(points, i, lo, inv_width, bins_per_dim)];
  return counts;
}

}  // namespace serial

ReluMomentsBatch relu_moments_batch(const Eigen::MatrixXd& mu,
                                    const std::vector<Eigen::MatrixXd>& cov,
                                    bool force_serial) {
  require(static_cast<long>(cov.size()) == mu.rows(),
          "relu_moments_batch: one covariance block per time step");
  const long T = mu.rows();
  ReluMomentsBatch out;
  out.Ephi.resize(T, mu.cols());
  out.Ezphi.resize(T);
  out.Ephiphi.resize(T);
  parallel_for(
      T, [&](long t) { moments_into(mu, cov, out, t); }, force_serial);
  return out;
}

std::vector<long> histogram_counts(const Eigen::MatrixXd& points,
                                   const Eigen::VectorXd& lo,
                                   const Eigen::VectorXd& inv_width,
                                   int bins_per_dim, bool force_serial) {
  require(lo.size() == points.cols() && inv_width.size() == points.cols(),
          "histogram_counts: grid dimension mismatch");
  const long n = points.rows();
#ifdef _OPENMP
  if (should_parallelize(n, force_serial)) {
    long n_bins = 1;
    for (int d = 0; d < points.cols(); ++d) n_bins *= bins_per_dim;
    const int nt = configured_threads();
    std::vector<std::vector<long>> local(nt);
#pragma omp parallel num_threads(nt)
    {
      const int tid = omp_get_thread_num();
      local[tid].assign(n_bins, 0);
#pragma omp for schedule(static)
      for (long i = 0; i < n; ++i)
        ++local[tid][flat_bin(points, i, lo, inv_width, bins_per_dim)];
    }
    std::vector<long> counts(n_bins, 0);
    for (const auto& l : local) {
      if (l.empty()) continue;
      for (long b = 0; b < n_bins; ++b) counts[b] += l[b];
    }
    return counts;
  }
#endif
  (void)force_serial;
  return serial::histogram_counts(points, lo, inv_width, bins_per_dim);
}

}  // namespace dsr::kernels
