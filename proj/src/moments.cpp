#include "dsrecon/moments.hpp"

#include <cmath>

namespace dsr {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kSigmaFloor = 1e-8;
}  // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

ReluMoments relu_moments_step(const Eigen::VectorXd& mu,
                              const Eigen::MatrixXd& cov) {
  const int M = static_cast<int>(mu.size());
  Eigen::VectorXd sd(M), cdf(M), ephi(M), ezphi_diag(M);
  for (int m = 0; m < M; ++m) {
    const double var = std::max(cov(m, m), 0.0);
    sd[m] = std::sqrt(var);
    if (sd[m] < kSigmaFloor) {
      cdf[m] = mu[m] > 0.0 ? 1.0 : 0.0;
      ephi[m] = std::max(mu[m], 0.0);
      ezphi_diag[m] = mu[m] * ephi[m];
    } else {
      const double alpha = mu[m] / sd[m];
      cdf[m] = norm_cdf(alpha);
      const double pdf = norm_pdf(alpha);
      ephi[m] = mu[m] * cdf[m] + sd[m] * pdf;
      ezphi_diag[m] = (mu[m] * mu[m] + sd[m] * sd[m]) * cdf[m] +
                      mu[m] * sd[m] * pdf;
    }
  }

  ReluMoments out;
  out.Ephi = ephi;
  out.Ezphi.resize(M, M);
  out.Ephiphi.resize(M, M);
  for (int m = 0; m < M; ++m) {
    const double var_m = sd[m] * sd[m];
    const double centered = ezphi_diag[m] - mu[m] * ephi[m];
    for (int l = 0; l < M; ++l) {
      if (l == m) {
        out.Ezphi(m, m) = ezphi_diag[m];
        out.Ephiphi(m, m) = ezphi_diag[m];
        continue;
      }
      const double slope = var_m > kSigmaFloor * kSigmaFloor
                               ? cov(l, m) / var_m
                               : 0.0;
      out.Ezphi(l, m) = mu[l] * ephi[m] + slope * centered;
      out.Ephiphi(l, m) = ephi[l] * ephi[m] + cov(l, m) * cdf[l] * cdf[m];
    }
  }
  // phi-phi is a second-moment matrix; keep it exactly symmetric.
  out.Ephiphi = 0.5 * (out.Ephiphi + out.Ephiphi.transpose()).eval();
  return out;
}

Eigen::MatrixXd cross_phi_moment(const Eigen::VectorXd& mu_u,
                                 const Eigen::MatrixXd& cross,
                                 const Eigen::VectorXd& mu_z,
                                 const Eigen::MatrixXd& cov_z) {
  const int Lu = static_cast<int>(mu_u.size());
  const int M = static_cast<int>(mu_z.size());
  Eigen::MatrixXd out(Lu, M);
  for (int m = 0; m < M; ++m) {
    const double var = std::max(cov_z(m, m), 0.0);
    const double sd = std::sqrt(var);
    double ephi, centered;
    if (sd < kSigmaFloor) {
      ephi = std::max(mu_z[m], 0.0);
      centered = 0.0;
    } else {
      const double alpha = mu_z[m] / sd;
      const double cdf = norm_cdf(alpha), pdf = norm_pdf(alpha);
      ephi = mu_z[m] * cdf + sd * pdf;
      const double ezphi =
          (mu_z[m] * mu_z[m] + var) * cdf + mu_z[m] * sd * pdf;
      centered = ezphi - mu_z[m] * ephi;
    }
    for (int l = 0; l < Lu; ++l) {
      const double slope = var > kSigmaFloor * kSigmaFloor
                               ? cross(l, m) / var
                               : 0.0;
      out(l, m) = mu_u[l] * ephi + slope * centered;
    }
  }
  return out;
}

}  // namespace dsr
