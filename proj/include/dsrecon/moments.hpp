#pragma once

#include <Eigen/Dense>

namespace dsr {

// Standard normal pdf / cdf.
double norm_pdf(double x);
double norm_cdf(double x);

// Moments of the rectified coordinates of z ~ N(mu, C) for one time step,
// built from per-coordinate truncated-Gaussian moments plus Gaussian
// cross-moment identities over the full covariance block:
//   E[phi(z)_m]          = mu_m Phi(a_m) + s_m pdf(a_m),  a_m = mu_m / s_m
//   E[z_l phi(z)_m]      = mu_l E[phi_m] + (C_lm / s_m^2) (E[z_m phi_m] - mu_m E[phi_m])
//   E[phi_l phi_m], l!=m = E[phi_l] E[phi_m] + C_lm Phi(a_l) Phi(a_m)
//   E[phi_m^2]           = (mu_m^2 + s_m^2) Phi(a_m) + mu_m s_m pdf(a_m)
// The z-phi cross term is exact for jointly Gaussian pairs; the phi-phi
// off-diagonal is the first-order expansion in the cross covariance.
struct ReluMoments {
  Eigen::VectorXd Ephi;     // M
  Eigen::MatrixXd Ezphi;    // M x M, entry (l, m) = E[z_l phi(z_m)]
  Eigen::MatrixXd Ephiphi;  // M x M
};

ReluMoments relu_moments_step(const Eigen::VectorXd& mu,
                              const Eigen::MatrixXd& cov);

// E[u phi(z)_m] for a Gaussian pair (u, z) with E[u] = mu_u and
// Cov(u_l, z_m) = cross(l, m); used for the lagged regression moments.
Eigen::MatrixXd cross_phi_moment(const Eigen::VectorXd& mu_u,
                                 const Eigen::MatrixXd& cross,
                                 const Eigen::VectorXd& mu_z,
                                 const Eigen::MatrixXd& cov_z);

}  // namespace dsr
