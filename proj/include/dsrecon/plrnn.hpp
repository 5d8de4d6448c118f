#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "dsrecon/rng.hpp"

namespace dsr {

// Latent process z_t = A z_{t-1} + W relu(z_{t-1}) + h + F s_t + noise with
// diagonal A, zero-diagonal coupling W and diagonal process covariance.
struct LatentParams {
  Eigen::VectorXd mu0;    // initial mean
  Eigen::VectorXd a;      // diagonal of the auto-regression matrix
  Eigen::MatrixXd W;      // M x M coupling, zero diagonal
  Eigen::VectorXd h;      // bias
  Eigen::MatrixXd F;      // M x Q input weights (Q may be 0)
  Eigen::VectorXd sigma;  // diagonal process variances, all > 0

  int dim() const { return static_cast<int>(a.size()); }
  int input_dim() const { return static_cast<int>(F.cols()); }

  // Zero the W diagonal and floor sigma; called on construction and after
  // every parameter update.
  void enforce_structure(double sigma_floor = 1e-6);

  // Near-stable initialization used for training restarts.
  static LatentParams init(int M, int Q, Rng& rng);
};

struct Trajectory {
  Eigen::MatrixXd Z;  // T x M latent states
  std::uint64_t seed = 0;
  bool noise_on = false;
};

constexpr double kDivergenceThreshold = 1e10;

Eigen::VectorXd relu(const Eigen::VectorXd& v);

// A o z + W relu(z) + h (+ F s when s given).
Eigen::VectorXd latent_step_mean(const LatentParams& p, const Eigen::VectorXd& z,
                                 const Eigen::VectorXd* s = nullptr);

// inputs: optional T x Q matrix. Throws Diverged when any |z| exceeds the
// divergence threshold.
Trajectory simulate_prior(const LatentParams& p, int T,
                          const Eigen::MatrixXd* inputs, bool noise_on,
                          std::uint64_t seed);

// A + W D(z) with D(z) = diag(1[z_m > 0]).
Eigen::MatrixXd jacobian_at(const LatentParams& p, const Eigen::VectorXd& z);

// Maximal Lyapunov exponent along the deterministic orbit from z0, via
// tangent-space products with periodic QR re-orthonormalization.
double max_lyapunov(const LatentParams& p, long T, const Eigen::VectorXd& z0,
                    const Eigen::MatrixXd* inputs = nullptr,
                    int qr_every = 10);

}  // namespace dsr
