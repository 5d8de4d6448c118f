#include "dsrecon/plrnn.hpp"

#include <cmath>

#include "dsrecon/errors.hpp"

namespace dsr {

void LatentParams::enforce_structure(double sigma_floor) {
  W.diagonal().setZero();
  sigma = sigma.cwiseMax(sigma_floor);
}

LatentParams LatentParams::init(int M, int Q, Rng& rng) {
  LatentParams p;
  p.mu0 = Eigen::VectorXd::Zero(M);
  p.a = Eigen::VectorXd::NullaryExpr(M, [&](Eigen::Index) { return rng.uniform(0.5, 0.99); });
  const double w_sd = 1.0 / std::sqrt(static_cast<double>(M));
  p.W = Eigen::MatrixXd::NullaryExpr(
      M, M, [&](Eigen::Index, Eigen::Index) { return rng.normal(0.0, w_sd); });
  p.h = Eigen::VectorXd::Zero(M);
  p.F = Eigen::MatrixXd::Zero(M, Q);
  p.sigma = Eigen::VectorXd::Constant(M, 0.1);
  p.enforce_structure();
  return p;
}

Eigen::VectorXd relu(const Eigen::VectorXd& v) { return v.cwiseMax(0.0); }

Eigen::VectorXd latent_step_mean(const LatentParams& p, const Eigen::VectorXd& z,
                                 const Eigen::VectorXd* s) {
  require(z.size() == p.dim(), "latent_step_mean: state dimension mismatch");
  Eigen::VectorXd m = p.a.cwiseProduct(z) + p.W * relu(z) + p.h;
  if (s != nullptr) {
    require(s->size() == p.input_dim(), "latent_step_mean: input dimension mismatch");
    m.noalias() += p.F * (*s);
  }
  return m;
}

Trajectory simulate_prior(const LatentParams& p, int T,
                          const Eigen::MatrixXd* inputs, bool noise_on,
                          std::uint64_t seed) {
  require(T >= 1, "simulate_prior: T must be >= 1");
  const int M = p.dim();
  if (inputs != nullptr) {
    require(inputs->rows() == T && inputs->cols() == p.input_dim(),
            "simulate_prior: inputs must be T x Q");
  }

  Trajectory traj;
  traj.Z.resize(T, M);
  traj.seed = seed;
  traj.noise_on = noise_on;

  Rng rng(seed);
  const Eigen::VectorXd noise_sd = p.sigma.cwiseSqrt();
  auto draw_noise = [&](Eigen::VectorXd& z) {
    for (int m = 0; m < M; ++m) z[m] += noise_sd[m] * rng.normal();
  };

  Eigen::VectorXd z = p.mu0;
  if (inputs != nullptr) z += p.F * inputs->row(0).transpose();
  if (noise_on) draw_noise(z);
  traj.Z.row(0) = z.transpose();

  for (int t = 1; t < T; ++t) {
    Eigen::VectorXd s;
    const Eigen::VectorXd* s_ptr = nullptr;
    if (inputs != nullptr) {
      s = inputs->row(t).transpose();
      s_ptr = &s;
    }
    z = latent_step_mean(p, z, s_ptr);
    if (noise_on) draw_noise(z);
    if (!z.allFinite() || z.cwiseAbs().maxCoeff() > kDivergenceThreshold)
      throw Diverged("simulate_prior: trajectory left the finite range");
    traj.Z.row(t) = z.transpose();
  }
  return traj;
}

Eigen::MatrixXd jacobian_at(const LatentParams& p, const Eigen::VectorXd& z) {
  const int M = p.dim();
  Eigen::MatrixXd J = p.W;
  for (int m = 0; m < M; ++m)
    if (z[m] <= 0.0) J.col(m).setZero();
  J.diagonal() += p.a;
  return J;
}

double max_lyapunov(const LatentParams& p, long T, const Eigen::VectorXd& z0,
                    const Eigen::MatrixXd* inputs, int qr_every) {
  const int M = p.dim();
  require(T >= 1, "max_lyapunov: T must be >= 1");

  // Tangent basis carried along the orbit; the leading QR diagonal entry
  // accumulates the dominant growth rate. The raw product of Jacobians
  // overflows at large T, hence the periodic re-orthonormalization.
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(M, M);
  Eigen::VectorXd z = z0;
  double sum_log = 0.0;
  long steps_done = 0;

  for (long t = 0; t < T; ++t) {
    Q = jacobian_at(p, z) * Q;
    Eigen::VectorXd s;
    const Eigen::VectorXd* s_ptr = nullptr;
    if (inputs != nullptr && t + 1 < inputs->rows()) {
      s = inputs->row(t + 1).transpose();
      s_ptr = &s;
    }
    z = latent_step_mean(p, z, s_ptr);
    ++steps_done;
    if (!z.allFinite() || z.cwiseAbs().maxCoeff() > kDivergenceThreshold)
      throw Diverged("max_lyapunov: orbit diverged");
    if (steps_done % qr_every == 0 || t + 1 == T) {
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(Q);
      Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
      sum_log += std::log(std::abs(R(0, 0)));
      Q = qr.householderQ() * Eigen::MatrixXd::Identity(M, M);
      // Fix signs so the basis stays right-handed and R(0,0) > 0 next round.
      for (int m = 0; m < M; ++m)
        if (R(m, m) < 0.0) Q.col(m) = -Q.col(m);
    }
  }
  return sum_log / static_cast<double>(steps_done);
}

}  // namespace dsr
