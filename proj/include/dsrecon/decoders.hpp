#pragma once

#include <Eigen/Dense>
#include <variant>

namespace dsr {

// x_t | z_t ~ N(B relu(z_t), diag(gamma))
struct GaussianDecoder {
  Eigen::MatrixXd B;      // N x M
  Eigen::VectorXd gamma;  // N positive variances

  int obs_dim() const { return static_cast<int>(B.rows()); }
};

// c_t | z_t ~ Cat(K, pi(z_t)) with the natural (reference-category) link.
struct CategoricalDecoder {
  int K = 2;
  Eigen::MatrixXd beta;  // (K-1) x M regression weights

  int latent_dim() const { return static_cast<int>(beta.cols()); }
};

// g_t | z_t ~ Gamma(shape omega, rate nu_jt), mean mu_jt = omega / nu_jt,
// log mu_jt = xi_j . z_t.
struct GammaDecoder {
  double omega = 1.0;
  Eigen::MatrixXd xi;  // J x M

  int obs_dim() const { return static_cast<int>(xi.rows()); }
};

// Zero-inflated Poisson: point mass at 0 with probability psi (logit link)
// mixed with Poisson(lambda) (log link).
struct ZipDecoder {
  Eigen::MatrixXd eta;      // L x M, zero-inflation weights
  Eigen::MatrixXd gamma_w;  // L x M, Poisson rate weights

  int obs_dim() const { return static_cast<int>(eta.rows()); }
};

using Decoder =
    std::variant<GaussianDecoder, CategoricalDecoder, GammaDecoder, ZipDecoder>;

double gauss_loglik(const GaussianDecoder& d, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& z);

// pi_i = exp(beta_i . z) / (1 + sum_j exp(beta_j . z)), pi_K the reference;
// computed with max-subtraction, sums to 1.
Eigen::VectorXd cat_probs(const CategoricalDecoder& d, const Eigen::VectorXd& z);

// log(1 + sum_j exp(beta_j . z)) evaluated stably.
double cat_log_normalizer(const CategoricalDecoder& d, const Eigen::VectorXd& z);

// c must be one-hot of length K.
double cat_loglik(const CategoricalDecoder& d, const Eigen::VectorXd& c,
                  const Eigen::VectorXd& z);
double cat_loglik_label(const CategoricalDecoder& d, int label_1based,
                        const Eigen::VectorXd& z);

double gamma_loglik(const GammaDecoder& d, const Eigen::VectorXd& g,
                    const Eigen::VectorXd& z);

double zip_loglik(const ZipDecoder& d, const Eigen::VectorXi& q,
                  const Eigen::VectorXd& z);

struct GradHess {
  Eigen::VectorXd grad;  // d log p / d z
  Eigen::MatrixXd hess;  // d^2 log p / d z d z^T
};

GradHess gauss_grad_hess_z(const GaussianDecoder& d, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& z);
GradHess cat_grad_hess_z(const CategoricalDecoder& d, const Eigen::VectorXd& c,
                         const Eigen::VectorXd& z);
GradHess gamma_grad_hess_z(const GammaDecoder& d, const Eigen::VectorXd& g,
                           const Eigen::VectorXd& z);
GradHess zip_grad_hess_z(const ZipDecoder& d, const Eigen::VectorXi& q,
                         const Eigen::VectorXd& z);

// obs is interpreted per decoder type (counts rounded from the vector for ZIP).
GradHess decoder_grad_hess_z(const Decoder& d, const Eigen::VectorXd& obs,
                             const Eigen::VectorXd& z);

}  // namespace dsr
