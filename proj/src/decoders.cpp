#include "dsrecon/decoders.hpp"

#include <cmath>

#include "dsrecon/errors.hpp"
#include "dsrecon/plrnn.hpp"

namespace dsr {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// log(1 + sum_j exp(v_j)) with max-subtraction.
double log1p_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.size() > 0 ? std::max(0.0, v.maxCoeff()) : 0.0;
  double s = std::exp(-m);
  for (int j = 0; j < v.size(); ++j) s += std::exp(v[j] - m);
  return m + std::log(s);
}

double logistic(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

}  // namespace

double gauss_loglik(const GaussianDecoder& d, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& z) {
  require(x.size() == d.B.rows() && z.size() == d.B.cols(),
          "gauss_loglik: shape mismatch");
  const Eigen::VectorXd r = x - d.B * relu(z);
  double ll = -0.5 * d.obs_dim() * kLog2Pi;
  ll -= 0.5 * d.gamma.array().log().sum();
  ll -= 0.5 * (r.array().square() / d.gamma.array()).sum();
  return ll;
}

double cat_log_normalizer(const CategoricalDecoder& d, const Eigen::VectorXd& z) {
  return log1p_sum_exp(d.beta * z);
}

Eigen::VectorXd cat_probs(const CategoricalDecoder& d, const Eigen::VectorXd& z) {
  const Eigen::VectorXd logits = d.beta * z;
  const double m = std::max(0.0, logits.size() > 0 ? logits.maxCoeff() : 0.0);
  Eigen::VectorXd pi(d.K);
  double denom = std::exp(-m);
  for (int j = 0; j < d.K - 1; ++j) denom += std::exp(logits[j] - m);
  for (int j = 0; j < d.K - 1; ++j) pi[j] = std::exp(logits[j] - m) / denom;
  pi[d.K - 1] = std::exp(-m) / denom;
  return pi;
}

double cat_loglik(const CategoricalDecoder& d, const Eigen::VectorXd& c,
                  const Eigen::VectorXd& z) {
  if (c.size() != d.K) throw NotOneHot("cat_loglik: indicator length != K");
  int hot = -1;
  for (int i = 0; i < c.size(); ++i) {
    if (c[i] == 1.0) {
      if (hot >= 0) throw NotOneHot("cat_loglik: multiple hot entries");
      hot = i;
    } else if (c[i] != 0.0) {
      throw NotOneHot("cat_loglik: entries must be 0 or 1");
    }
  }
  if (hot < 0) throw NotOneHot("cat_loglik: no hot entry");
  return cat_loglik_label(d, hot + 1, z);
}

double cat_loglik_label(const CategoricalDecoder& d, int label_1based,
                        const Eigen::VectorXd& z) {
  const double lognorm = cat_log_normalizer(d, z);
  if (label_1based == d.K) return -lognorm;
  return d.beta.row(label_1based - 1).dot(z) - lognorm;
}

double gamma_loglik(const GammaDecoder& d, const Eigen::VectorXd& g,
                    const Eigen::VectorXd& z) {
  require(g.size() == d.xi.rows() && z.size() == d.xi.cols(),
          "gamma_loglik: shape mismatch");
  if ((g.array() <= 0.0).any())
    throw NonPositiveObservation("gamma_loglik: observations must be > 0");
  const double w = d.omega;
  double ll = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    const double log_mu = d.xi.row(j).dot(z);
    const double log_nu = std::log(w) - log_mu;  // rate, mean = omega / nu
    ll += w * log_nu - std::lgamma(w) + (w - 1.0) * std::log(g[j]) -
          std::exp(log_nu) * g[j];
  }
  return ll;
}

double zip_loglik(const ZipDecoder& d, const Eigen::VectorXi& q,
                  const Eigen::VectorXd& z) {
  require(q.size() == d.eta.rows() && z.size() == d.eta.cols(),
          "zip_loglik: shape mismatch");
  if ((q.array() < 0).any())
    throw NegativeCount("zip_loglik: counts must be >= 0");
  double ll = 0.0;
  for (int l = 0; l < q.size(); ++l) {
    const double a = d.eta.row(l).dot(z);        // logit of psi
    const double b = d.gamma_w.row(l).dot(z);    // log lambda
    const double lambda = std::exp(b);
    // log(1 + e^a) computed stably; reused by both branches.
    const double softplus_a = a > 0.0 ? a + std::log1p(std::exp(-a))
                                      : std::log1p(std::exp(a));
    if (q[l] == 0) {
      // log(psi + (1 - psi) e^-lambda) = logsumexp(a, -lambda) - log(1 + e^a)
      const double m = std::max(a, -lambda);
      ll += m + std::log(std::exp(a - m) + std::exp(-lambda - m)) - softplus_a;
    } else {
      ll += -softplus_a + q[l] * b - lambda - std::lgamma(q[l] + 1.0);
    }
  }
  return ll;
}

GradHess gauss_grad_hess_z(const GaussianDecoder& d, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& z) {
  const int M = static_cast<int>(z.size());
  const Eigen::VectorXd r = x - d.B * relu(z);
  const Eigen::VectorXd w = r.array() / d.gamma.array();
  GradHess gh;
  gh.grad = d.B.transpose() * w;
  Eigen::MatrixXd BtGB =
      d.B.transpose() * d.gamma.cwiseInverse().asDiagonal() * d.B;
  for (int m = 0; m < M; ++m) {
    if (z[m] <= 0.0) {
      gh.grad[m] = 0.0;
      BtGB.row(m).setZero();
      BtGB.col(m).setZero();
    }
  }
  gh.hess = -BtGB;
  return gh;
}

GradHess cat_grad_hess_z(const CategoricalDecoder& d, const Eigen::VectorXd& c,
                         const Eigen::VectorXd& z) {
  const int M = static_cast<int>(z.size());
  const Eigen::VectorXd pi = cat_probs(d, z);
  const Eigen::VectorXd pt = pi.head(d.K - 1);  // non-reference probabilities
  GradHess gh;
  gh.grad = -d.beta.transpose() * pt;
  for (int i = 0; i < d.K - 1; ++i)
    if (c[i] == 1.0) gh.grad += d.beta.row(i).transpose();
  // - B^T (diag(pt) - pt pt^T) B, the exact softmax Hessian
  Eigen::MatrixXd S = pt.asDiagonal();
  S.noalias() -= pt * pt.transpose();
  gh.hess = -(d.beta.transpose() * S * d.beta);
  gh.hess = 0.5 * (gh.hess + gh.hess.transpose()).eval();
  (void)M;
  return gh;
}

GradHess gamma_grad_hess_z(const GammaDecoder& d, const Eigen::VectorXd& g,
                           const Eigen::VectorXd& z) {
  const int M = static_cast<int>(z.size());
  GradHess gh;
  gh.grad = Eigen::VectorXd::Zero(M);
  gh.hess = Eigen::MatrixXd::Zero(M, M);
  for (int j = 0; j < g.size(); ++j) {
    const double nu = d.omega * std::exp(-d.xi.row(j).dot(z));
    const Eigen::VectorXd xi = d.xi.row(j).transpose();
    gh.grad += (g[j] * nu - d.omega) * xi;
    gh.hess -= g[j] * nu * (xi * xi.transpose());
  }
  return gh;
}

GradHess zip_grad_hess_z(const ZipDecoder& d, const Eigen::VectorXi& q,
                         const Eigen::VectorXd& z) {
  const int M = static_cast<int>(z.size());
  GradHess gh;
  gh.grad = Eigen::VectorXd::Zero(M);
  gh.hess = Eigen::MatrixXd::Zero(M, M);
  for (int l = 0; l < q.size(); ++l) {
    const Eigen::VectorXd eta = d.eta.row(l).transpose();
    const Eigen::VectorXd gam = d.gamma_w.row(l).transpose();
    const double a = eta.dot(z);
    const double b = gam.dot(z);
    const double lambda = std::exp(b);
    const double sig = logistic(a);
    if (q[l] == 0) {
      // u = e^a, v = e^-lambda, s = u + v; derivatives of log s - log(1+u)
      const double m = std::max(a, -lambda);
      const double u = std::exp(a - m), v = std::exp(-lambda - m);
      const double s = u + v;
      const double us = u / s, vs = v / s;
      const double da = us - sig;
      const double db = -vs * lambda;
      const double daa = us * (1.0 - us) - sig * (1.0 - sig);
      const double dab = us * vs * lambda;
      const double dbb = (lambda * lambda - lambda) * vs - vs * vs * lambda * lambda;
      gh.grad += da * eta + db * gam;
      gh.hess += daa * (eta * eta.transpose()) +
                 dab * (eta * gam.transpose() + gam * eta.transpose()) +
                 dbb * (gam * gam.transpose());
    } else {
      gh.grad += -sig * eta + (q[l] - lambda) * gam;
      gh.hess += -sig * (1.0 - sig) * (eta * eta.transpose()) -
                 lambda * (gam * gam.transpose());
    }
  }
  (void)M;
  return gh;
}

GradHess decoder_grad_hess_z(const Decoder& d, const Eigen::VectorXd& obs,
                             const Eigen::VectorXd& z) {
  return std::visit(
      [&](const auto& dec) -> GradHess {
        using T = std::decay_t<decltype(dec)>;
        if constexpr (std::is_same_v<T, GaussianDecoder>) {
          return gauss_grad_hess_z(dec, obs, z);
        } else if constexpr (std::is_same_v<T, CategoricalDecoder>) {
          return cat_grad_hess_z(dec, obs, z);
        } else if constexpr (std::is_same_v<T, GammaDecoder>) {
          return gamma_grad_hess_z(dec, obs, z);
        } else {
          Eigen::VectorXi q = obs.array().round().cast<int>();
          return zip_grad_hess_z(dec, q, z);
        }
      },
      d);
}

}  // namespace dsr
