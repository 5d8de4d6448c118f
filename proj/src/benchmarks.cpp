#include "dsrecon/benchmarks.hpp"

#include <cmath>

#include "dsrecon/errors.hpp"
#include "dsrecon/jsonio.hpp"
#include "dsrecon/rng.hpp"

namespace dsr {

using nlohmann::ordered_json;

namespace {

Eigen::Vector3d lorenz_field(const Eigen::Vector3d& x, const LorenzConfig& c) {
  return {c.s * (x[1] - x[0]), x[0] * (c.r - x[2]) - x[1],
          x[0] * x[1] - c.b * x[2]};
}

Eigen::Vector3d rk4_step(const Eigen::Vector3d& x, double dt,
                         const LorenzConfig& c) {
  const Eigen::Vector3d k1 = lorenz_field(x, c);
  const Eigen::Vector3d k2 = lorenz_field(x + 0.5 * dt * k1, c);
  const Eigen::Vector3d k3 = lorenz_field(x + 0.5 * dt * k2, c);
  const Eigen::Vector3d k4 = lorenz_field(x + dt * k3, c);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Eigen::MatrixXd lorenz_generate(const LorenzConfig& cfg) {
  require(cfg.dt > 0 && cfg.T >= 1 && cfg.subsample >= 1,
          "lorenz_generate: bad config");
  Rng rng(cfg.seed);
  Eigen::Vector3d x(rng.uniform(-15.0, 15.0), rng.uniform(-15.0, 15.0),
                    rng.uniform(5.0, 35.0));
  const double noise_sd =
      std::sqrt(cfg.process_noise_var_per_unit_time * cfg.dt);

  Eigen::MatrixXd out(cfg.T, 3);
  const long total = static_cast<long>(cfg.transient + cfg.T) * cfg.subsample;
  long emitted = 0;
  for (long step = 1; step <= total; ++step) {
    x = rk4_step(x, cfg.dt, cfg);
    if (noise_sd > 0.0)
      for (int d = 0; d < 3; ++d) x[d] += noise_sd * rng.normal();
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e8)
      throw Diverged("lorenz_generate: integration diverged");
    if (step % cfg.subsample == 0) {
      const long sample = step / cfg.subsample;
      if (sample > cfg.transient) out.row(emitted++) = x.transpose();
    }
  }
  return out;
}

Eigen::MatrixXd standardize(const Eigen::MatrixXd& X, Standardization* params) {
  const long n = X.rows();
  Standardization p;
  p.mean = X.colwise().mean();
  p.sd.resize(X.cols());
  for (long c = 0; c < X.cols(); ++c) {
    const double var =
        (X.col(c).array() - p.mean[c]).square().sum() / static_cast<double>(n);
    if (var <= 0.0) throw ZeroVariance("standardize: constant column");
    p.sd[c] = std::sqrt(var);
  }
  if (params) *params = p;
  return apply_standardization(X, p);
}

Eigen::MatrixXd apply_standardization(const Eigen::MatrixXd& X,
                                      const Standardization& p) {
  return (X.rowwise() - p.mean.transpose()).array().rowwise() /
         p.sd.transpose().array();
}

Eigen::MatrixXd add_obs_noise(const Eigen::MatrixXd& X, double variance,
                              std::uint64_t seed) {
  require(variance >= 0.0, "add_obs_noise: variance must be >= 0");
  if (variance == 0.0) return X;
  Rng rng(seed);
  const double sd = std::sqrt(variance);
  Eigen::MatrixXd out = X;
  for (long r = 0; r < out.rows(); ++r)
    for (long c = 0; c < out.cols(); ++c) out(r, c) += sd * rng.normal();
  return out;
}

Eigen::VectorXi orthant_labels(const Eigen::MatrixXd& X3) {
  require(X3.cols() == 3, "orthant_labels: expects 3 columns");
  Eigen::VectorXi labels(X3.rows());
  for (long t = 0; t < X3.rows(); ++t) {
    int idx = 0;
    if (X3(t, 0) > 0.0) idx += 1;
    if (X3(t, 1) > 0.0) idx += 2;
    if (X3(t, 2) > 0.0) idx += 4;
    labels[t] = idx + 1;
  }
  return labels;
}

Eigen::MatrixXd drop_dimension(const Eigen::MatrixXd& X, int dim_index) {
  require(dim_index >= 0 && dim_index < X.cols(),
          "drop_dimension: index out of range");
  Eigen::MatrixXd out(X.rows(), X.cols() - 1);
  long c_out = 0;
  for (long c = 0; c < X.cols(); ++c) {
    if (c == dim_index) continue;
    out.col(c_out++) = X.col(c);
  }
  return out;
}

Eigen::MatrixXd emit_gamma(const GammaDecoder& d, const Eigen::MatrixXd& Z,
                           std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd G(Z.rows(), d.obs_dim());
  for (long t = 0; t < Z.rows(); ++t) {
    for (int j = 0; j < d.obs_dim(); ++j) {
      const double mu = std::exp(d.xi.row(j).dot(Z.row(t)));
      // shape omega, rate omega/mu  =>  scale mu/omega, mean mu
      G(t, j) = std::max(rng.gamma(d.omega, mu / d.omega), 1e-12);
    }
  }
  return G;
}

Eigen::MatrixXi emit_zip(const ZipDecoder& d, const Eigen::MatrixXd& Z,
                         std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXi Q(Z.rows(), d.obs_dim());
  for (long t = 0; t < Z.rows(); ++t) {
    for (int l = 0; l < d.obs_dim(); ++l) {
      const double a = d.eta.row(l).dot(Z.row(t));
      const double psi = 1.0 / (1.0 + std::exp(-a));
      if (rng.bernoulli(psi)) {
        Q(t, l) = 0;
      } else {
        const double lambda = std::exp(d.gamma_w.row(l).dot(Z.row(t)));
        Q(t, l) = static_cast<int>(rng.poisson(lambda));
      }
    }
  }
  return Q;
}

namespace {

Dataset lorenz_base(const BenchmarkOverrides& ov, std::uint64_t seed,
                    ordered_json& meta, Eigen::MatrixXd& standardized) {
  LorenzConfig cfg;
  cfg.seed = derive_seed(seed, 101);
  if (ov.T > 0) cfg.T = ov.T;
  const Eigen::MatrixXd raw = lorenz_generate(cfg);
  Standardization st;
  standardized = standardize(raw, &st);

  meta["generator"] = {{"family", "lorenz"},
                       {"s", cfg.s},
                       {"r", cfg.r},
                       {"b", cfg.b},
                       {"dt", cfg.dt},
                       {"process_noise_var_per_unit_time",
                        cfg.process_noise_var_per_unit_time},
                       {"subsample", cfg.subsample},
                       {"transient", cfg.transient},
                       {"T", cfg.T},
                       {"seed", cfg.seed}};
  meta["standardization"] = {{"mean", to_json(st.mean)}, {"sd", to_json(st.sd)}};

  Dataset d;
  d.T = cfg.T;
  return d;
}

void draw_glm_weights(Eigen::MatrixXd& W, Rng& rng, double sd) {
  for (long r = 0; r < W.rows(); ++r)
    for (long c = 0; c < W.cols(); ++c) W(r, c) = rng.normal(0.0, sd);
}

Dataset make_teacher(const BenchmarkOverrides& ov, std::uint64_t seed) {
  const int M = ov.teacher_M;
  const int T = ov.T > 0 ? ov.T : 5000;
  const int K = 4;
  const int N = std::max(2, M);

  // Draw until the teacher orbit is bounded and carries usable variance;
  // states are biased positive so the rectified outputs stay informative.
  Rng rng(derive_seed(seed, 202));
  LatentParams teacher;
  Eigen::MatrixXd Z;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 200) throw Diverged("teacher-plrnn: no stable draw found");
    teacher = LatentParams::init(M, 0, rng);
    teacher.a = Eigen::VectorXd::NullaryExpr(
        M, [&](Eigen::Index) { return rng.uniform(0.5, 0.9); });
    teacher.h = Eigen::VectorXd::NullaryExpr(
        M, [&](Eigen::Index) { return rng.uniform(0.3, 0.7); });
    teacher.sigma = Eigen::VectorXd::Constant(M, ov.teacher_sigma);
    teacher.mu0 = teacher.h;
    teacher.enforce_structure(1e-8);
    try {
      Z = simulate_prior(teacher, T, nullptr, true, derive_seed(seed, 203)).Z;
    } catch (const Diverged&) {
      continue;
    }
    const Eigen::VectorXd sd =
        ((Z.rowwise() - Z.colwise().mean()).array().square().colwise().sum() /
         T).sqrt();
    if (sd.minCoeff() > 2e-3 && Z.minCoeff() > -2.0) break;
  }

  GaussianDecoder gauss;
  gauss.B.resize(N, M);
  draw_glm_weights(gauss.B, rng, 1.0);
  while (gauss.B.jacobiSvd().singularValues().minCoeff() < 0.3) {
    draw_glm_weights(gauss.B, rng, 1.0);
  }
  gauss.gamma = Eigen::VectorXd::Constant(N, ov.teacher_gamma);

  // Sharp categorical link so labels are near-deterministic in the state.
  // No bias term exists in the link, so the weight rows are projected
  // orthogonal to the mean state; the logits then respond to state
  // fluctuations rather than to the offset, keeping labels varied.
  CategoricalDecoder cat;
  cat.K = K;
  cat.beta.resize(K - 1, M);
  draw_glm_weights(cat.beta, rng, 1.0);
  const Eigen::VectorXd mean_state = Z.colwise().mean();
  if (mean_state.norm() > 1e-6) {
    const Eigen::VectorXd u = mean_state.normalized();
    for (int i = 0; i < K - 1; ++i) {
      Eigen::VectorXd row = cat.beta.row(i).transpose();
      row -= row.dot(u) * u;
      while (row.norm() < 0.1) {
        Eigen::VectorXd fresh(M);
        for (int m = 0; m < M; ++m) fresh[m] = rng.normal();
        row = fresh - fresh.dot(u) * u;
      }
      cat.beta.row(i) = row.transpose();
    }
  }
  const Eigen::VectorXd state_sd =
      ((Z.rowwise() - mean_state.transpose()).array().square().colwise().sum() /
       T).sqrt();
  for (int i = 0; i < K - 1; ++i)
    cat.beta.row(i) *= 8.0 / std::max(1e-3, state_sd.mean() * cat.beta.row(i).norm());

  Dataset d;
  d.T = T;
  Rng obs_rng(derive_seed(seed, 204));
  Eigen::MatrixXd X(T, N);
  Eigen::VectorXi C(T);
  for (int t = 0; t < T; ++t) {
    const Eigen::VectorXd z = Z.row(t).transpose();
    Eigen::VectorXd x = gauss.B * relu(z);
    for (int n = 0; n < N; ++n)
      x[n] += std::sqrt(gauss.gamma[n]) * obs_rng.normal();
    X.row(t) = x.transpose();
    const Eigen::VectorXd pi = cat_probs(cat, z);
    double u = obs_rng.uniform(), acc = 0.0;
    int label = K;
    for (int k = 0; k < K; ++k) {
      acc += pi[k];
      if (u <= acc) {
        label = k + 1;
        break;
      }
    }
    C[t] = label;
  }
  d.X = X;
  d.C = C;
  d.K = K;

  ordered_json meta;
  meta["name"] = "teacher-plrnn";
  meta["seed"] = seed;
  meta["generator"] = {{"family", "teacher-plrnn"}, {"M", M}, {"T", T}};
  meta["teacher"] = {
      {"mu0", to_json(teacher.mu0)},     {"a", to_json(teacher.a)},
      {"W", to_json(teacher.W)},         {"h", to_json(teacher.h)},
      {"sigma", to_json(teacher.sigma)}, {"B", to_json(gauss.B)},
      {"gamma", to_json(gauss.gamma)},   {"beta", to_json(cat.beta)},
      {"K", K}};
  d.meta = meta;
  return d;
}

}  // namespace

Dataset make_benchmark(const std::string& name, const BenchmarkOverrides& ov,
                       std::uint64_t seed) {
  if (name == "teacher-plrnn") return make_teacher(ov, seed);

  if (name == "noisy-lorenz" || name == "missing-dim-lorenz" ||
      name == "gamma-zip-lorenz") {
    ordered_json meta;
    meta["name"] = name;
    meta["seed"] = seed;
    Eigen::MatrixXd states;
    Dataset d = lorenz_base(ov, seed, meta, states);

    if (name == "gamma-zip-lorenz") {
      const double noise_var = ov.obs_noise_var >= 0 ? ov.obs_noise_var : 0.2;
      d.X = add_obs_noise(states, noise_var, derive_seed(seed, 102));
      Rng wrng(derive_seed(seed, 105));
      GammaDecoder gd;
      gd.omega = 3.0;
      gd.xi.resize(3, 3);
      draw_glm_weights(gd.xi, wrng, 0.5);
      ZipDecoder zd;
      zd.eta.resize(3, 3);
      zd.gamma_w.resize(3, 3);
      draw_glm_weights(zd.eta, wrng, 0.5);
      draw_glm_weights(zd.gamma_w, wrng, 0.5);
      d.G = emit_gamma(gd, states, derive_seed(seed, 103));
      d.Qcounts = emit_zip(zd, states, derive_seed(seed, 104));
      meta["obs_noise_var"] = noise_var;
      meta["gamma_truth"] = {{"omega", gd.omega}, {"xi", to_json(gd.xi)}};
      meta["zip_truth"] = {{"eta", to_json(zd.eta)},
                           {"gamma_w", to_json(zd.gamma_w)}};
      d.meta = meta;
      return d;
    }

    const double noise_var = ov.obs_noise_var >= 0 ? ov.obs_noise_var : 0.1;
    Eigen::MatrixXd noisy =
        add_obs_noise(states, noise_var, derive_seed(seed, 102));
    d.C = orthant_labels(states);  // labels from pre-noise standardized states
    d.K = 8;
    meta["obs_noise_var"] = noise_var;
    if (name == "missing-dim-lorenz") {
      d.X = drop_dimension(noisy, 1);
      meta["dropped_dimension"] = 1;
      meta["full_dim"] = 3;
    } else {
      d.X = noisy;
    }
    d.meta = meta;
    return d;
  }

  throw UnknownBenchmark("unknown benchmark: " + name);
}

LatentParams teacher_latent_from_meta(const ordered_json& meta) {
  const auto& t = meta.at("teacher");
  LatentParams p;
  p.mu0 = vector_from_json(t.at("mu0"));
  p.a = vector_from_json(t.at("a"));
  p.W = matrix_from_json(t.at("W"));
  p.h = vector_from_json(t.at("h"));
  p.sigma = vector_from_json(t.at("sigma"));
  p.F = Eigen::MatrixXd::Zero(p.a.size(), 0);
  return p;
}

GaussianDecoder teacher_gauss_from_meta(const ordered_json& meta) {
  const auto& t = meta.at("teacher");
  GaussianDecoder g;
  g.B = matrix_from_json(t.at("B"));
  g.gamma = vector_from_json(t.at("gamma"));
  return g;
}

CategoricalDecoder teacher_cat_from_meta(const ordered_json& meta) {
  const auto& t = meta.at("teacher");
  CategoricalDecoder c;
  c.beta = matrix_from_json(t.at("beta"));
  c.K = t.at("K").get<int>();
  return c;
}

}  // namespace dsr
