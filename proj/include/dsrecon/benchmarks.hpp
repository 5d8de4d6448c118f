#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "dsrecon/dataset.hpp"
#include "dsrecon/decoders.hpp"
#include "dsrecon/plrnn.hpp"

namespace dsr {

// Chaotic-regime defaults; process noise is added per integration step.
struct LorenzConfig {
  double s = 10.0;
  double r = 28.0;
  double b = 8.0 / 3.0;
  double dt = 0.01;
  double process_noise_var_per_unit_time = 0.0025;  // variance = this * dt
  int subsample = 5;  // integration steps per emitted sample
  int T = 1000;       // emitted length
  int transient = 500;  // emitted samples discarded up front
  std::uint64_t seed = 0;
};

// Raw (unstandardized) T x 3 trajectory; deterministic per seed.
Eigen::MatrixXd lorenz_generate(const LorenzConfig& cfg);

struct Standardization {
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;  // population convention
};

// Per-column z-scoring; throws ZeroVariance on constant columns.
Eigen::MatrixXd standardize(const Eigen::MatrixXd& X, Standardization* params);
Eigen::MatrixXd apply_standardization(const Eigen::MatrixXd& X,
                                      const Standardization& p);

Eigen::MatrixXd add_obs_noise(const Eigen::MatrixXd& X, double variance,
                              std::uint64_t seed);

// Orthant indicator of the 3d state: label = I[x1>0] + 2 I[x2>0] + 4 I[x3>0] + 1.
Eigen::VectorXi orthant_labels(const Eigen::MatrixXd& X3);

Eigen::MatrixXd drop_dimension(const Eigen::MatrixXd& X, int dim_index);

// Sample gamma / count channels from the ground-truth link decoders applied
// to the given (standardized) states.
Eigen::MatrixXd emit_gamma(const GammaDecoder& d, const Eigen::MatrixXd& Z,
                           std::uint64_t seed);
Eigen::MatrixXi emit_zip(const ZipDecoder& d, const Eigen::MatrixXd& Z,
                         std::uint64_t seed);

struct BenchmarkOverrides {
  int T = -1;                 // -1 keeps the benchmark default
  double obs_noise_var = -1;  // -1 keeps the default (0.1 where applicable)
  int teacher_M = 2;
  double teacher_sigma = 1e-4;
  double teacher_gamma = 1e-4;
};

// Names: noisy-lorenz, missing-dim-lorenz, gamma-zip-lorenz, teacher-plrnn.
Dataset make_benchmark(const std::string& name, const BenchmarkOverrides& ov,
                       std::uint64_t seed);

// Teacher parameters stored in a dataset's metadata (teacher-plrnn only).
LatentParams teacher_latent_from_meta(const nlohmann::ordered_json& meta);
GaussianDecoder teacher_gauss_from_meta(const nlohmann::ordered_json& meta);
CategoricalDecoder teacher_cat_from_meta(const nlohmann::ordered_json& meta);

}  // namespace dsr
