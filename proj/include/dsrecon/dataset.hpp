#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dsr {

// Aligned multi-modal time series. All present channels share T rows;
// per-modality masks flag which steps are observed (1 = present).
struct Dataset {
  int T = 0;
  std::optional<Eigen::MatrixXd> X;         // T x N continuous
  std::optional<Eigen::VectorXi> C;         // labels in 1..K
  int K = 0;                                // categories when C present
  std::optional<Eigen::MatrixXd> G;         // T x J gamma observations
  std::optional<Eigen::MatrixXi> Qcounts;   // T x L counts
  std::optional<Eigen::MatrixXd> S;         // T x Q external inputs
  std::vector<std::uint8_t> mask_x, mask_c, mask_g, mask_q;
  nlohmann::ordered_json meta;

  int gauss_dim() const { return X ? static_cast<int>(X->cols()) : 0; }
  int input_dim() const { return S ? static_cast<int>(S->cols()) : 0; }

  bool x_present(int t) const { return X && (mask_x.empty() || mask_x[t]); }
  bool c_present(int t) const { return C && (mask_c.empty() || mask_c[t]); }
  bool g_present(int t) const { return G && (mask_g.empty() || mask_g[t]); }
  bool q_present(int t) const { return Qcounts && (mask_q.empty() || mask_q[t]); }

  Eigen::VectorXd onehot(int t) const;  // width K

  // Throws DimensionMismatch on misaligned channels or bad labels.
  void validate() const;
};

// One CSV per channel plus a meta.json sidecar in `dir` (created if needed).
void save_dataset(const Dataset& d, const std::string& dir);
Dataset load_dataset(const std::string& dir);

// CSV helpers (round-trip exact doubles via shortest decimal).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& values);
Eigen::MatrixXd read_csv(const std::string& path,
                         std::vector<std::string>* header = nullptr);

std::string format_double(double v);

// FNV-1a over a file's bytes, as fixed-width hex.
std::string file_hash_hex(const std::string& path);

}  // namespace dsr
