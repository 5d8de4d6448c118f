#include "dsrecon/dataset.hpp"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dsrecon/errors.hpp"

namespace dsr {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

Eigen::VectorXd Dataset::onehot(int t) const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(K);
  c[(*C)[t] - 1] = 1.0;
  return c;
}

void Dataset::validate() const {
  auto check_rows = [&](long rows, const char* name) {
    if (rows != T) throw DimensionMismatch(std::string(name) + ": rows != T");
  };
  if (X) check_rows(X->rows(), "X");
  if (C) {
    check_rows(C->rows(), "C");
    if (K < 2) throw DimensionMismatch("C present but K < 2");
    for (int t = 0; t < T; ++t)
      if ((*C)[t] < 1 || (*C)[t] > K)
        throw DimensionMismatch("C: label out of range");
  }
  if (G) check_rows(G->rows(), "G");
  if (Qcounts) check_rows(Qcounts->rows(), "Q");
  if (S) check_rows(S->rows(), "S");
  auto check_mask = [&](const std::vector<std::uint8_t>& m, const char* name) {
    if (!m.empty() && static_cast<int>(m.size()) != T)
      throw DimensionMismatch(std::string(name) + " mask: length != T");
  };
  check_mask(mask_x, "X");
  check_mask(mask_c, "C");
  check_mask(mask_g, "G");
  check_mask(mask_q, "Q");
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& values) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "");
  out << "\n";
  for (long r = 0; r < values.rows(); ++r) {
    for (long c = 0; c < values.cols(); ++c)
      out << format_double(values(r, c)) << (c + 1 < values.cols() ? "," : "");
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

Eigen::MatrixXd read_csv(const std::string& path,
                         std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty csv: " + path);
  std::vector<std::string> head;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) head.push_back(cell);
  }
  if (header) *header = head;
  std::vector<double> data;
  long rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    long cols = 0;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc())
        throw IoError("bad number in " + path + ": " + cell);
      data.push_back(v);
      ++cols;
    }
    if (cols != static_cast<long>(head.size()))
      throw IoError("ragged csv row in " + path);
    ++rows;
  }
  Eigen::MatrixXd out(rows, static_cast<long>(head.size()));
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < out.cols(); ++c) out(r, c) = data[r * out.cols() + c];
  return out;
}

namespace {

ordered_json mask_to_rle(const std::vector<std::uint8_t>& mask) {
  // Run-length encoding of *missing* steps as [start, length] pairs.
  ordered_json runs = ordered_json::array();
  long start = -1;
  for (long t = 0; t <= static_cast<long>(mask.size()); ++t) {
    const bool missing = t < static_cast<long>(mask.size()) && mask[t] == 0;
    if (missing && start < 0) start = t;
    if (!missing && start >= 0) {
      runs.push_back({start, t - start});
      start = -1;
    }
  }
  return runs;
}

std::vector<std::uint8_t> rle_to_mask(const ordered_json& runs, int T) {
  std::vector<std::uint8_t> mask(T, 1);
  for (const auto& run : runs) {
    const long start = run.at(0).get<long>();
    const long len = run.at(1).get<long>();
    for (long t = start; t < start + len && t < T; ++t) mask[t] = 0;
  }
  return mask;
}

std::vector<std::string> numbered_header(const std::string& prefix, long n) {
  std::vector<std::string> h;
  for (long i = 1; i <= n; ++i) h.push_back(prefix + std::to_string(i));
  return h;
}

}  // namespace

void save_dataset(const Dataset& d, const std::string& dir) {
  d.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir);

  ordered_json meta = d.meta;
  meta["schema_version"] = 1;
  meta["T"] = d.T;
  ordered_json channels = ordered_json::object();

  if (d.X) {
    write_csv(dir + "/X.csv", numbered_header("x", d.X->cols()), *d.X);
    channels["X"] = {{"cols", d.X->cols()}};
  }
  if (d.C) {
    Eigen::MatrixXd labels = d.C->cast<double>();
    write_csv(dir + "/C.csv", {"label"}, labels);
    channels["C"] = {{"K", d.K}};
  }
  if (d.G) {
    write_csv(dir + "/G.csv", numbered_header("g", d.G->cols()), *d.G);
    channels["G"] = {{"cols", d.G->cols()}};
  }
  if (d.Qcounts) {
    write_csv(dir + "/Q.csv", numbered_header("q", d.Qcounts->cols()),
              d.Qcounts->cast<double>());
    channels["Q"] = {{"cols", d.Qcounts->cols()}};
  }
  if (d.S) {
    write_csv(dir + "/S.csv", numbered_header("s", d.S->cols()), *d.S);
    channels["S"] = {{"cols", d.S->cols()}};
  }
  meta["channels"] = channels;

  ordered_json masks = ordered_json::object();
  if (!d.mask_x.empty()) masks["X"] = mask_to_rle(d.mask_x);
  if (!d.mask_c.empty()) masks["C"] = mask_to_rle(d.mask_c);
  if (!d.mask_g.empty()) masks["G"] = mask_to_rle(d.mask_g);
  if (!d.mask_q.empty()) masks["Q"] = mask_to_rle(d.mask_q);
  meta["masks"] = masks;

  std::ofstream out(dir + "/meta.json");
  if (!out) throw IoError("cannot open for writing: " + dir + "/meta.json");
  out << meta.dump(2) << "\n";
}

Dataset load_dataset(const std::string& dir) {
  std::ifstream in(dir + "/meta.json");
  if (!in) throw IoError("missing meta.json in " + dir);
  ordered_json meta;
  try {
    in >> meta;
  } catch (const std::exception& e) {
    throw IoError(std::string("bad meta.json: ") + e.what());
  }

  Dataset d;
  d.meta = meta;
  d.T = meta.at("T").get<int>();
  const auto& channels = meta.at("channels");

  if (channels.contains("X")) d.X = read_csv(dir + "/X.csv");
  if (channels.contains("C")) {
    Eigen::MatrixXd labels = read_csv(dir + "/C.csv");
    d.C = labels.col(0).array().round().cast<int>();
    d.K = channels["C"].at("K").get<int>();
  }
  if (channels.contains("G")) d.G = read_csv(dir + "/G.csv");
  if (channels.contains("Q"))
    d.Qcounts = read_csv(dir + "/Q.csv").array().round().cast<int>();
  if (channels.contains("S")) d.S = read_csv(dir + "/S.csv");

  if (meta.contains("masks")) {
    const auto& masks = meta["masks"];
    if (masks.contains("X")) d.mask_x = rle_to_mask(masks["X"], d.T);
    if (masks.contains("C")) d.mask_c = rle_to_mask(masks["C"], d.T);
    if (masks.contains("G")) d.mask_g = rle_to_mask(masks["G"], d.T);
    if (masks.contains("Q")) d.mask_q = rle_to_mask(masks["Q"], d.T);
  }
  d.validate();
  return d;
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot hash missing file: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace dsr
