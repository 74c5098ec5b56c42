#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "imvc/datakit/dataset.hpp"
#include "imvc/errors.hpp"

// Dataset directory layout:
//   meta.json     {"n": N, "v": V, "c": C, "dims": [d_1, ...], "has_labels": bool}
//   view_<v>.csv  N rows of d_v comma-separated floats, v = 1..V, no header
//   mask.csv      N rows of V 0/1 flags
//   labels.csv    N integers, one per line (only when has_labels)

namespace imvc::data {

namespace fs = std::filesystem;

namespace csv {

inline std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view tok, const fs::path& file, std::size_t line) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) tok.remove_suffix(1);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double x = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw LoadError(file.string() + ":" + std::to_string(line) + ": cannot parse number '" + std::string(tok) + "'");
  return x;
}

/// Reads a numeric CSV; every row must carry `cols` fields.
inline std::vector<std::vector<double>> read_table(const fs::path& file, std::size_t cols) {
  std::ifstream in(file);
  if (!in) throw LoadError("cannot open " + file.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_double(rest.substr(0, comma), file, lineno));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (row.size() != cols)
      throw LoadError(file.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(cols) +
                      " columns, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_matrix(const fs::path& file, const Matrix& m) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw LoadError("cannot write " + file.string());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace csv

inline void write_mask(const fs::path& file, const MaskMatrix& mask) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw LoadError("cannot write " + file.string());
  for (std::size_t i = 0; i < mask.samples(); ++i) {
    for (std::size_t v = 0; v < mask.views(); ++v) out << (v ? "," : "") << (mask.present(i, v) ? 1 : 0);
    out << '\n';
  }
}

inline MaskMatrix read_mask(const fs::path& file, std::size_t samples, std::size_t views) {
  auto rows = csv::read_table(file, views);
  if (rows.size() != samples)
    throw LoadError(file.string() + ": expected " + std::to_string(samples) + " rows, found " +
                    std::to_string(rows.size()));
  MaskMatrix mask(samples, views, false);
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t v = 0; v < views; ++v) {
      const double b = rows[i][v];
      if (b != 0.0 && b != 1.0) throw LoadError(file.string() + ": mask entries must be 0 or 1");
      mask.set(i, v, b == 1.0);
    }
    if (mask.row_count(i) == 0)
      throw LoadError(file.string() + ": row " + std::to_string(i + 1) + " marks the sample absent from every view");
  }
  return mask;
}

inline void save_dataset(const MultiViewDataset& ds, const fs::path& dir) {
  ds.validate();
  fs::create_directories(dir);
  nlohmann::json meta;
  meta["n"] = ds.samples();
  meta["v"] = ds.view_count();
  meta["c"] = ds.clusters;
  meta["dims"] = ds.dims();
  meta["has_labels"] = ds.labels.has_value();
  std::ofstream(dir / "meta.json", std::ios::binary) << meta.dump(2) << '\n';
  for (std::size_t v = 0; v < ds.view_count(); ++v)
    csv::write_matrix(dir / ("view_" + std::to_string(v + 1) + ".csv"), ds.views[v]);
  write_mask(dir / "mask.csv", ds.mask);
  if (ds.labels) {
    std::ofstream out(dir / "labels.csv", std::ios::binary);
    for (int y : *ds.labels) out << y << '\n';
  }
}

inline MultiViewDataset load_dataset(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.json";
  std::ifstream meta_in(meta_path);
  if (!meta_in) throw LoadError("cannot open " + meta_path.string());
  nlohmann::json meta;
  std::size_t n = 0, v = 0, c = 0;
  std::vector<std::size_t> dims;
  bool has_labels = false;
  try {
    meta_in >> meta;
    n = meta.at("n").get<std::size_t>();
    v = meta.at("v").get<std::size_t>();
    c = meta.at("c").get<std::size_t>();
    dims = meta.at("dims").get<std::vector<std::size_t>>();
    has_labels = meta.value("has_labels", false);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(meta_path.string() + ": " + e.what());
  }
  if (dims.size() != v)
    throw LoadError(meta_path.string() + ": dims lists " + std::to_string(dims.size()) + " views, v = " +
                    std::to_string(v));
  if (n == 0 || v == 0 || c == 0) throw LoadError(meta_path.string() + ": n, v and c must be positive");

  MultiViewDataset ds;
  ds.clusters = c;
  for (std::size_t k = 0; k < v; ++k) {
    const fs::path file = dir / ("view_" + std::to_string(k + 1) + ".csv");
    auto rows = csv::read_table(file, dims[k]);
    if (rows.size() != n)
      throw LoadError(file.string() + ": meta declares " + std::to_string(n) + " rows, found " +
                      std::to_string(rows.size()));
    Matrix x(n, dims[k]);
    for (std::size_t i = 0; i < n; ++i) std::copy(rows[i].begin(), rows[i].end(), x.row_span(i).begin());
    ds.views.push_back(std::move(x));
  }
  const fs::path mask_path = dir / "mask.csv";
  ds.mask = read_mask(mask_path, n, v);
  // The mask is authoritative: whatever is stored at absent entries is dropped.
  for (std::size_t k = 0; k < v; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (!ds.mask.present(i, k))
        for (double& x : ds.views[k].row_span(i)) x = 0.0;

  if (has_labels) {
    const fs::path file = dir / "labels.csv";
    auto rows = csv::read_table(file, 1);
    if (rows.size() != n)
      throw LoadError(file.string() + ": expected " + std::to_string(n) + " labels, found " +
                      std::to_string(rows.size()));
    Labels labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double y = rows[i][0];
      if (y != std::floor(y) || y < 0 || y >= static_cast<double>(c))
        throw LoadError(file.string() + ":" + std::to_string(i + 1) + ": label outside [0, " + std::to_string(c) +
                        ")");
      labels[i] = static_cast<int>(y);
    }
    ds.labels = std::move(labels);
  }
  return ds;
}

}  // namespace imvc::data
