#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "imvc/errors.hpp"
#include "imvc/numkit/matrix.hpp"

namespace imvc::data {

using num::Matrix;
using Labels = std::vector<int>;

/// N x V presence matrix: present(i, v) means sample i is observed in view v.
class MaskMatrix {
 public:
  MaskMatrix() = default;
  MaskMatrix(std::size_t samples, std::size_t views, bool present = true)
      : n_(samples), v_(views), bits_(samples * views, present ? 1 : 0) {}

  static MaskMatrix complete(std::size_t samples, std::size_t views) { return {samples, views, true}; }

  std::size_t samples() const noexcept { return n_; }
  std::size_t views() const noexcept { return v_; }

  bool present(std::size_t i, std::size_t v) const noexcept { return bits_[i * v_ + v] != 0; }
  void set(std::size_t i, std::size_t v, bool on) noexcept { bits_[i * v_ + v] = on ? 1 : 0; }

  /// T_i: number of views in which sample i exists.
  std::size_t row_count(std::size_t i) const noexcept {
    std::size_t c = 0;
    for (std::size_t v = 0; v < v_; ++v) c += bits_[i * v_ + v];
    return c;
  }
  /// n_v: number of samples present in view v.
  std::size_t view_count(std::size_t v) const noexcept {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n_; ++i) c += bits_[i * v_ + v];
    return c;
  }
  bool is_complete() const noexcept {
    return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
  }
  std::size_t incomplete_rows() const noexcept {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n_; ++i) c += row_count(i) < v_ ? 1 : 0;
    return c;
  }

  /// Throws ContractError when some sample is absent from every view.
  void validate() const {
    for (std::size_t i = 0; i < n_; ++i)
      if (row_count(i) == 0) throw ContractError("mask row " + std::to_string(i) + " has no present view");
  }

  Matrix to_matrix() const {
    Matrix m(n_, v_);
    for (std::size_t k = 0; k < bits_.size(); ++k) m[k] = bits_[k];
    return m;
  }

  friend bool operator==(const MaskMatrix&, const MaskMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t v_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Selector F^v (n_v x N) with a single 1 per row at column index[r],
/// stored by its sorted index vector h^v.
struct IndicatorMatrix {
  std::size_t total = 0;
  std::vector<std::size_t> index;

  std::size_t present() const noexcept { return index.size(); }

  Matrix dense() const {
    Matrix f(index.size(), total);
    for (std::size_t r = 0; r < index.size(); ++r) f(r, index[r]) = 1.0;
    return f;
  }
};

struct MultiViewDataset {
  std::vector<Matrix> views;
  MaskMatrix mask;
  std::optional<Labels> labels;
  std::size_t clusters = 0;

  std::size_t samples() const noexcept { return views.empty() ? 0 : views.front().rows(); }
  std::size_t view_count() const noexcept { return views.size(); }
  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (const auto& v : views) d.push_back(v.cols());
    return d;
  }

  void validate() const {
    if (views.empty()) throw ContractError("dataset has no views");
    if (clusters == 0) throw ContractError("dataset cluster count must be positive");
    const std::size_t n = samples();
    for (std::size_t v = 0; v < views.size(); ++v)
      if (views[v].rows() != n)
        throw DimensionError("view " + std::to_string(v) + " has " + std::to_string(views[v].rows()) +
                             " rows, expected " + std::to_string(n));
    if (mask.samples() != n || mask.views() != views.size())
      throw DimensionError("mask is " + std::to_string(mask.samples()) + "x" + std::to_string(mask.views()) +
                           ", expected " + std::to_string(n) + "x" + std::to_string(views.size()));
    mask.validate();
    if (labels) {
      if (labels->size() != n) throw DimensionError("labels length does not match sample count");
      for (int y : *labels)
        if (y < 0 || static_cast<std::size_t>(y) >= clusters)
          throw ContractError("label " + std::to_string(y) + " outside [0, " + std::to_string(clusters) + ")");
    }
  }
};

/// F^v for view `v` (0-based). Rows follow ascending sample index.
inline IndicatorMatrix build_indicator(const MaskMatrix& mask, std::size_t v) {
  if (v >= mask.views()) throw ParameterError("build_indicator: view " + std::to_string(v) + " out of range");
  IndicatorMatrix f;
  f.total = mask.samples();
  for (std::size_t i = 0; i < mask.samples(); ++i)
    if (mask.present(i, v)) f.index.push_back(i);
  if (f.index.empty()) throw EmptyViewError("view " + std::to_string(v) + " has no present samples");
  return f;
}

/// X̄^v = F^v · X^v
inline Matrix extract_present(const Matrix& x, const IndicatorMatrix& f) {
  if (f.total != x.rows())
    throw DimensionError("extract_present: indicator spans " + std::to_string(f.total) + " samples, view has " +
                         std::to_string(x.rows()));
  Matrix out(f.present(), x.cols());
  for (std::size_t r = 0; r < f.present(); ++r) {
    auto src = x.row_span(f.index[r]);
    std::copy(src.begin(), src.end(), out.row_span(r).begin());
  }
  return out;
}

/// Fᵀ · X̄: present rows placed at their global index, zeros elsewhere.
inline Matrix expand_present(const Matrix& xbar, const IndicatorMatrix& f) {
  if (xbar.rows() != f.present()) throw DimensionError("expand_present: row count does not match indicator");
  Matrix out(f.total, xbar.cols());
  for (std::size_t r = 0; r < f.present(); ++r) {
    auto src = xbar.row_span(r);
    std::copy(src.begin(), src.end(), out.row_span(f.index[r]).begin());
  }
  return out;
}

/// Marks exactly round(eta·N) samples incomplete. Each one loses a uniformly
/// drawn non-empty proper subset of its views.
inline MaskMatrix simulate_missing(std::size_t samples, std::size_t views, double eta, std::uint64_t seed) {
  if (!(eta >= 0.0) || eta >= 1.0) throw ParameterError("simulate_missing: eta must lie in [0, 1)");
  if (views == 1 && eta > 0.0) throw ParameterError("simulate_missing: a single view cannot go missing");
  if (views > 62) throw ParameterError("simulate_missing: at most 62 views supported");
  MaskMatrix mask = MaskMatrix::complete(samples, views);
  const auto incomplete = static_cast<std::size_t>(std::llround(eta * static_cast<double>(samples)));
  if (incomplete == 0) return mask;

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(samples);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  const std::uint64_t subsets = (std::uint64_t{1} << views) - 2;
  std::uniform_int_distribution<std::uint64_t> pick(1, subsets);
  for (std::size_t k = 0; k < incomplete; ++k) {
    const std::uint64_t drop = pick(rng);
    for (std::size_t v = 0; v < views; ++v)
      if ((drop >> v) & 1u) mask.set(order[k], v, false);
  }
  return mask;
}

inline MaskMatrix simulate_missing(const MultiViewDataset& ds, double eta, std::uint64_t seed) {
  if (!ds.mask.is_complete()) throw ParameterError("simulate_missing: dataset already has missing views");
  return simulate_missing(ds.samples(), ds.view_count(), eta, seed);
}

struct SyntheticSpec {
  std::size_t per_cluster = 100;
  std::size_t clusters = 3;
  std::size_t views = 3;
  std::vector<std::size_t> dims;  // one per view; defaults to 20 each when empty
  double separation = 1.0;
  double noise = 0.2;
  std::uint64_t seed = 0;
};

/// Gaussian clusters observed through independent random linear maps.
///
/// Cluster c sits at separation·e_c in a C-dimensional latent space (all
/// pairwise centre distances equal separation·√2). View v maps the latent
/// centre through a d_v x C matrix with N(0, 1/d_v) entries, so centre
/// distances are preserved in expectation, then adds isotropic N(0, noise²)
/// noise per coordinate. Samples are shuffled.
inline MultiViewDataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.per_cluster == 0 || spec.clusters == 0 || spec.views == 0)
    throw ParameterError("generate_synthetic: counts must be positive");
  std::vector<std::size_t> dims = spec.dims;
  if (dims.empty()) dims.assign(spec.views, 20);
  if (dims.size() != spec.views) throw ParameterError("generate_synthetic: need one dimension per view");
  for (std::size_t d : dims)
    if (d == 0) throw ParameterError("generate_synthetic: view dimensions must be positive");
  if (spec.noise < 0.0) throw ParameterError("generate_synthetic: noise must be non-negative");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t c = spec.clusters, n = spec.per_cluster * c;

  Labels labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i / spec.per_cluster);
  std::shuffle(labels.begin(), labels.end(), rng);

  MultiViewDataset ds;
  ds.clusters = c;
  for (std::size_t v = 0; v < spec.views; ++v) {
    const std::size_t d = dims[v];
    Matrix map(d, c);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (double& w : map.values()) w = s * normal(rng);
    Matrix x(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      const auto cl = static_cast<std::size_t>(labels[i]);
      for (std::size_t r = 0; r < d; ++r) x(i, r) = spec.separation * map(r, cl);
    }
    if (spec.noise > 0.0)
      for (double& e : x.values()) e += spec.noise * normal(rng);
    ds.views.push_back(std::move(x));
  }
  ds.mask = MaskMatrix::complete(n, spec.views);
  ds.labels = std::move(labels);
  return ds;
}

}  // namespace imvc::data
