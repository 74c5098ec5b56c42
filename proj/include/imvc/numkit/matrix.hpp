#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "imvc/errors.hpp"

namespace imvc::num {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw DimensionError("Matrix: data length " + std::to_string(data_.size()) +
                           " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("Matrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Matrix column(const std::vector<double>& v) { return Matrix(v.size(), 1, v); }
  static Matrix row(const std::vector<double>& v) { return Matrix(1, v.size(), v); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const double& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator[](std::size_t k) noexcept { return data_[k]; }
  double operator[](std::size_t k) const noexcept { return data_[k]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  std::span<double> row_span(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row_span(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  bool same_shape(const Matrix& o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }
  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  void fill(double x) { std::fill(data_.begin(), data_.end(), x); }

  Matrix& operator+=(const Matrix& o) {
    require_same(o, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same(o, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }

  /// this += s * o
  void axpy(double s, const Matrix& o) {
    require_same(o, "axpy");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
  }

  double sum() const noexcept {
    double s = 0.0;
    for (double x : data_) s += x;
    return s;
  }

  bool all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  void require_same(const Matrix& o, const char* what) const {
    if (!same_shape(o))
      throw DimensionError(std::string(what) + ": shape " + shape() + " vs " + o.shape());
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
inline Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
inline Matrix operator*(Matrix a, double s) { return a *= s; }

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

namespace detail {
inline void shape_check(bool ok, const char* what, const Matrix& a, const Matrix& b) {
  if (!ok) throw DimensionError(std::string(what) + ": incompatible shapes " + a.shape() + " and " + b.shape());
}
}  // namespace detail

/// out += a * b. Rows of `a` are taken four at a time so each row of `b` is
/// streamed once per block; zero entries of `a` are skipped.
inline void matmul_acc(const Matrix& a, const Matrix& b, Matrix& out) {
  detail::shape_check(a.cols() == b.rows(), "matmul", a, b);
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    double* o0 = &out(i, 0);
    double* o1 = o0 + m;
    double* o2 = o1 + m;
    double* o3 = o2 + m;
    for (std::size_t p = 0; p < k; ++p) {
      const double s0 = a(i, p), s1 = a(i + 1, p), s2 = a(i + 2, p), s3 = a(i + 3, p);
      if (s0 == 0.0 && s1 == 0.0 && s2 == 0.0 && s3 == 0.0) continue;
      const double* br = &b(p, 0);
      for (std::size_t j = 0; j < m; ++j) {
        const double x = br[j];
        o0[j] += s0 * x;
        o1[j] += s1 * x;
        o2[j] += s2 * x;
        o3[j] += s3 * x;
      }
    }
  }
  for (; i < n; ++i) {
    double* o = &out(i, 0);
    for (std::size_t p = 0; p < k; ++p) {
      const double s = a(i, p);
      if (s == 0.0) continue;
      const double* br = &b(p, 0);
      for (std::size_t j = 0; j < m; ++j) o[j] += s * br[j];
    }
  }
}

/// out += aᵀ * b
inline void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& out) {
  detail::shape_check(a.rows() == b.rows(), "matmul_tn", a, b);
  matmul_acc(transpose(a), b, out);
}

/// out += a * bᵀ
inline void matmul_nt_acc(const Matrix& a, const Matrix& b, Matrix& out) {
  detail::shape_check(a.cols() == b.cols(), "matmul_nt", a, b);
  matmul_acc(a, transpose(b), out);
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  detail::shape_check(a.cols() == b.rows(), "matmul", a, b);
  Matrix out(a.rows(), b.cols());
  matmul_acc(a, b, out);
  return out;
}

inline Matrix hadamard(const Matrix& a, const Matrix& b) {
  a.require_same(b, "hadamard");
  Matrix out = a;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= b[k];
  return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  a.require_same(b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline Matrix hstack(const std::vector<Matrix>& parts) {
  if (parts.empty()) return {};
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != parts.front().rows()) detail::shape_check(false, "hstack", parts.front(), p);
    cols += p.cols();
  }
  Matrix out(parts.front().rows(), cols);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    std::size_t off = 0;
    for (const auto& p : parts) {
      std::copy(p.row_span(i).begin(), p.row_span(i).end(), &out(i, off));
      off += p.cols();
    }
  }
  return out;
}

}  // namespace imvc::num
