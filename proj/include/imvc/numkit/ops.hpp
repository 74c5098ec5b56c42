#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "imvc/errors.hpp"
#include "imvc/numkit/matrix.hpp"
#include "imvc/numkit/tape.hpp"

// Differentiable operations over Tape nodes. Every op records its value
// eagerly and a closure that accumulates parent gradients in reverse.

namespace imvc::num {

namespace detail {

inline Tape& tape_of(const Var& a) {
  if (!a.valid()) throw ContractError("operation on an unbound Var");
  return *a.tape();
}

inline void same_shape(const Var& a, const Var& b, const char* what) {
  if (!a.value().same_shape(b.value()))
    throw DimensionError(std::string(what) + ": shape " + a.value().shape() + " vs " + b.value().shape());
}

}  // namespace detail

inline Var matmul(const Var& a, const Var& b) {
  Tape& t = detail::tape_of(a);
  Matrix out = matmul(a.value(), b.value());
  const std::size_t ia = a.id(), ib = b.id();
  return t.record(std::move(out), {a, b}, [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    if (Matrix* ga = tp.sink(ia)) matmul_nt_acc(g, tp.value(ib), *ga);
    if (Matrix* gb = tp.sink(ib)) matmul_tn_acc(tp.value(ia), g, *gb);
  });
}

inline Var add(const Var& a, const Var& b) {
  detail::same_shape(a, b, "add");
  Tape& t = detail::tape_of(a);
  Matrix out = a.value() + b.value();
  const std::size_t ia = a.id(), ib = b.id();
  return t.record(std::move(out), {a, b}, [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    if (Matrix* ga = tp.sink(ia)) *ga += g;
    if (Matrix* gb = tp.sink(ib)) *gb += g;
  });
}

inline Var sub(const Var& a, const Var& b) {
  detail::same_shape(a, b, "sub");
  Tape& t = detail::tape_of(a);
  Matrix out = a.value() - b.value();
  const std::size_t ia = a.id(), ib = b.id();
  return t.record(std::move(out), {a, b}, [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    if (Matrix* ga = tp.sink(ia)) *ga += g;
    if (Matrix* gb = tp.sink(ib)) gb->axpy(-1.0, g);
  });
}

/// Elementwise (Hadamard) product.
inline Var mul(const Var& a, const Var& b) {
  detail::same_shape(a, b, "mul");
  Tape& t = detail::tape_of(a);
  Matrix out = hadamard(a.value(), b.value());
  const std::size_t ia = a.id(), ib = b.id();
  return t.record(std::move(out), {a, b}, [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    if (Matrix* ga = tp.sink(ia)) *ga += hadamard(g, tp.value(ib));
    if (Matrix* gb = tp.sink(ib)) *gb += hadamard(g, tp.value(ia));
  });
}

inline Var scale(const Var& a, double s) {
  Tape& t = detail::tape_of(a);
  const std::size_t ia = a.id();
  return t.record(a.value() * s, {a}, [ia, s](Tape& tp, std::size_t self) {
    if (Matrix* ga = tp.sink(ia)) ga->axpy(s, tp.grad(self));
  });
}

inline Var add_scalar(const Var& a, double c) {
  Tape& t = detail::tape_of(a);
  Matrix out = a.value();
  for (double& x : out.values()) x += c;
  const std::size_t ia = a.id();
  return t.record(std::move(out), {a}, [ia](Tape& tp, std::size_t self) {
    if (Matrix* ga = tp.sink(ia)) *ga += tp.grad(self);
  });
}

/// ReLU with subgradient 0 at 0.
inline Var relu(const Var& a) {
  Tape& t = detail::tape_of(a);
  Matrix out = a.value();
  for (double& x : out.values()) x = x > 0.0 ? x : 0.0;
  const std::size_t ia = a.id();
  return t.record(std::move(out), {a}, [ia](Tape& tp, std::size_t self) {
    Matrix* ga = tp.sink(ia);
    if (!ga) return;
    const Matrix& x = tp.value(ia);
    const Matrix& g = tp.grad(self);
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k] > 0.0) (*ga)[k] += g[k];
  });
}

inline Var sigmoid(const Var& a) {
  Tape& t = detail::tape_of(a);
  Matrix out = a.value();
  for (double& x : out.values()) x = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  const std::size_t ia = a.id();
  return t.record(std::move(out), {a}, [ia](Tape& tp, std::size_t self) {
    Matrix* ga = tp.sink(ia);
    if (!ga) return;
    const Matrix& y = tp.value(self);
    const Matrix& g = tp.grad(self);
    for (std::size_t k = 0; k < y.size(); ++k) (*ga)[k] += g[k] * y[k] * (1.0 - y[k]);
  });
}

inline Var exp(const Var& a) {
  Tape& t = detail::tape_of(a);
  Matrix out = a.value();
  for (double& x : out.values()) x = std::exp(x);
  const std::size_t ia = a.id();
  return t.record(std::move(out), {a}, [ia](Tape& tp, std::size_t self) {
    if (Matrix* ga = tp.sink(ia)) *ga += hadamard(tp.grad(self), tp.value(self));
  });
}

/// Natural log; throws DomainError on any non-positive entry.
inline Var log(const Var& a) {
  Tape& t = detail::tape_of(a);
  Matrix out = a.value();
  for (double& x : out.values()) {
    if (!(x > 0.0)) throw DomainError("log: non-positive entry " + std::to_string(x));
    x = std::log(x);
  }
  const std::size_t ia = a.id();
  return t.record(std::move(out), {a}, [ia](Tape& tp, std::size_t self) {
    Matrix* ga = tp.sink(ia);
    if (!ga) return;
    const Matrix& x = tp.value(ia);
    const Matrix& g = tp.grad(self);
    for (std::size_t k = 0; k < x.size(); ++k) (*ga)[k] += g[k] / x[k];
  });
}

/// log(max(x, floor)); entries at or below the floor get zero gradient.
inline Var safe_log(const Var& a, double floor = 1e-12) {
  Tape& t = detail::tape_of(a);
  Matrix out = a.value();
  for (double& x : out.values()) x = std::log(std::max(x, floor));
  const std::size_t ia = a.id();
  return t.record(std::move(out), {a}, [ia, floor](Tape& tp, std::size_t self) {
    Matrix* ga = tp.sink(ia);
    if (!ga) return;
    const Matrix& x = tp.value(ia);
    const Matrix& g = tp.grad(self);
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k] > floor) (*ga)[k] += g[k] / x[k];
  });
}

inline Var reciprocal(const Var& a) {
  Tape& t = detail::tape_of(a);
  Matrix out = a.value();
  for (double& x : out.values()) {
    if (x == 0.0) throw DomainError("reciprocal: zero entry");
    x = 1.0 / x;
  }
  const std::size_t ia = a.id();
  return t.record(std::move(out), {a}, [ia](Tape& tp, std::size_t self) {
    Matrix* ga = tp.sink(ia);
    if (!ga) return;
    const Matrix& y = tp.value(self);
    const Matrix& g = tp.grad(self);
    for (std::size_t k = 0; k < y.size(); ++k) (*ga)[k] -= g[k] * y[k] * y[k];
  });
}

/// Row-wise softmax with max subtraction.
inline Var softmax_rows(const Var& a) {
  Tape& t = detail::tape_of(a);
  const Matrix& x = a.value();
  if (x.empty()) throw DimensionError("softmax_rows: empty input");
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto r = x.row_span(i);
    const double m = *std::max_element(r.begin(), r.end());
    double z = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) z += (out(i, j) = std::exp(r[j] - m));
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) /= z;
  }
  const std::size_t ia = a.id();
  return t.record(std::move(out), {a}, [ia](Tape& tp, std::size_t self) {
    Matrix* ga = tp.sink(ia);
    if (!ga) return;
    const Matrix& y = tp.value(self);
    const Matrix& g = tp.grad(self);
    for (std::size_t i = 0; i < y.rows(); ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < y.cols(); ++j) dot += g(i, j) * y(i, j);
      for (std::size_t j = 0; j < y.cols(); ++j) (*ga)(i, j) += y(i, j) * (g(i, j) - dot);
    }
  });
}

/// Sum of all entries as a 1x1 node.
inline Var sum(const Var& a) {
  Tape& t = detail::tape_of(a);
  const std::size_t ia = a.id();
  return t.record(Matrix(1, 1, a.value().sum()), {a}, [ia](Tape& tp, std::size_t self) {
    Matrix* ga = tp.sink(ia);
    if (!ga) return;
    const double g = tp.grad(self)(0, 0);
    for (double& x : ga->values()) x += g;
  });
}

inline Var transpose(const Var& a) {
  Tape& t = detail::tape_of(a);
  const std::size_t ia = a.id();
  return t.record(transpose(a.value()), {a}, [ia](Tape& tp, std::size_t self) {
    if (Matrix* ga = tp.sink(ia)) *ga += transpose(tp.grad(self));
  });
}

/// n x m -> n x 1
inline Var row_sum(const Var& a) {
  Tape& t = detail::tape_of(a);
  const Matrix& x = a.value();
  Matrix out(x.rows(), 1);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, 0) += x(i, j);
  const std::size_t ia = a.id();
  return t.record(std::move(out), {a}, [ia](Tape& tp, std::size_t self) {
    Matrix* ga = tp.sink(ia);
    if (!ga) return;
    const Matrix& g = tp.grad(self);
    for (std::size_t i = 0; i < ga->rows(); ++i)
      for (std::size_t j = 0; j < ga->cols(); ++j) (*ga)(i, j) += g(i, 0);
  });
}

/// n x m -> 1 x m
inline Var col_sum(const Var& a) {
  Tape& t = detail::tape_of(a);
  const Matrix& x = a.value();
  Matrix out(1, x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(0, j) += x(i, j);
  const std::size_t ia = a.id();
  return t.record(std::move(out), {a}, [ia](Tape& tp, std::size_t self) {
    Matrix* ga = tp.sink(ia);
    if (!ga) return;
    const Matrix& g = tp.grad(self);
    for (std::size_t i = 0; i < ga->rows(); ++i)
      for (std::size_t j = 0; j < ga->cols(); ++j) (*ga)(i, j) += g(0, j);
  });
}

/// Diagonal of a square matrix as n x 1.
inline Var diag(const Var& a) {
  Tape& t = detail::tape_of(a);
  const Matrix& x = a.value();
  if (x.rows() != x.cols()) throw DimensionError("diag: non-square " + x.shape());
  Matrix out(x.rows(), 1);
  for (std::size_t i = 0; i < x.rows(); ++i) out(i, 0) = x(i, i);
  const std::size_t ia = a.id();
  return t.record(std::move(out), {a}, [ia](Tape& tp, std::size_t self) {
    Matrix* ga = tp.sink(ia);
    if (!ga) return;
    const Matrix& g = tp.grad(self);
    for (std::size_t i = 0; i < ga->rows(); ++i) (*ga)(i, i) += g(i, 0);
  });
}

/// x (n x m) + b (1 x m) broadcast over rows.
inline Var add_row_bias(const Var& x, const Var& b) {
  if (b.rows() != 1 || b.cols() != x.cols())
    throw DimensionError("add_row_bias: bias " + b.value().shape() + " vs input " + x.value().shape());
  Tape& t = detail::tape_of(x);
  Matrix out = x.value();
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += b.value()(0, j);
  const std::size_t ix = x.id(), ib = b.id();
  return t.record(std::move(out), {x, b}, [ix, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    if (Matrix* gx = tp.sink(ix)) *gx += g;
    if (Matrix* gb = tp.sink(ib))
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) (*gb)(0, j) += g(i, j);
  });
}

/// Row i multiplied by the constant s[i].
inline Var scale_rows(const Var& x, std::vector<double> s) {
  if (s.size() != x.rows())
    throw DimensionError("scale_rows: " + std::to_string(s.size()) + " factors for " + x.value().shape());
  Tape& t = detail::tape_of(x);
  Matrix out = x.value();
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (double& v : out.row_span(i)) v *= s[i];
  const std::size_t ix = x.id();
  return t.record(std::move(out), {x}, [ix, s = std::move(s)](Tape& tp, std::size_t self) {
    Matrix* gx = tp.sink(ix);
    if (!gx) return;
    const Matrix& g = tp.grad(self);
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) (*gx)(i, j) += s[i] * g(i, j);
  });
}

/// Places row r of x at row index[r] of a zero `total` x cols matrix (Fᵀ·x).
inline Var scatter_rows(const Var& x, std::vector<std::size_t> index, std::size_t total) {
  if (index.size() != x.rows())
    throw DimensionError("scatter_rows: " + std::to_string(index.size()) + " indices for " + x.value().shape());
  Tape& t = detail::tape_of(x);
  Matrix out(total, x.cols());
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] >= total) throw DimensionError("scatter_rows: index out of range");
    auto src = x.value().row_span(r);
    std::copy(src.begin(), src.end(), out.row_span(index[r]).begin());
  }
  const std::size_t ix = x.id();
  return t.record(std::move(out), {x}, [ix, index = std::move(index)](Tape& tp, std::size_t self) {
    Matrix* gx = tp.sink(ix);
    if (!gx) return;
    const Matrix& g = tp.grad(self);
    for (std::size_t r = 0; r < index.size(); ++r)
      for (std::size_t j = 0; j < g.cols(); ++j) (*gx)(r, j) += g(index[r], j);
  });
}

/// Selects rows x[index[r]] (F·x).
inline Var gather_rows(const Var& x, std::vector<std::size_t> index) {
  Tape& t = detail::tape_of(x);
  Matrix out(index.size(), x.cols());
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] >= x.rows()) throw DimensionError("gather_rows: index out of range");
    auto src = x.value().row_span(index[r]);
    std::copy(src.begin(), src.end(), out.row_span(r).begin());
  }
  const std::size_t ix = x.id();
  return t.record(std::move(out), {x}, [ix, index = std::move(index)](Tape& tp, std::size_t self) {
    Matrix* gx = tp.sink(ix);
    if (!gx) return;
    const Matrix& g = tp.grad(self);
    for (std::size_t r = 0; r < index.size(); ++r)
      for (std::size_t j = 0; j < g.cols(); ++j) (*gx)(index[r], j) += g(r, j);
  });
}

/// D_ij = ‖e_i − e_j‖², exact zero diagonal.
inline Var pairwise_sqdist(const Var& e) {
  Tape& t = detail::tape_of(e);
  const Matrix& x = e.value();
  const std::size_t n = x.rows(), d = x.cols();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = x(i, k) - x(j, k);
        s += diff * diff;
      }
      out(i, j) = out(j, i) = s;
    }
  const std::size_t ie = e.id();
  return t.record(std::move(out), {e}, [ie](Tape& tp, std::size_t self) {
    Matrix* ge = tp.sink(ie);
    if (!ge) return;
    const Matrix& x = tp.value(ie);
    const Matrix& g = tp.grad(self);
    const std::size_t n = x.rows();
    // dE_i = Σ_j w_ij (e_i − e_j) with w = 2(G + Gᵀ), diagonal excluded.
    Matrix w(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) w(i, j) = 2.0 * (g(i, j) + g(j, i));
    Matrix wx = matmul(w, x);
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) r += w(i, j);
      for (std::size_t k = 0; k < x.cols(); ++k) (*ge)(i, k) += r * x(i, k) - wx(i, k);
    }
  });
}

/// Each column scaled to unit L2 norm; norms are floored at `floor`.
inline Var normalize_columns(const Var& a, double floor = 1e-12) {
  Tape& t = detail::tape_of(a);
  const Matrix& x = a.value();
  std::vector<double> norms(x.cols(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) norms[j] += x(i, j) * x(i, j);
  std::vector<bool> floored(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    norms[j] = std::sqrt(norms[j]);
    floored[j] = norms[j] <= floor;
    norms[j] = std::max(norms[j], floor);
  }
  Matrix out = x;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) /= norms[j];
  const std::size_t ia = a.id();
  return t.record(std::move(out), {a},
                  [ia, norms = std::move(norms), floored = std::move(floored)](Tape& tp, std::size_t self) {
                    Matrix* ga = tp.sink(ia);
                    if (!ga) return;
                    const Matrix& y = tp.value(self);
                    const Matrix& g = tp.grad(self);
                    for (std::size_t j = 0; j < y.cols(); ++j) {
                      double dot = 0.0;
                      if (!floored[j])
                        for (std::size_t i = 0; i < y.rows(); ++i) dot += y(i, j) * g(i, j);
                      for (std::size_t i = 0; i < y.rows(); ++i)
                        (*ga)(i, j) += (g(i, j) - y(i, j) * dot) / norms[j];
                    }
                  });
}

/// a * b for a sparse operator a (graph propagation). The forward pass and
/// both gradients visit only the structural nonzeros of a; the gradient
/// w.r.t. a is left zero elsewhere, so a's producers must depend on a only
/// through those entries (true for normalised graphs, whose zero pattern is
/// fixed by the adjacency).
inline Var propagate(const Var& a, const Var& b) {
  if (a.cols() != b.rows())
    throw DimensionError("propagate: incompatible shapes " + a.value().shape() + " and " + b.value().shape());
  Tape& t = detail::tape_of(a);
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  const std::size_t n = av.rows(), m = bv.cols();
  std::vector<std::size_t> start{0}, col;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < av.cols(); ++p)
      if (av(i, p) != 0.0) col.push_back(p);
    start.push_back(col.size());
  }
  Matrix out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    double* o = &out(i, 0);
    for (std::size_t e = start[i]; e < start[i + 1]; ++e) {
      const double s = av(i, col[e]);
      const double* br = &bv(col[e], 0);
      for (std::size_t j = 0; j < m; ++j) o[j] += s * br[j];
    }
  }
  const std::size_t ia = a.id(), ib = b.id();
  return t.record(std::move(out), {a, b},
                  [ia, ib, start = std::move(start), col = std::move(col)](Tape& tp, std::size_t self) {
                    const Matrix& g = tp.grad(self);
                    const Matrix& av = tp.value(ia);
                    const Matrix& bv = tp.value(ib);
                    const std::size_t n = av.rows(), m = bv.cols();
                    Matrix* ga = tp.sink(ia);
                    Matrix* gb = tp.sink(ib);
                    for (std::size_t i = 0; i < n; ++i) {
                      const double* gr = &g(i, 0);
                      for (std::size_t e = start[i]; e < start[i + 1]; ++e) {
                        const std::size_t p = col[e];
                        const double* br = &bv(p, 0);
                        if (ga) {
                          double s = 0.0;
                          for (std::size_t j = 0; j < m; ++j) s += gr[j] * br[j];
                          (*ga)(i, p) += s;
                        }
                        if (gb) {
                          const double s = av(i, p);
                          double* o = &(*gb)(p, 0);
                          for (std::size_t j = 0; j < m; ++j) o[j] += s * gr[j];
                        }
                      }
                    }
                  });
}

/// Σ_v w(0,v)·mats[v] with w a 1 x V row.
inline Var weighted_sum(const std::vector<Var>& mats, const Var& w) {
  if (mats.empty()) throw ParameterError("weighted_sum: empty operand list");
  if (w.rows() != 1 || w.cols() != mats.size())
    throw DimensionError("weighted_sum: weights " + w.value().shape() + " for " + std::to_string(mats.size()) +
                         " operands");
  Tape& t = detail::tape_of(w);
  Matrix out(mats.front().rows(), mats.front().cols());
  for (std::size_t v = 0; v < mats.size(); ++v) {
    detail::same_shape(mats.front(), mats[v], "weighted_sum");
    out.axpy(w.value()(0, v), mats[v].value());
  }
  std::vector<Var> parents = mats;
  parents.push_back(w);
  std::vector<std::size_t> ids;
  for (const Var& m : mats) ids.push_back(m.id());
  const std::size_t iw = w.id();
  return t.record(std::move(out), parents, [ids = std::move(ids), iw](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    const Matrix& wv = tp.value(iw);
    Matrix* gw = tp.sink(iw);
    for (std::size_t v = 0; v < ids.size(); ++v) {
      if (Matrix* gm = tp.sink(ids[v])) gm->axpy(wv(0, v), g);
      if (gw) {
        const Matrix& m = tp.value(ids[v]);
        double s = 0.0;
        for (std::size_t k = 0; k < m.size(); ++k) s += g[k] * m[k];
        (*gw)(0, v) += s;
      }
    }
  });
}

/// a / s for a 1x1 node s.
inline Var div_scalar(const Var& a, const Var& s) {
  if (s.rows() != 1 || s.cols() != 1) throw DimensionError("div_scalar: divisor " + s.value().shape());
  const double d = s.scalar();
  if (d == 0.0) throw DomainError("div_scalar: division by zero");
  Tape& t = detail::tape_of(a);
  const std::size_t ia = a.id(), is = s.id();
  return t.record(a.value() * (1.0 / d), {a, s}, [ia, is](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    const double d = tp.value(is)(0, 0);
    if (Matrix* ga = tp.sink(ia)) ga->axpy(1.0 / d, g);
    if (Matrix* gs = tp.sink(is)) {
      const Matrix& x = tp.value(ia);
      double acc = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) acc += g[k] * x[k];
      (*gs)(0, 0) -= acc / (d * d);
    }
  });
}

/// Copy of the value with no gradient path.
inline Var detach(const Var& a) { return detail::tape_of(a).constant(a.value()); }

enum class Activation { relu, sigmoid, linear };

inline Var activate(Activation act, const Var& a) {
  switch (act) {
    case Activation::relu: return relu(a);
    case Activation::sigmoid: return sigmoid(a);
    case Activation::linear: return a;
  }
  return a;
}

inline Activation parse_activation(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "linear") return Activation::linear;
  throw ParameterError("unknown activation '" + s + "'");
}

inline const char* to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::linear: return "linear";
  }
  return "?";
}

}  // namespace imvc::num
