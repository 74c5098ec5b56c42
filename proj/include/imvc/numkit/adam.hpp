#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "imvc/errors.hpp"
#include "imvc/numkit/tape.hpp"

namespace imvc::num {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction. Holds non-owning pointers to its parameters,
/// which must outlive the optimizer.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamOptions opts = {}) : params_(std::move(params)), opts_(opts) {
    for (const Parameter* p : params_) {
      m_.emplace_back(p->value.rows(), p->value.cols());
      v_.emplace_back(p->value.rows(), p->value.cols());
    }
  }

  /// Applies one update from the accumulated gradients, then zeroes them.
  void step() {
    for (std::size_t k = 0; k < params_.size(); ++k) {
      const Parameter& p = *params_[k];
      if (!p.value.same_shape(m_[k]) || !p.grad.same_shape(m_[k]))
        throw ContractError("Adam: parameter '" + p.name + "' changed shape from " + m_[k].shape() + " to " +
                            p.value.shape());
    }
    ++t_;
    const double c1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
    for (std::size_t k = 0; k < params_.size(); ++k) {
      Parameter& p = *params_[k];
      Matrix& m = m_[k];
      Matrix& v = v_[k];
      for (std::size_t e = 0; e < p.value.size(); ++e) {
        const double g = p.grad[e];
        m[e] = opts_.beta1 * m[e] + (1.0 - opts_.beta1) * g;
        v[e] = opts_.beta2 * v[e] + (1.0 - opts_.beta2) * g * g;
        const double mh = m[e] / c1;
        const double vh = v[e] / c2;
        p.value[e] -= opts_.lr * mh / (std::sqrt(vh) + opts_.eps);
      }
      p.zero_grad();
    }
  }

  std::int64_t steps() const noexcept { return t_; }
  const AdamOptions& options() const noexcept { return opts_; }
  const Matrix& first_moment(std::size_t k) const { return m_.at(k); }
  const Matrix& second_moment(std::size_t k) const { return v_.at(k); }

 private:
  std::vector<Parameter*> params_;
  AdamOptions opts_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  std::int64_t t_ = 0;
};

}  // namespace imvc::num
