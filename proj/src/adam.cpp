#include "r2a/adam.hpp"

#include <cmath>

namespace r2a {

void AdamState::step(ParamMap& params) {
  if (first_moment_.empty()) {
    for (const auto& [_, n] : params.items()) {
      first_moment_.push_back(Tensor::zeros(n->value.shape()));
      second_moment_.push_back(Tensor::zeros(n->value.shape()));
    }
  }
  if (first_moment_.size() != params.size())
    throw std::invalid_argument("AdamState: parameter set changed between steps");

  for (size_t k = 0; k < params.size(); ++k) {
    const auto& [name, n] = params.items()[k];
    if (!n->grad.all_finite())
      throw std::runtime_error("AdamState: non-finite gradient for parameter '" + name + "'");
  }

  ++step_count_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, step_count_);
  double bc2 = 1.0 - std::pow(cfg_.beta2, step_count_);

  for (size_t k = 0; k < params.size(); ++k) {
    auto& n = params.items()[k].second;
    Tensor& m = first_moment_[k];
    Tensor& v = second_moment_[k];
    for (int i = 0; i < n->value.size(); ++i) {
      double g = n->grad[i];
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      n->value[i] -= cfg_.learning_rate * mhat / (std::sqrt(vhat) + cfg_.epsilon);
    }
  }
}

}  // namespace r2a
