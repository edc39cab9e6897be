#pragma once

#include "r2a/autodiff.hpp"

#include <string>
#include <vector>

namespace r2a {

// Ordered registry of named trainable tensors. Order is creation order and
// fixes both the optimizer slot layout and the checkpoint layout.
class ParamMap {
 public:
  ad::Value add(const std::string& name, Tensor init) {
    for (const auto& [n, _] : items_)
      if (n == name) throw std::invalid_argument("ParamMap: duplicate name " + name);
    ad::Value v = ad::Value::param(std::move(init));
    items_.emplace_back(name, v.node());
    return v;
  }

  const std::vector<std::pair<std::string, ad::NodePtr>>& items() const { return items_; }

  std::vector<ad::NodePtr> nodes() const {
    std::vector<ad::NodePtr> out;
    out.reserve(items_.size());
    for (const auto& [_, n] : items_) out.push_back(n);
    return out;
  }

  ad::NodePtr find(const std::string& name) const {
    for (const auto& [n, p] : items_)
      if (n == name) return p;
    return nullptr;
  }

  void zero_grad() {
    for (auto& [_, n] : items_) n->grad.fill(0.0);
  }

  size_t size() const { return items_.size(); }

 private:
  std::vector<std::pair<std::string, ad::NodePtr>> items_;
};

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Moment slots are allocated lazily on the first
// step and keyed by parameter order.
class AdamState {
 public:
  explicit AdamState(AdamConfig cfg = {}) : cfg_(cfg) {
    if (cfg_.learning_rate <= 0) throw std::invalid_argument("AdamState: learning_rate <= 0");
  }

  // Applies one update from the parameters' accumulated gradients.
  // Throws on non-finite gradients, naming the offending parameter.
  void step(ParamMap& params);

  long step_count() const { return step_count_; }
  double learning_rate() const { return cfg_.learning_rate; }
  void set_learning_rate(double lr) {
    if (lr <= 0) throw std::invalid_argument("AdamState: learning_rate <= 0");
    cfg_.learning_rate = lr;
  }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  long step_count_ = 0;
  std::vector<Tensor> first_moment_;
  std::vector<Tensor> second_moment_;
};

}  // namespace r2a
