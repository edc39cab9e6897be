#include "r2a/gradcheck.hpp"

#include <cmath>
#include <stdexcept>

namespace r2a {

double finite_difference_check(const std::function<ad::Value()>& f,
                               const std::vector<ad::NodePtr>& params, double eps) {
  ad::zero_grad(params);
  ad::Value root = f();
  if (!root.val().all_finite()) throw std::runtime_error("finite_difference_check: f non-finite");
  ad::backward(root);

  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (const auto& p : params) analytic.push_back(p->grad);

  double worst = 0.0;
  for (size_t k = 0; k < params.size(); ++k) {
    ad::Node& p = *params[k];
    for (int i = 0; i < p.value.size(); ++i) {
      double orig = p.value[i];
      p.value[i] = orig + eps;
      double hi = f().item();
      p.value[i] = orig - eps;
      double lo = f().item();
      p.value[i] = orig;
      if (!std::isfinite(hi) || !std::isfinite(lo))
        throw std::runtime_error("finite_difference_check: f non-finite at probe");
      double central = (hi - lo) / (2.0 * eps);
      double err = std::abs(analytic[k][i] - central) / std::max(1.0, std::abs(central));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace r2a
