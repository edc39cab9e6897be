#pragma once

#include "r2a/autodiff.hpp"

#include <functional>
#include <vector>

namespace r2a {

// Compares reverse-mode gradients against central finite differences.
// `f` must rebuild its graph from the given parameter nodes on every call and
// be deterministic. Returns max_i |analytic_i - central_i| / max(1, |central_i|)
// over every coordinate of every parameter. Throws if f is non-finite.
double finite_difference_check(const std::function<ad::Value()>& f,
                               const std::vector<ad::NodePtr>& params, double eps = 1e-5);

}  // namespace r2a
