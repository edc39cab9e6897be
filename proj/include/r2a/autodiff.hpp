#pragma once

#include "r2a/rng.hpp"
#include "r2a/tensor.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace r2a::ad {

class Node;
using NodePtr = std::shared_ptr<Node>;

// One vertex of the computation graph: a value, its (lazily accumulated)
// gradient, and the provenance needed for reverse traversal.
class Node {
 public:
  Tensor value;
  Tensor grad;  // same shape as value; allocated zero
  bool requires_grad = false;
  std::string op;  // producing operation, "" for leaves
  std::vector<NodePtr> inputs;
  std::function<void(Node&)> backward_fn;  // adds into inputs' grads

  explicit Node(Tensor v) : value(std::move(v)) { grad = Tensor::zeros(value.shape()); }
};

// Handle over a graph node. Cheap to copy.
class Value {
 public:
  Value() = default;
  explicit Value(NodePtr n) : node_(std::move(n)) {}

  // leaf that never receives gradient
  static Value constant(Tensor t);
  // trainable leaf
  static Value param(Tensor t);
  static Value scalar(double v) { return constant(Tensor::scalar(v)); }

  bool defined() const { return node_ != nullptr; }
  NodePtr node() const { return node_; }
  const Tensor& val() const { return node_->value; }
  Tensor& grad() const { return node_->grad; }
  const std::vector<int>& shape() const { return node_->value.shape(); }
  double item() const { return node_->value.item(); }

 private:
  NodePtr node_;
};

// --- graph construction ---------------------------------------------------

Value make_op(Tensor value, std::vector<Value> inputs, std::string op,
              std::function<void(Node&)> backward_fn);

// elementwise, same shape
Value add(const Value& a, const Value& b);
Value sub(const Value& a, const Value& b);
Value mul(const Value& a, const Value& b);
// scalar broadcast
Value scale(const Value& a, double c);
Value add_const(const Value& a, double c);

Value add_scalar(const Value& a, const Value& s);  // s scalar node, broadcast
Value div_scalar(const Value& a, const Value& s);  // elementwise a / s, s scalar node
Value neg(const Value& a);
Value tanh_op(const Value& a);
Value sigmoid(const Value& a);
Value relu(const Value& a);   // derivative 0 at the kink
Value exp_op(const Value& a);
Value log_op(const Value& a);
Value sqrt_op(const Value& a);
Value abs_op(const Value& a);  // derivative 0 at 0
Value square(const Value& a);

Value sum(const Value& a);
Value mean(const Value& a);
Value dot(const Value& a, const Value& b);     // 1-D
Value norm2(const Value& a);                   // sqrt(sum of squares), 1-D
Value mean_vec(const std::vector<Value>& xs);  // mean of scalar values

// matrix ops (2-D row-major); 1-D operands treated as vectors
Value matmul(const Value& a, const Value& b);     // [m,k]x[k,n] or [m,k]x[k]
Value matmul_nt(const Value& a, const Value& b);  // a * b^T, [m,k]x[n,k] -> [m,n]
Value matmul_tn(const Value& a, const Value& b);  // a^T * b, [m,n] 2-D x [m] -> [n]
Value affine(const Value& x, const Value& w, const Value& b);  // x*w^T + b rows

// vec^T [L] * mat [L,d] -> [d]
Value vecmat(const Value& v, const Value& m);

Value concat(const Value& a, const Value& b);            // 1-D concat
Value concat_cols(const Value& a, const Value& b);       // [L,p],[L,q] -> [L,p+q]
Value stack_rows(const std::vector<Value>& rows);        // L x [d] -> [L,d]
Value row(const Value& m, int i);                        // [L,d] -> [d]
Value slice(const Value& v, int lo, int hi);             // 1-D slice [lo,hi)
Value gather_rows(const Value& m, const std::vector<int>& ids);  // [V,d],[L] -> [L,d]
Value scale_rows(const Value& m, const Value& v);  // [L,d],[L]: row i scaled by v[i]
Value pad_rows(const Value& m, int total_rows);    // zero rows appended below
Value gather_windows(const Value& m, int w);  // [L,d] -> [L-w+1, w*d] sliding windows
Value max_over_rows(const Value& m);          // [T,F] -> [F], ties to first row

// numerically stabilized; masked positions output exactly 0.
// mask empty => all positions live. Throws if every position is masked.
Value softmax(const Value& scores, const std::vector<uint8_t>& mask = {});

// mean cross-entropy of logit rows against integer targets
Value cross_entropy_rows(const Value& logits, const std::vector<int>& targets);
Value cross_entropy(const Value& logits, int target);  // 1-D logits
Value mse(const Value& pred, double target);           // scalar pred

// inverted dropout; identity when !enabled. Mask drawn from rng.
Value dropout(const Value& a, double rate, RngStream& rng, bool enabled);

// max(0, 1 - cos(a,b) - 0.1); subgradient 0 at the hinge
Value soft_margin_cosine_distance(const Value& a, const Value& b);

// stop-gradient: value passes through, gradient does not
Value detach(const Value& a);

// --- backward -------------------------------------------------------------

// Reverse-mode accumulation from a scalar root. Repeated calls accumulate;
// callers reset parameter gradients between steps.
void backward(const Value& root);

void zero_grad(const std::vector<NodePtr>& params);

}  // namespace r2a::ad
