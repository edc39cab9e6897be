#include "r2a/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace r2a::ad {

namespace {

void check_same_shape(const Value& a, const Value& b, const char* op) {
  if (!a.val().same_shape(b.val()))
    throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                Tensor::shape_str(a.shape()) + " vs " +
                                Tensor::shape_str(b.shape()));
}

bool needs_grad(const std::vector<Value>& inputs) {
  for (const auto& v : inputs)
    if (v.node()->requires_grad) return true;
  return false;
}

// elementwise unary helper: f and df as lambdas over the input value
template <typename F, typename DF>
Value unary(const Value& a, const char* name, F f, DF df) {
  Tensor out(a.shape());
  const Tensor& av = a.val();
  for (int i = 0; i < av.size(); ++i) out[i] = f(av[i]);
  return make_op(std::move(out), {a}, name, [df](Node& n) {
    Node& in = *n.inputs[0];
    for (int i = 0; i < in.value.size(); ++i) in.grad[i] += n.grad[i] * df(in.value[i], n.value[i]);
  });
}

}  // namespace

Value Value::constant(Tensor t) { return Value(std::make_shared<Node>(std::move(t))); }

Value Value::param(Tensor t) {
  auto n = std::make_shared<Node>(std::move(t));
  n->requires_grad = true;
  return Value(n);
}

Value make_op(Tensor value, std::vector<Value> inputs, std::string op,
              std::function<void(Node&)> backward_fn) {
  auto n = std::make_shared<Node>(std::move(value));
  n->op = std::move(op);
  n->requires_grad = needs_grad(inputs);
  n->inputs.reserve(inputs.size());
  for (auto& v : inputs) n->inputs.push_back(v.node());
  if (n->requires_grad) n->backward_fn = std::move(backward_fn);
  return Value(n);
}

Value add(const Value& a, const Value& b) {
  check_same_shape(a, b, "add");
  Tensor out(a.shape());
  out.flat() = a.val().flat() + b.val().flat();
  return make_op(std::move(out), {a, b}, "add", [](Node& n) {
    n.inputs[0]->grad.flat() += n.grad.flat();
    n.inputs[1]->grad.flat() += n.grad.flat();
  });
}

Value sub(const Value& a, const Value& b) {
  check_same_shape(a, b, "sub");
  Tensor out(a.shape());
  out.flat() = a.val().flat() - b.val().flat();
  return make_op(std::move(out), {a, b}, "sub", [](Node& n) {
    n.inputs[0]->grad.flat() += n.grad.flat();
    n.inputs[1]->grad.flat() -= n.grad.flat();
  });
}

Value mul(const Value& a, const Value& b) {
  check_same_shape(a, b, "mul");
  Tensor out(a.shape());
  out.flat() = a.val().flat().cwiseProduct(b.val().flat());
  return make_op(std::move(out), {a, b}, "mul", [](Node& n) {
    n.inputs[0]->grad.flat() += n.grad.flat().cwiseProduct(n.inputs[1]->value.flat());
    n.inputs[1]->grad.flat() += n.grad.flat().cwiseProduct(n.inputs[0]->value.flat());
  });
}

Value scale(const Value& a, double c) {
  Tensor out(a.shape());
  out.flat() = a.val().flat() * c;
  return make_op(std::move(out), {a}, "scale",
                 [c](Node& n) { n.inputs[0]->grad.flat() += n.grad.flat() * c; });
}

Value add_const(const Value& a, double c) {
  Tensor out(a.shape());
  out.flat() = a.val().flat().array() + c;
  return make_op(std::move(out), {a}, "add_const",
                 [](Node& n) { n.inputs[0]->grad.flat() += n.grad.flat(); });
}

Value add_scalar(const Value& a, const Value& s) {
  if (s.val().size() != 1) throw std::invalid_argument("add_scalar: s must be scalar");
  Tensor out(a.shape());
  out.flat() = a.val().flat().array() + s.val()[0];
  return make_op(std::move(out), {a, s}, "add_scalar", [](Node& n) {
    n.inputs[0]->grad.flat() += n.grad.flat();
    n.inputs[1]->grad[0] += n.grad.flat().sum();
  });
}

Value div_scalar(const Value& a, const Value& s) {
  if (s.val().size() != 1) throw std::invalid_argument("div_scalar: s must be scalar");
  double sv = s.val()[0];
  Tensor out(a.shape());
  for (int i = 0; i < a.val().size(); ++i) out[i] = a.val()[i] / sv;
  return make_op(std::move(out), {a, s}, "div_scalar", [sv](Node& n) {
    double acc = 0.0;
    for (int i = 0; i < n.value.size(); ++i) {
      n.inputs[0]->grad[i] += n.grad[i] / sv;
      acc += n.grad[i] * n.value[i];
    }
    n.inputs[1]->grad[0] -= acc / sv;
  });
}

Value neg(const Value& a) { return scale(a, -1.0); }

Value tanh_op(const Value& a) {
  return unary(a, "tanh", [](double x) { return std::tanh(x); },
               [](double, double y) { return 1.0 - y * y; });
}

Value sigmoid(const Value& a) {
  return unary(a, "sigmoid", [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
               [](double, double y) { return y * (1.0 - y); });
}

Value relu(const Value& a) {
  return unary(a, "relu", [](double x) { return x > 0.0 ? x : 0.0; },
               [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Value exp_op(const Value& a) {
  return unary(a, "exp", [](double x) { return std::exp(x); },
               [](double, double y) { return y; });
}

Value log_op(const Value& a) {
  return unary(a, "log", [](double x) { return std::log(x); },
               [](double x, double) { return 1.0 / x; });
}

Value sqrt_op(const Value& a) {
  return unary(a, "sqrt", [](double x) { return std::sqrt(x); },
               [](double, double y) { return 0.5 / y; });
}

Value abs_op(const Value& a) {
  return unary(a, "abs", [](double x) { return std::abs(x); },
               [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Value square(const Value& a) {
  return unary(a, "square", [](double x) { return x * x; },
               [](double x, double) { return 2.0 * x; });
}

Value sum(const Value& a) {
  Tensor out = Tensor::scalar(a.val().flat().sum());
  return make_op(std::move(out), {a}, "sum", [](Node& n) {
    n.inputs[0]->grad.flat().array() += n.grad[0];
  });
}

Value mean(const Value& a) {
  int sz = a.val().size();
  Tensor out = Tensor::scalar(a.val().flat().sum() / sz);
  return make_op(std::move(out), {a}, "mean", [sz](Node& n) {
    n.inputs[0]->grad.flat().array() += n.grad[0] / sz;
  });
}

Value mean_vec(const std::vector<Value>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean_vec: empty");
  double s = 0;
  for (const auto& x : xs) s += x.item();
  double inv = 1.0 / static_cast<double>(xs.size());
  return make_op(Tensor::scalar(s * inv), xs, "mean_vec", [inv](Node& n) {
    for (auto& in : n.inputs) in->grad[0] += n.grad[0] * inv;
  });
}

Value dot(const Value& a, const Value& b) {
  check_same_shape(a, b, "dot");
  Tensor out = Tensor::scalar(a.val().flat().dot(b.val().flat()));
  return make_op(std::move(out), {a, b}, "dot", [](Node& n) {
    n.inputs[0]->grad.flat() += n.grad[0] * n.inputs[1]->value.flat();
    n.inputs[1]->grad.flat() += n.grad[0] * n.inputs[0]->value.flat();
  });
}

Value norm2(const Value& a) {
  double s = a.val().flat().squaredNorm();
  double r = std::sqrt(s);
  return make_op(Tensor::scalar(r), {a}, "norm2", [r](Node& n) {
    n.inputs[0]->grad.flat() += (n.grad[0] / r) * n.inputs[0]->value.flat();
  });
}

Value matmul(const Value& a, const Value& b) {
  const Tensor& av = a.val();
  const Tensor& bv = b.val();
  if (av.ndim() == 2 && bv.ndim() == 2) {
    if (av.cols() != bv.rows()) throw std::invalid_argument("matmul: inner dim mismatch");
    Tensor out({av.rows(), bv.cols()});
    out.mat().noalias() = av.mat() * bv.mat();
    return make_op(std::move(out), {a, b}, "matmul", [](Node& n) {
      Node &A = *n.inputs[0], &B = *n.inputs[1];
      A.grad.mat().noalias() += n.grad.mat() * B.value.mat().transpose();
      B.grad.mat().noalias() += A.value.mat().transpose() * n.grad.mat();
    });
  }
  if (av.ndim() == 2 && bv.ndim() == 1) {
    if (av.cols() != bv.size()) throw std::invalid_argument("matmul: matvec dim mismatch");
    Tensor out({av.rows()});
    out.flat().noalias() = av.mat() * bv.flat();
    return make_op(std::move(out), {a, b}, "matvec", [](Node& n) {
      Node &A = *n.inputs[0], &B = *n.inputs[1];
      A.grad.mat().noalias() += n.grad.flat() * B.value.flat().transpose();
      B.grad.flat().noalias() += A.value.mat().transpose() * n.grad.flat();
    });
  }
  throw std::invalid_argument("matmul: unsupported ranks");
}

Value matmul_nt(const Value& a, const Value& b) {
  const Tensor& av = a.val();
  const Tensor& bv = b.val();
  if (av.ndim() != 2 || bv.ndim() != 2 || av.cols() != bv.cols())
    throw std::invalid_argument("matmul_nt: dim mismatch");
  Tensor out({av.rows(), bv.rows()});
  out.mat().noalias() = av.mat() * bv.mat().transpose();
  return make_op(std::move(out), {a, b}, "matmul_nt", [](Node& n) {
    Node &A = *n.inputs[0], &B = *n.inputs[1];
    A.grad.mat().noalias() += n.grad.mat() * B.value.mat();
    B.grad.mat().noalias() += n.grad.mat().transpose() * A.value.mat();
  });
}

Value matmul_tn(const Value& a, const Value& b) {
  const Tensor& av = a.val();
  const Tensor& bv = b.val();
  if (av.ndim() != 2 || bv.ndim() != 1 || av.rows() != bv.size())
    throw std::invalid_argument("matmul_tn: dim mismatch");
  Tensor out({av.cols()});
  out.flat().noalias() = av.mat().transpose() * bv.flat();
  return make_op(std::move(out), {a, b}, "matmul_tn", [](Node& n) {
    Node &A = *n.inputs[0], &B = *n.inputs[1];
    A.grad.mat().noalias() += B.value.flat() * n.grad.flat().transpose();
    B.grad.flat().noalias() += A.value.mat() * n.grad.flat();
  });
}

Value affine(const Value& x, const Value& w, const Value& b) {
  const Tensor& xv = x.val();
  const Tensor& wv = w.val();
  const Tensor& bv = b.val();
  if (xv.ndim() == 1) {
    if (wv.cols() != xv.size() || bv.size() != wv.rows())
      throw std::invalid_argument("affine: dim mismatch");
    Tensor out({wv.rows()});
    out.flat().noalias() = wv.mat() * xv.flat() + bv.flat();
    return make_op(std::move(out), {x, w, b}, "affine", [](Node& n) {
      Node &X = *n.inputs[0], &W = *n.inputs[1], &B = *n.inputs[2];
      X.grad.flat().noalias() += W.value.mat().transpose() * n.grad.flat();
      W.grad.mat().noalias() += n.grad.flat() * X.value.flat().transpose();
      B.grad.flat() += n.grad.flat();
    });
  }
  if (xv.ndim() == 2) {
    if (wv.cols() != xv.cols() || bv.size() != wv.rows())
      throw std::invalid_argument("affine: dim mismatch");
    Tensor out({xv.rows(), wv.rows()});
    out.mat().noalias() = xv.mat() * wv.mat().transpose();
    out.mat().rowwise() += bv.flat().transpose();
    return make_op(std::move(out), {x, w, b}, "affine_rows", [](Node& n) {
      Node &X = *n.inputs[0], &W = *n.inputs[1], &B = *n.inputs[2];
      X.grad.mat().noalias() += n.grad.mat() * W.value.mat();
      W.grad.mat().noalias() += n.grad.mat().transpose() * X.value.mat();
      B.grad.flat() += n.grad.mat().colwise().sum();
    });
  }
  throw std::invalid_argument("affine: unsupported rank");
}

Value vecmat(const Value& v, const Value& m) {
  const Tensor& vv = v.val();
  const Tensor& mv = m.val();
  if (vv.ndim() != 1 || mv.ndim() != 2 || vv.size() != mv.rows())
    throw std::invalid_argument("vecmat: dim mismatch");
  Tensor out({mv.cols()});
  out.flat().noalias() = mv.mat().transpose() * vv.flat();
  return make_op(std::move(out), {v, m}, "vecmat", [](Node& n) {
    Node &V = *n.inputs[0], &M = *n.inputs[1];
    V.grad.flat().noalias() += M.value.mat() * n.grad.flat();
    M.grad.mat().noalias() += V.value.flat() * n.grad.flat().transpose();
  });
}

Value concat(const Value& a, const Value& b) {
  const Tensor& av = a.val();
  const Tensor& bv = b.val();
  if (av.ndim() != 1 || bv.ndim() != 1) throw std::invalid_argument("concat: rank != 1");
  Tensor out({av.size() + bv.size()});
  std::copy(av.data(), av.data() + av.size(), out.data());
  std::copy(bv.data(), bv.data() + bv.size(), out.data() + av.size());
  int na = av.size();
  return make_op(std::move(out), {a, b}, "concat", [na](Node& n) {
    Node &A = *n.inputs[0], &B = *n.inputs[1];
    for (int i = 0; i < na; ++i) A.grad[i] += n.grad[i];
    for (int i = 0; i < B.value.size(); ++i) B.grad[i] += n.grad[na + i];
  });
}

Value concat_cols(const Value& a, const Value& b) {
  const Tensor& av = a.val();
  const Tensor& bv = b.val();
  if (av.ndim() != 2 || bv.ndim() != 2 || av.rows() != bv.rows())
    throw std::invalid_argument("concat_cols: dim mismatch");
  int L = av.rows(), p = av.cols(), q = bv.cols();
  Tensor out({L, p + q});
  out.mat().leftCols(p) = av.mat();
  out.mat().rightCols(q) = bv.mat();
  return make_op(std::move(out), {a, b}, "concat_cols", [p, q](Node& n) {
    n.inputs[0]->grad.mat() += n.grad.mat().leftCols(p);
    n.inputs[1]->grad.mat() += n.grad.mat().rightCols(q);
  });
}

Value stack_rows(const std::vector<Value>& rows) {
  if (rows.empty()) throw std::invalid_argument("stack_rows: empty");
  int d = rows[0].val().size();
  int L = static_cast<int>(rows.size());
  Tensor out({L, d});
  for (int i = 0; i < L; ++i) {
    if (rows[i].val().ndim() != 1 || rows[i].val().size() != d)
      throw std::invalid_argument("stack_rows: row shape mismatch");
    std::copy(rows[i].val().data(), rows[i].val().data() + d, out.data() + i * d);
  }
  return make_op(std::move(out), rows, "stack_rows", [d](Node& n) {
    for (size_t i = 0; i < n.inputs.size(); ++i) {
      Node& in = *n.inputs[i];
      for (int j = 0; j < d; ++j) in.grad[j] += n.grad[static_cast<int>(i) * d + j];
    }
  });
}

Value row(const Value& m, int i) {
  const Tensor& mv = m.val();
  if (mv.ndim() != 2 || i < 0 || i >= mv.rows()) throw std::invalid_argument("row: out of range");
  int d = mv.cols();
  Tensor out({d});
  std::copy(mv.data() + i * d, mv.data() + (i + 1) * d, out.data());
  return make_op(std::move(out), {m}, "row", [i, d](Node& n) {
    Node& M = *n.inputs[0];
    for (int j = 0; j < d; ++j) M.grad[i * d + j] += n.grad[j];
  });
}

Value slice(const Value& v, int lo, int hi) {
  const Tensor& vv = v.val();
  if (vv.ndim() != 1 || lo < 0 || hi > vv.size() || lo >= hi)
    throw std::invalid_argument("slice: bad range");
  Tensor out({hi - lo});
  std::copy(vv.data() + lo, vv.data() + hi, out.data());
  return make_op(std::move(out), {v}, "slice", [lo, hi](Node& n) {
    for (int i = lo; i < hi; ++i) n.inputs[0]->grad[i] += n.grad[i - lo];
  });
}

Value gather_rows(const Value& m, const std::vector<int>& ids) {
  const Tensor& mv = m.val();
  if (mv.ndim() != 2) throw std::invalid_argument("gather_rows: rank != 2");
  int d = mv.cols();
  Tensor out({static_cast<int>(ids.size()), d});
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= mv.rows())
      throw std::invalid_argument("gather_rows: id out of range");
    std::copy(mv.data() + ids[i] * d, mv.data() + (ids[i] + 1) * d, out.data() + i * d);
  }
  return make_op(std::move(out), {m}, "gather_rows", [ids, d](Node& n) {
    Node& M = *n.inputs[0];
    for (size_t i = 0; i < ids.size(); ++i)
      for (int j = 0; j < d; ++j) M.grad[ids[i] * d + j] += n.grad[static_cast<int>(i) * d + j];
  });
}

Value scale_rows(const Value& m, const Value& v) {
  const Tensor& mv = m.val();
  const Tensor& vv = v.val();
  if (mv.ndim() != 2 || vv.ndim() != 1 || mv.rows() != vv.size())
    throw std::invalid_argument("scale_rows: dim mismatch");
  Tensor out(mv.shape());
  out.mat() = mv.mat().array().colwise() * vv.flat().array();
  return make_op(std::move(out), {m, v}, "scale_rows", [](Node& n) {
    Node &M = *n.inputs[0], &V = *n.inputs[1];
    M.grad.mat().array() += n.grad.mat().array().colwise() * V.value.flat().array();
    V.grad.flat() += n.grad.mat().cwiseProduct(M.value.mat()).rowwise().sum();
  });
}

Value pad_rows(const Value& m, int total_rows) {
  const Tensor& mv = m.val();
  if (mv.ndim() != 2) throw std::invalid_argument("pad_rows: rank != 2");
  int L = mv.rows(), d = mv.cols();
  if (total_rows < L) throw std::invalid_argument("pad_rows: shrinking not allowed");
  if (total_rows == L) return m;
  Tensor out({total_rows, d});
  std::copy(mv.data(), mv.data() + L * d, out.data());
  return make_op(std::move(out), {m}, "pad_rows", [L, d](Node& n) {
    for (int i = 0; i < L * d; ++i) n.inputs[0]->grad[i] += n.grad[i];
  });
}

Value gather_windows(const Value& m, int w) {
  const Tensor& mv = m.val();
  if (mv.ndim() != 2 || mv.rows() < w) throw std::invalid_argument("gather_windows: too short");
  int L = mv.rows(), d = mv.cols(), T = L - w + 1;
  Tensor out({T, w * d});
  for (int t = 0; t < T; ++t)
    std::copy(mv.data() + t * d, mv.data() + (t + w) * d, out.data() + t * w * d);
  return make_op(std::move(out), {m}, "gather_windows", [w, d, T](Node& n) {
    Node& M = *n.inputs[0];
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < w * d; ++j) M.grad[t * d + j] += n.grad[t * w * d + j];
  });
}

Value max_over_rows(const Value& m) {
  const Tensor& mv = m.val();
  if (mv.ndim() != 2) throw std::invalid_argument("max_over_rows: rank != 2");
  int T = mv.rows(), F = mv.cols();
  Tensor out({F});
  std::vector<int> argmax(F, 0);
  for (int f = 0; f < F; ++f) {
    double best = mv.at(0, f);
    for (int t = 1; t < T; ++t)
      if (mv.at(t, f) > best) {
        best = mv.at(t, f);
        argmax[f] = t;
      }
    out[f] = best;
  }
  return make_op(std::move(out), {m}, "max_over_rows", [argmax, F](Node& n) {
    Node& M = *n.inputs[0];
    for (int f = 0; f < F; ++f) M.grad[argmax[f] * F + f] += n.grad[f];
  });
}

Value softmax(const Value& scores, const std::vector<uint8_t>& mask) {
  const Tensor& sv = scores.val();
  if (sv.ndim() != 1) throw std::invalid_argument("softmax: rank != 1");
  int L = sv.size();
  if (!mask.empty() && static_cast<int>(mask.size()) != L)
    throw std::invalid_argument("softmax: mask length mismatch");
  bool any = false;
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < L; ++i) {
    if (!mask.empty() && !mask[i]) continue;
    any = true;
    mx = std::max(mx, sv[i]);
  }
  if (!any) throw std::invalid_argument("softmax: all positions masked");
  Tensor out({L});
  double z = 0.0;
  for (int i = 0; i < L; ++i) {
    if (!mask.empty() && !mask[i]) continue;
    out[i] = std::exp(sv[i] - mx);
    z += out[i];
  }
  for (int i = 0; i < L; ++i) out[i] /= z;
  return make_op(std::move(out), {scores}, "softmax", [](Node& n) {
    // dL/ds_i = p_i * (g_i - sum_j g_j p_j); masked entries have p=0
    double acc = 0.0;
    for (int i = 0; i < n.value.size(); ++i) acc += n.grad[i] * n.value[i];
    for (int i = 0; i < n.value.size(); ++i)
      n.inputs[0]->grad[i] += n.value[i] * (n.grad[i] - acc);
  });
}

Value cross_entropy_rows(const Value& logits, const std::vector<int>& targets) {
  const Tensor& lv = logits.val();
  if (lv.ndim() != 2 || lv.rows() != static_cast<int>(targets.size()))
    throw std::invalid_argument("cross_entropy_rows: dim mismatch");
  int R = lv.rows(), C = lv.cols();
  // cache row softmaxes for the backward pass
  auto probs = std::make_shared<Tensor>(Tensor::zeros({R, C}));
  double total = 0.0;
  for (int r = 0; r < R; ++r) {
    if (targets[r] < 0 || targets[r] >= C)
      throw std::invalid_argument("cross_entropy_rows: target out of range");
    double mx = lv.at(r, 0);
    for (int c = 1; c < C; ++c) mx = std::max(mx, lv.at(r, c));
    double z = 0.0;
    for (int c = 0; c < C; ++c) z += std::exp(lv.at(r, c) - mx);
    for (int c = 0; c < C; ++c) probs->at(r, c) = std::exp(lv.at(r, c) - mx) / z;
    total += -(lv.at(r, targets[r]) - mx - std::log(z));
  }
  double inv = 1.0 / R;
  return make_op(Tensor::scalar(total * inv), {logits}, "ce_rows",
                 [probs, targets, inv](Node& n) {
                   Node& L = *n.inputs[0];
                   int C = L.value.cols();
                   for (int r = 0; r < L.value.rows(); ++r)
                     for (int c = 0; c < C; ++c) {
                       double d = probs->at(r, c) - (c == targets[r] ? 1.0 : 0.0);
                       L.grad.at(r, c) += n.grad[0] * d * inv;
                     }
                 });
}

Value cross_entropy(const Value& logits, int target) {
  const Tensor& lv = logits.val();
  if (lv.ndim() != 1) throw std::invalid_argument("cross_entropy: rank != 1");
  int C = lv.size();
  if (target < 0 || target >= C) throw std::invalid_argument("cross_entropy: bad target");
  double mx = lv[0];
  for (int c = 1; c < C; ++c) mx = std::max(mx, lv[c]);
  double z = 0.0;
  for (int c = 0; c < C; ++c) z += std::exp(lv[c] - mx);
  auto probs = std::make_shared<std::vector<double>>(C);
  for (int c = 0; c < C; ++c) (*probs)[c] = std::exp(lv[c] - mx) / z;
  double loss = -(lv[target] - mx - std::log(z));
  return make_op(Tensor::scalar(loss), {logits}, "ce", [probs, target](Node& n) {
    for (int c = 0; c < n.inputs[0]->value.size(); ++c)
      n.inputs[0]->grad[c] += n.grad[0] * ((*probs)[c] - (c == target ? 1.0 : 0.0));
  });
}

Value mse(const Value& pred, double target) {
  double d = pred.item() - target;
  return make_op(Tensor::scalar(d * d), {pred}, "mse",
                 [d](Node& n) { n.inputs[0]->grad[0] += n.grad[0] * 2.0 * d; });
}

Value dropout(const Value& a, double rate, RngStream& rng, bool enabled) {
  if (!enabled || rate <= 0.0) return a;
  if (rate >= 1.0) throw std::invalid_argument("dropout: rate must be < 1");
  double keep = 1.0 - rate;
  auto mask = std::make_shared<std::vector<double>>(a.val().size());
  Tensor out(a.shape());
  for (int i = 0; i < a.val().size(); ++i) {
    (*mask)[i] = rng.bernoulli(rate) ? 0.0 : 1.0 / keep;
    out[i] = a.val()[i] * (*mask)[i];
  }
  return make_op(std::move(out), {a}, "dropout", [mask](Node& n) {
    for (int i = 0; i < n.value.size(); ++i) n.inputs[0]->grad[i] += n.grad[i] * (*mask)[i];
  });
}

Value soft_margin_cosine_distance(const Value& a, const Value& b) {
  check_same_shape(a, b, "soft_margin_cosine_distance");
  if (a.val().flat().squaredNorm() == 0.0 || b.val().flat().squaredNorm() == 0.0)
    throw std::invalid_argument("soft_margin_cosine_distance: zero vector");
  // normalize-then-dot keeps the value exactly scale invariant
  Value cos = dot(div_scalar(a, norm2(a)), div_scalar(b, norm2(b)));
  // max(0, 0.9 - cos); relu takes subgradient 0 at the hinge
  return relu(add_const(neg(cos), 0.9));
}

Value detach(const Value& a) { return Value::constant(a.val()); }

void backward(const Value& root) {
  if (!root.defined()) throw std::invalid_argument("backward: undefined root");
  if (!root.val().is_scalar())
    throw std::invalid_argument("backward: root must be a scalar, got shape " +
                                Tensor::shape_str(root.shape()));
  if (!root.node()->requires_grad) return;

  // iterative post-order topological sort
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, size_t>> stack;
  stack.emplace_back(root.node().get(), 0);
  seen.insert(root.node().get());
  while (!stack.empty()) {
    auto& [n, idx] = stack.back();
    bool pushed = false;
    while (idx < n->inputs.size()) {
      Node* in = n->inputs[idx++].get();
      if (in->requires_grad && seen.insert(in).second) {
        stack.emplace_back(in, 0);
        pushed = true;
        break;
      }
    }
    if (!pushed && idx >= n->inputs.size()) {
      order.push_back(n);
      stack.pop_back();
    }
  }

  // Fresh pass for intermediates; leaf parameters keep accumulating so a
  // multi-term objective can call backward once per term.
  for (Node* n : order)
    if (n->backward_fn) n->grad.fill(0.0);

  root.node()->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if ((*it)->backward_fn) (*it)->backward_fn(**it);
}

void zero_grad(const std::vector<NodePtr>& params) {
  for (const auto& p : params) p->grad.fill(0.0);
}

}  // namespace r2a::ad
