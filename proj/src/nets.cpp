#include "r2a/nets.hpp"

#include <cmath>

namespace r2a::nets {

using ad::Value;

Value apply_dropout(const Value& v, const DropoutCtx& ctx) {
  if (!ctx.enabled) return v;
  if (!ctx.rng) throw std::invalid_argument("DropoutCtx: enabled without an rng stream");
  return ad::dropout(v, ctx.rate, *ctx.rng, true);
}

Tensor init_uniform(std::vector<int> shape, int fan, RngStream& rng) {
  double bound = 1.0 / std::sqrt(static_cast<double>(fan));
  Tensor t(std::move(shape));
  for (int i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
  return t;
}

BiLstm BiLstm::create(ParamMap& params, const std::string& prefix, int in_dim, int hidden,
                      RngStream& rng) {
  BiLstm l;
  l.in_dim = in_dim;
  l.hidden = hidden;
  l.wx_f = params.add(prefix + ".wx_f", init_uniform({4 * hidden, in_dim}, hidden, rng));
  l.wh_f = params.add(prefix + ".wh_f", init_uniform({4 * hidden, hidden}, hidden, rng));
  l.b_f = params.add(prefix + ".b_f", Tensor({4 * hidden}));
  l.wx_b = params.add(prefix + ".wx_b", init_uniform({4 * hidden, in_dim}, hidden, rng));
  l.wh_b = params.add(prefix + ".wh_b", init_uniform({4 * hidden, hidden}, hidden, rng));
  l.b_b = params.add(prefix + ".b_b", Tensor({4 * hidden}));
  return l;
}

namespace {

// one direction of the recurrence over precomputed input projections
std::vector<Value> run_lstm(const Value& pre, const Value& wh, int hidden,
                            const std::vector<int>& order) {
  std::vector<Value> states(order.size());
  Value h = Value::constant(Tensor({hidden}));
  Value c = Value::constant(Tensor({hidden}));
  for (int idx : order) {
    Value gates = ad::add(ad::row(pre, idx), ad::matmul(wh, h));
    Value in_gate = ad::sigmoid(ad::slice(gates, 0, hidden));
    Value forget_gate = ad::sigmoid(ad::slice(gates, hidden, 2 * hidden));
    Value cell_in = ad::tanh_op(ad::slice(gates, 2 * hidden, 3 * hidden));
    Value out_gate = ad::sigmoid(ad::slice(gates, 3 * hidden, 4 * hidden));
    c = ad::add(ad::mul(forget_gate, c), ad::mul(in_gate, cell_in));
    h = ad::mul(out_gate, ad::tanh_op(c));
    states[idx] = h;
  }
  return states;
}

}  // namespace

BiLstm::Out BiLstm::forward(const Value& x) const {
  if (x.val().ndim() != 2 || x.val().cols() != in_dim)
    throw std::invalid_argument("BiLstm: input width mismatch");
  int L = x.val().rows();

  Value pre_f = ad::affine(x, wx_f, b_f);  // [L x 4H]
  Value pre_b = ad::affine(x, wx_b, b_b);

  std::vector<int> fwd_order(L), bwd_order(L);
  for (int i = 0; i < L; ++i) {
    fwd_order[i] = i;
    bwd_order[i] = L - 1 - i;
  }
  Out out;
  out.fwd = run_lstm(pre_f, wh_f, hidden, fwd_order);
  out.bwd = run_lstm(pre_b, wh_b, hidden, bwd_order);

  std::vector<Value> rows(L);
  for (int i = 0; i < L; ++i) rows[i] = ad::concat(out.fwd[i], out.bwd[i]);
  out.h = ad::stack_rows(rows);
  return out;
}

AttentionHead AttentionHead::create(ParamMap& params, const std::string& prefix, int in_dim,
                                    int att_dim, RngStream& rng) {
  AttentionHead head;
  head.in_dim = in_dim;
  head.att_dim = att_dim;
  head.w = params.add(prefix + ".w", init_uniform({att_dim, in_dim}, in_dim, rng));
  head.b = params.add(prefix + ".b", Tensor({att_dim}));
  head.q = params.add(prefix + ".q", init_uniform({att_dim}, att_dim, rng));
  return head;
}

Value AttentionHead::forward(const Value& h, const std::vector<uint8_t>& mask) const {
  Value proj = ad::tanh_op(ad::affine(h, w, b));  // [L x A]
  Value scores = ad::matmul(proj, q);             // [L]
  return ad::softmax(scores, mask);
}

Predictor Predictor::create(ParamMap& params, const std::string& prefix, int in_dim, int hidden,
                            int out_dim, RngStream& rng) {
  Predictor p;
  p.in_dim = in_dim;
  p.hidden = hidden;
  p.out_dim = out_dim;
  p.w1 = params.add(prefix + ".w1", init_uniform({hidden, in_dim}, in_dim, rng));
  p.b1 = params.add(prefix + ".b1", Tensor({hidden}));
  p.w2 = params.add(prefix + ".w2", init_uniform({out_dim, hidden}, hidden, rng));
  p.b2 = params.add(prefix + ".b2", Tensor({out_dim}));
  return p;
}

Value Predictor::forward(const Value& x, const DropoutCtx& dropout) const {
  Value hid = apply_dropout(ad::relu(ad::affine(x, w1, b1)), dropout);
  return ad::affine(hid, w2, b2);
}

ConvClassifier ConvClassifier::create(ParamMap& params, const std::string& prefix, int emb_dim,
                                      int feature_maps, int predictor_hidden, int out_dim,
                                      RngStream& rng) {
  ConvClassifier c;
  c.emb_dim = emb_dim;
  c.feature_maps = feature_maps;
  for (int w : c.windows) {
    c.filters.push_back(params.add(prefix + ".conv" + std::to_string(w) + ".w",
                                   init_uniform({feature_maps, w * emb_dim}, w * emb_dim, rng)));
    c.biases.push_back(
        params.add(prefix + ".conv" + std::to_string(w) + ".b", Tensor({feature_maps})));
  }
  int pooled = static_cast<int>(c.windows.size()) * feature_maps;
  c.head = Predictor::create(params, prefix + ".head", pooled, predictor_hidden, out_dim, rng);
  return c;
}

Value ConvClassifier::forward(const Value& x, const Value& z, const DropoutCtx& dropout) const {
  Value input = z.defined() ? ad::scale_rows(x, z) : x;
  int max_window = windows.back();
  if (input.val().rows() < max_window) input = ad::pad_rows(input, max_window);

  Value pooled;
  for (size_t k = 0; k < windows.size(); ++k) {
    Value cols = ad::gather_windows(input, windows[k]);            // [T x w*D]
    Value feats = ad::relu(ad::affine(cols, filters[k], biases[k]));  // [T x F]
    Value mx = ad::max_over_rows(feats);                           // [F]
    pooled = pooled.defined() ? ad::concat(pooled, mx) : mx;
  }
  return head.forward(pooled, dropout);
}

}  // namespace r2a::nets
