#pragma once

#include "r2a/adam.hpp"
#include "r2a/autodiff.hpp"
#include "r2a/rng.hpp"

#include <string>
#include <vector>

namespace r2a::nets {

// Training-time noise control for forward passes. Deterministic when
// disabled; the stream ordering is fixed by the forward call order.
struct DropoutCtx {
  bool enabled = false;
  double rate = 0.1;
  RngStream* rng = nullptr;

  static DropoutCtx inference() { return {}; }
};

ad::Value apply_dropout(const ad::Value& v, const DropoutCtx& ctx);

// Uniform [-1/sqrt(h), 1/sqrt(h)] init used by the recurrent and dense blocks.
Tensor init_uniform(std::vector<int> shape, int fan, RngStream& rng);

// Bi-directional LSTM (input/forget/output gates, tanh cell, zero initial
// states). Forward and backward directions hold disjoint parameters; the
// output width is 2H.
struct BiLstm {
  int in_dim = 0;
  int hidden = 0;
  ad::Value wx_f, wh_f, b_f;  // [4H x D], [4H x H], [4H]
  ad::Value wx_b, wh_b, b_b;

  static BiLstm create(ParamMap& params, const std::string& prefix, int in_dim, int hidden,
                       RngStream& rng);

  struct Out {
    ad::Value h;                    // [L x 2H]
    std::vector<ad::Value> fwd;     // L states [H], causal
    std::vector<ad::Value> bwd;     // L states [H], anti-causal
  };
  Out forward(const ad::Value& x) const;  // x: [L x D]
};

// tanh projection + inner product with a query vector, then masked softmax.
struct AttentionHead {
  int in_dim = 0;
  int att_dim = 0;
  ad::Value w, b, q;  // [A x 2H], [A], [A]

  static AttentionHead create(ParamMap& params, const std::string& prefix, int in_dim,
                              int att_dim, RngStream& rng);

  ad::Value forward(const ad::Value& h, const std::vector<uint8_t>& mask = {}) const;
};

// One hidden layer (ReLU) and a task-sized output: 2 logits for
// classification, 1 output for regression. Dropout sits on the hidden layer.
struct Predictor {
  int in_dim = 0;
  int hidden = 0;
  int out_dim = 0;
  ad::Value w1, b1, w2, b2;

  static Predictor create(ParamMap& params, const std::string& prefix, int in_dim, int hidden,
                          int out_dim, RngStream& rng);

  ad::Value forward(const ad::Value& x, const DropoutCtx& dropout) const;
};

// 1-D convolutions over (possibly z-scaled) embeddings with max-over-time
// pooling and an MLP head. Window sizes and feature map count are fixed at
// construction; pooled width = windows * feature_maps.
struct ConvClassifier {
  std::vector<int> windows = {3, 5, 7};
  int feature_maps = 50;
  int emb_dim = 0;
  std::vector<ad::Value> filters;  // per window: [F x w*D]
  std::vector<ad::Value> biases;   // per window: [F]
  Predictor head;

  static ConvClassifier create(ParamMap& params, const std::string& prefix, int emb_dim,
                               int feature_maps, int predictor_hidden, int out_dim,
                               RngStream& rng);

  // x: [L x D] embedded tokens; z: per-position weights (empty = all ones).
  // Sequences shorter than the largest window are padded with zero rows.
  ad::Value forward(const ad::Value& x, const ad::Value& z, const DropoutCtx& dropout) const;
};

}  // namespace r2a::nets
