#pragma once

#include "r2a/adam.hpp"
#include "r2a/corpus.hpp"
#include "r2a/embeddings.hpp"
#include "r2a/nets.hpp"
#include "r2a/schedule.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace r2a::model {

enum class TransferMode { kDomainTransfer, kAspectTransfer };

struct LossWeights {
  double att = 0.01;        // lambda_att
  double lm = 0.1;          // lambda_lm
  double wd = 0.01;         // lambda_wd; 0 in aspect transfer
  double att_target = 1.0;  // lambda_att^T for the target classifier
  double cons = 0.01;       // consistency weight, aspect transfer only
  double gp_weight = 10.0;  // gradient penalty coefficient
  int critic_iters = 5;     // critic ascent iterations per batch
  double critic_lr = 1e-3;

  void validate() const {
    if (att < 0 || lm < 0 || wd < 0 || att_target < 0 || cons < 0 || gp_weight < 0)
      throw std::invalid_argument("LossWeights: weights must be non-negative");
    if (critic_iters < 1) throw std::invalid_argument("LossWeights: critic_iters must be >= 1");
  }
};

struct ModelDims {
  int embed_dim = 300;
  int encoder_hidden = 200;   // language encoder, per direction
  int r2a_hidden = 50;        // attention-generation encoder, per direction
  int attention_dim = 50;
  int predictor_hidden = 50;
  int critic_hidden = 100;
  int bin_count = 100;
  double dropout = 0.1;
};

// Scalar-valued witness network for the Wasserstein objective: one hidden
// ReLU layer over sequence summaries [h_inv_1 ; h_inv_L].
struct Critic {
  int in_dim = 0;
  int hidden = 0;
  ad::Value w1, b1, w2, b2;

  static Critic create(ParamMap& params, int in_dim, int hidden, RngStream& rng);

  ad::Value score_one(const ad::Value& x) const;   // [w] -> scalar
  ad::Value score_rows(const ad::Value& xs) const; // [N,w] -> [N]

  // Sum over interpolate rows of (||grad_x f(x)||_2 - 1)^2. For the one
  // hidden ReLU layer the input gradient is W1^T (w2 .* step(pre)), exact
  // almost everywhere, so the penalty differentiates through W1 and w2
  // without a second backward pass.
  ad::Value gradient_penalty(const Tensor& interpolates) const;
};

struct SourceTask {
  std::string task_id;
  corpus::TaskKind kind = corpus::TaskKind::kClassification;
  nets::AttentionHead att;
  nets::Predictor pred;
};

// All learnable state: shared encoder, per-task heads, invariant transform,
// LM bin heads, attention-generation encoder/head, critic.
class R2AModel {
 public:
  R2AModel(corpus::Vocab vocab, corpus::EmbeddingMatrix emb, ModelDims dims,
           const std::vector<std::pair<std::string, corpus::TaskKind>>& tasks, uint64_t seed,
           uint64_t bin_seed);

  struct Encoded {
    ad::Value emb;          // [L,D] (dropout applied in training mode)
    nets::BiLstm::Out enc;  // h [L,2H] plus per-direction states
  };

  Encoded encode(const std::vector<int>& tokens, const nets::DropoutCtx& ctx) const;
  ad::Value invariant(const Encoded& e) const;              // [L,2H]
  ad::Value summary(const ad::Value& h_inv) const;          // [4H]

  // cross-entropy / mean-square per task kind; alpha_out receives the
  // attention used for the prediction
  ad::Value task_loss(const Encoded& e, int task_index, double label,
                      const nets::DropoutCtx& ctx, ad::Value* alpha_out) const;

  // bin-prediction LM loss for one sequence, averaged over positions and
  // both directions; boundary positions use zero states
  ad::Value lm_loss(const Encoded& e, const std::vector<int>& tokens) const;

  // alpha-hat from the invariant representation and the augmented rationale
  ad::Value generate_attention(const ad::Value& h_inv, const std::vector<uint8_t>& rationale,
                               const corpus::RationaleFreqTable& freq,
                               const std::vector<int>& tokens) const;

  // deterministic inference path: rationale + frequency table -> attention
  std::vector<double> infer_attention(const corpus::Example& example,
                                      const corpus::RationaleFreqTable& freq) const;

  // [h_inv_1 ; h_inv_L] with dropout off, for export and the critic
  Tensor summary_of(const std::vector<int>& tokens) const;

  int task_index(const std::string& task_id) const;

  const corpus::Vocab& vocab() const { return vocab_; }
  const ModelDims& dims() const { return dims_; }
  const corpus::BinMap& bins() const { return bins_; }
  uint64_t bin_seed() const { return bin_seed_; }
  ParamMap& params() { return params_; }
  const ParamMap& params() const { return params_; }
  ParamMap& critic_params() { return critic_params_; }
  const ParamMap& critic_params() const { return critic_params_; }
  const Critic& critic() const { return critic_; }
  Critic& critic() { return critic_; }
  const std::vector<SourceTask>& tasks() const { return tasks_; }
  const nets::BiLstm& encoder() const { return enc_; }
  const ad::Value& embedding() const { return embedding_; }

 private:
  corpus::Vocab vocab_;
  ModelDims dims_;
  ad::Value embedding_;  // frozen [V,D]
  ParamMap params_;
  ParamMap critic_params_;
  nets::BiLstm enc_;
  ad::Value w_inv_, b_inv_;
  ad::Value lm_fwd_w_, lm_fwd_b_, lm_bwd_w_, lm_bwd_b_;
  nets::BiLstm enc_r2a_;
  nets::AttentionHead att_r2a_;
  std::vector<SourceTask> tasks_;
  Critic critic_;
  corpus::BinMap bins_;
  uint64_t bin_seed_ = 0;
};

// One critic phase: `critic_iters` ascent iterations on frozen summaries,
// then the post-update objective value (without penalty) as the L_wd
// estimate.
double critic_update(const std::vector<Tensor>& source_summaries,
                     const std::vector<Tensor>& target_summaries, Critic& critic,
                     ParamMap& critic_params, AdamState& critic_adam, double gp_weight,
                     int iters, RngStream& rng);

struct EpochTrace {
  int epoch = 0;
  double lbl = 0, att = 0, lm = 0, wd = 0, cons = 0, total = 0;
  bool has_att = false, has_lm = false, has_wd = false, has_cons = false;
  double dev_lbl = 0;
  double lr = 0;
};

struct R2ATrainConfig {
  TransferMode mode = TransferMode::kDomainTransfer;
  LossWeights weights;
  TrainSchedule schedule;
  int batch_size = 32;
  uint64_t seed = 1;
};

// Joint training of the three components (Eq. of the overall objective):
// alternates critic ascent with one descent step on
// L_lbl + att*L_att + lm*L_lm + wd*L_wd (+ cons consistency in aspect mode).
std::vector<EpochTrace> r2a_train(R2AModel& model,
                                  const std::vector<corpus::TaskDataset>& sources,
                                  const std::vector<corpus::Example>& target_unlabeled,
                                  const R2ATrainConfig& config);

// checkpoint round trip; load rejects vocabulary-hash mismatches
void save_checkpoint(const std::string& path, const R2AModel& model, const LossWeights& weights,
                     TransferMode mode);

struct Checkpoint {
  std::unique_ptr<R2AModel> model;
  LossWeights weights;
  TransferMode mode = TransferMode::kDomainTransfer;
};

Checkpoint load_checkpoint(const std::string& path, const corpus::Vocab& expected_vocab);

}  // namespace r2a::model
