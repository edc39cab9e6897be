#pragma once

#include "r2a/corpus.hpp"
#include "r2a/embeddings.hpp"
#include "r2a/nets.hpp"
#include "r2a/schedule.hpp"

#include <vector>

namespace r2a::rationalizer {

struct RationalizerWeights {
  double sparsity = 0.01;   // weight on mean(z)
  double coherence = 0.02;  // weight on mean |z_i - z_{i-1}|
  double tau = 1.0;         // relaxation temperature

  void validate() const {
    if (sparsity < 0 || coherence < 0)
      throw std::invalid_argument("RationalizerWeights: negative weight");
    if (tau <= 0) throw std::invalid_argument("RationalizerWeights: tau must be > 0");
  }
};

struct RationalizerDims {
  int embed_dim = 300;
  int gen_hidden = 200;  // generator bi-LSTM, per direction
  int feature_maps = 50;
  int predictor_hidden = 50;
  double dropout = 0.1;
};

enum class SampleMode { kRelaxed, kHard };

// Generator-classifier pair: the generator scores each position, samples a
// (relaxed) selection z, and the CNN classifier predicts the label from the
// z-scaled embeddings alone.
class Rationalizer {
 public:
  Rationalizer(const corpus::Vocab& vocab, corpus::EmbeddingMatrix emb, RationalizerDims dims,
               corpus::TaskKind kind, uint64_t seed);

  struct Sample {
    ad::Value p;  // selection probabilities, in (0,1)
    ad::Value z;  // relaxed in (0,1) with gradient, or hard in {0,1} constant
  };

  // relaxed mode draws logistic noise from `noise`; hard mode thresholds
  // p > 0.5 and is deterministic
  Sample generator_forward(const std::vector<int>& tokens, SampleMode mode, double tau,
                           const nets::DropoutCtx& ctx, RngStream* noise) const;

  ad::Value classify(const std::vector<int>& tokens, const ad::Value& z,
                     const nets::DropoutCtx& ctx) const;

  ad::Value task_loss(const ad::Value& output, double label) const;

  // hard-mode mask; at least one position forced on (argmax p)
  std::vector<uint8_t> extract_mask(const std::vector<int>& tokens) const;

  ParamMap& params() { return params_; }
  corpus::TaskKind kind() const { return kind_; }
  const RationalizerDims& dims() const { return dims_; }

 private:
  RationalizerDims dims_;
  corpus::TaskKind kind_;
  ad::Value embedding_;  // frozen
  ParamMap params_;
  nets::BiLstm gen_enc_;
  ad::Value gen_w_, gen_b_;  // per-position selection head
  nets::ConvClassifier clf_;
};

// task loss + sparsity * mean(z) + coherence * mean adjacent |difference|
ad::Value rationalizer_loss(const ad::Value& task_loss, const ad::Value& z,
                            const RationalizerWeights& weights);

struct RationalizerTrainConfig {
  RationalizerWeights weights;
  TrainSchedule schedule;
  int batch_size = 32;
  uint64_t seed = 1;
  // epochs with the regularizers off, so the classifier learns which tokens
  // matter before pruning pressure starts
  int sparsity_warmup_epochs = 0;
};

struct RationalizerEpoch {
  int epoch = 0;
  double train_loss = 0;
  double dev_task_loss = 0;  // hard-mode, noise off
  double dev_mean_z = 0;
  double lr = 0;
};

std::vector<RationalizerEpoch> train_rationalizer(Rationalizer& model,
                                                  const corpus::TaskDataset& task,
                                                  const RationalizerTrainConfig& config);

// hard-mode masks written onto copies of the examples
std::vector<corpus::Example> extract_rationales(const Rationalizer& model,
                                                const std::vector<corpus::Example>& examples);

}  // namespace r2a::rationalizer
