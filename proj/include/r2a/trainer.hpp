#pragma once

#include "r2a/r2a_model.hpp"
#include "r2a/schedule.hpp"

#include <string>
#include <vector>

namespace r2a::trainer {

// attention supervision source for the target objective
enum class Supervision { kNone, kRationale, kGenerated, kOracle };

Supervision supervision_from_string(const std::string& s);
std::string supervision_to_string(Supervision s);

// Standalone attention classifier: encoder, attention head, predictor over
// frozen embeddings. Also the architecture used to derive oracle attention.
class AttentionClassifierModel {
 public:
  // fresh initialization from named seed streams
  AttentionClassifierModel(Tensor embedding, int embed_dim, int encoder_hidden,
                           int attention_dim, int predictor_hidden, double dropout,
                           const std::string& task_id, corpus::TaskKind kind, uint64_t seed);

  // encoder and embeddings copied from a trained R2A checkpoint; heads fresh
  static AttentionClassifierModel from_checkpoint(const model::R2AModel& ckpt,
                                                  const std::string& task_id,
                                                  corpus::TaskKind kind, uint64_t seed);

  struct Out {
    ad::Value alpha;
    ad::Value logits;
  };
  Out forward(const std::vector<int>& tokens, const nets::DropoutCtx& ctx) const;
  ad::Value loss(const Out& out, double label) const;

  // argmax prediction, ties toward the lower class id
  int predict(const std::vector<int>& tokens) const;
  std::vector<double> attention(const std::vector<int>& tokens) const;

  ParamMap& params() { return params_; }
  corpus::TaskKind kind() const { return kind_; }
  double dropout() const { return dropout_; }
  const std::string& task_id() const { return task_id_; }

  std::vector<Tensor> snapshot() const;
  void restore(const std::vector<Tensor>& snap);

 private:
  std::string task_id_;
  corpus::TaskKind kind_ = corpus::TaskKind::kClassification;
  double dropout_ = 0.1;
  ad::Value embedding_;
  ParamMap params_;
  nets::BiLstm enc_;
  nets::AttentionHead att_;
  nets::Predictor pred_;
};

struct TargetTrainConfig {
  Supervision supervision = Supervision::kGenerated;
  double lambda_att_target = 1.0;
  TrainSchedule schedule;
  int batch_size = 32;
  uint64_t seed = 1;
};

struct TrainEpoch {
  int epoch = 0;
  double train_loss = 0;
  double dev_accuracy = 0;
  double lr = 0;
};

struct TargetResult {
  double best_dev_accuracy = 0;
  std::vector<TrainEpoch> trace;
};

// Minimizes label loss plus lambda * soft-margin cosine distance between the
// classifier's own attention and the per-example supervision vector (empty
// slot = unsupervised example is an error in supervised modes). The best
// dev-accuracy parameters are restored before returning.
TargetResult train_attention_classifier(AttentionClassifierModel& model,
                                        const std::vector<corpus::Example>& train,
                                        const std::vector<corpus::Example>& dev,
                                        const std::vector<std::vector<double>>& supervision,
                                        double lambda_att, const TrainSchedule& schedule,
                                        int batch_size, uint64_t seed);

// Eq.-2 style target training. Supervision vectors are required for the
// generated and oracle modes (aligned with the train split); the rationale
// mode normalizes each example's mask; none ignores attention entirely.
// The encoder is initialized from the R2A checkpoint in every mode.
TargetResult train_target(AttentionClassifierModel& model, const corpus::TaskDataset& target,
                          const std::vector<std::vector<double>>* supervision_attention,
                          const TargetTrainConfig& config);

// fraction of correct argmax predictions; ties toward the lower class id
double evaluate_accuracy(const AttentionClassifierModel& model,
                         const std::vector<corpus::Example>& split);

// trains a fresh attention classifier on a large labeled split; its attention
// on the requested examples (dropout off) is the oracle attention
struct OracleConfig {
  int embed_dim = 300;
  int encoder_hidden = 200;
  int attention_dim = 50;
  int predictor_hidden = 50;
  double dropout = 0.1;
  TrainSchedule schedule;
  int batch_size = 32;
  uint64_t seed = 1;
};

AttentionClassifierModel train_oracle_attention(const Tensor& embedding,
                                                const std::vector<corpus::Example>& large_split,
                                                const std::vector<corpus::Example>& dev,
                                                const std::string& task_id,
                                                corpus::TaskKind kind,
                                                const OracleConfig& config);

// rationale mask as a distribution (mass / sum); throws on all-zero masks
std::vector<double> normalize_mask(const std::vector<uint8_t>& mask);

// mean soft-margin cosine distance between aligned attention collections
double attention_distance_report(const std::vector<std::vector<double>>& source,
                                 const std::vector<std::vector<double>>& oracle);

struct GridResult {
  double best_lambda = 0;
  double best_dev_accuracy = 0;
  std::vector<std::pair<double, double>> all;  // (lambda, dev accuracy)
};

// one model per candidate under the same seed; argmax dev accuracy, ties
// toward the smaller lambda
GridResult grid_tune(const std::vector<double>& candidates, const model::R2AModel& ckpt,
                     const corpus::TaskDataset& target,
                     const std::vector<std::vector<double>>* supervision_attention,
                     TargetTrainConfig config);

// report rows serialized as `metric,split,seed,value` CSV plus a JSON summary
struct EvalRow {
  std::string metric;
  std::string split;
  uint64_t seed = 0;
  double value = 0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  void add(const std::string& metric, const std::string& split, uint64_t seed, double value) {
    rows.push_back({metric, split, seed, value});
  }
  void write_csv(const std::string& path) const;
  void write_json(const std::string& path) const;
};

}  // namespace r2a::trainer
