#include "r2a/trainer.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace r2a::trainer {

using ad::Value;
using corpus::Example;
using corpus::TaskKind;
using nets::DropoutCtx;

Supervision supervision_from_string(const std::string& s) {
  if (s == "none") return Supervision::kNone;
  if (s == "rationale") return Supervision::kRationale;
  if (s == "generated") return Supervision::kGenerated;
  if (s == "oracle") return Supervision::kOracle;
  throw std::invalid_argument("unknown supervision mode '" + s + "'");
}

std::string supervision_to_string(Supervision s) {
  switch (s) {
    case Supervision::kNone: return "none";
    case Supervision::kRationale: return "rationale";
    case Supervision::kGenerated: return "generated";
    case Supervision::kOracle: return "oracle";
  }
  return "none";
}

AttentionClassifierModel::AttentionClassifierModel(Tensor embedding, int embed_dim,
                                                   int encoder_hidden, int attention_dim,
                                                   int predictor_hidden, double dropout,
                                                   const std::string& task_id, TaskKind kind,
                                                   uint64_t seed)
    : task_id_(task_id), kind_(kind), dropout_(dropout) {
  if (embedding.ndim() != 2 || embedding.cols() != embed_dim)
    throw std::invalid_argument("AttentionClassifierModel: bad embedding shape");
  embedding_ = Value::constant(std::move(embedding));
  {
    RngStream rng = named_stream(seed, "init:enc");
    enc_ = nets::BiLstm::create(params_, "enc", embed_dim, encoder_hidden, rng);
  }
  {
    RngStream rng = named_stream(seed, "init:att:" + task_id);
    att_ = nets::AttentionHead::create(params_, "att:" + task_id, 2 * encoder_hidden,
                                       attention_dim, rng);
  }
  {
    RngStream rng = named_stream(seed, "init:pred:" + task_id);
    pred_ = nets::Predictor::create(params_, "pred:" + task_id, 2 * encoder_hidden,
                                    predictor_hidden, kind == TaskKind::kClassification ? 2 : 1,
                                    rng);
    pred_.w2.node()->value.fill(0.0);
  }
}

AttentionClassifierModel AttentionClassifierModel::from_checkpoint(const model::R2AModel& ckpt,
                                                                   const std::string& task_id,
                                                                   TaskKind kind,
                                                                   uint64_t seed) {
  const model::ModelDims& d = ckpt.dims();
  AttentionClassifierModel m(ckpt.embedding().val(), d.embed_dim, d.encoder_hidden,
                             d.attention_dim, d.predictor_hidden, d.dropout, task_id, kind,
                             seed);
  // transfer: the trained language encoder warm-starts the target encoder
  for (const char* name : {".wx_f", ".wh_f", ".b_f", ".wx_b", ".wh_b", ".b_b"}) {
    ad::NodePtr src = ckpt.params().find("enc" + std::string(name));
    ad::NodePtr dst = m.params_.find("enc" + std::string(name));
    dst->value = src->value;
  }
  return m;
}

AttentionClassifierModel::Out AttentionClassifierModel::forward(const std::vector<int>& tokens,
                                                                const DropoutCtx& ctx) const {
  Value emb = nets::apply_dropout(ad::gather_rows(embedding_, tokens), ctx);
  Value h = enc_.forward(emb).h;
  Out out;
  out.alpha = att_.forward(h);
  out.logits = pred_.forward(ad::vecmat(out.alpha, h), ctx);
  return out;
}

Value AttentionClassifierModel::loss(const Out& out, double label) const {
  if (kind_ == TaskKind::kClassification)
    return ad::cross_entropy(out.logits, static_cast<int>(label));
  return ad::mse(out.logits, label);
}

int AttentionClassifierModel::predict(const std::vector<int>& tokens) const {
  Out out = forward(tokens, DropoutCtx::inference());
  int best = 0;
  for (int c = 1; c < out.logits.val().size(); ++c)
    if (out.logits.val()[c] > out.logits.val()[best]) best = c;
  return best;
}

std::vector<double> AttentionClassifierModel::attention(const std::vector<int>& tokens) const {
  Out out = forward(tokens, DropoutCtx::inference());
  return std::vector<double>(out.alpha.val().data(),
                             out.alpha.val().data() + out.alpha.val().size());
}

std::vector<Tensor> AttentionClassifierModel::snapshot() const {
  std::vector<Tensor> snap;
  for (const auto& [_, node] : params_.items()) snap.push_back(node->value);
  return snap;
}

void AttentionClassifierModel::restore(const std::vector<Tensor>& snap) {
  if (snap.size() != params_.size())
    throw std::invalid_argument("AttentionClassifierModel::restore: size mismatch");
  size_t k = 0;
  for (auto& [_, node] : params_.items()) node->value = snap[k++];
}

TargetResult train_attention_classifier(AttentionClassifierModel& model,
                                        const std::vector<Example>& train,
                                        const std::vector<Example>& dev,
                                        const std::vector<std::vector<double>>& supervision,
                                        double lambda_att, const TrainSchedule& schedule,
                                        int batch_size, uint64_t seed) {
  if (train.empty()) throw std::invalid_argument("train_attention_classifier: empty train split");
  schedule.validate();
  bool supervised = lambda_att > 0.0 && !supervision.empty();
  if (supervised && supervision.size() != train.size())
    throw std::invalid_argument("train_attention_classifier: supervision misaligned with train");

  Batcher batcher(static_cast<int>(train.size()), batch_size,
                  named_stream(seed, "shuffle:" + model.task_id()));
  RngStream dropout_rng = named_stream(seed, "dropout");
  DropoutCtx train_ctx{true, model.dropout(), &dropout_rng};

  AdamState adam({schedule.initial_lr});
  PlateauScheduler scheduler(schedule, schedule.initial_lr);

  TargetResult result;
  std::vector<Tensor> best_snap = model.snapshot();
  double best_acc = -1.0;
  for (int epoch = 0; epoch < schedule.max_epochs; ++epoch) {
    TrainEpoch te;
    te.epoch = epoch;
    int steps = batcher.batches_per_epoch();
    for (int step = 0; step < steps; ++step) {
      std::vector<Value> losses;
      for (int idx : batcher.next()) {
        const Example& ex = train[idx];
        if (!ex.label)
          throw std::invalid_argument("train_attention_classifier: unlabeled train example");
        auto out = model.forward(ex.tokens, train_ctx);
        Value loss = model.loss(out, *ex.label);
        if (supervised) {
          const std::vector<double>& target = supervision[idx];
          if (static_cast<int>(target.size()) != ex.length())
            throw std::invalid_argument(
                "train_attention_classifier: supervision length mismatch");
          Tensor t({ex.length()});
          std::copy(target.begin(), target.end(), t.data());
          Value d = ad::soft_margin_cosine_distance(out.alpha, Value::constant(std::move(t)));
          loss = ad::add(loss, ad::scale(d, lambda_att));
        }
        losses.push_back(loss);
      }
      Value total = ad::mean_vec(losses);
      te.train_loss += total.item();
      model.params().zero_grad();
      ad::backward(total);
      adam.step(model.params());
    }
    te.train_loss /= steps;

    if (!dev.empty()) {
      te.dev_accuracy = evaluate_accuracy(model, dev);
      if (te.dev_accuracy > best_acc) {
        best_acc = te.dev_accuracy;
        best_snap = model.snapshot();
      }
      adam.set_learning_rate(scheduler.update(te.dev_accuracy));
    }
    te.lr = adam.learning_rate();
    result.trace.push_back(te);
    if (!dev.empty() && scheduler.exhausted()) break;
  }
  if (!dev.empty()) {
    model.restore(best_snap);
    result.best_dev_accuracy = best_acc;
  }
  return result;
}

TargetResult train_target(AttentionClassifierModel& model, const corpus::TaskDataset& target,
                          const std::vector<std::vector<double>>* supervision_attention,
                          const TargetTrainConfig& config) {
  std::vector<std::vector<double>> supervision;
  switch (config.supervision) {
    case Supervision::kNone:
      break;
    case Supervision::kRationale:
      for (const Example& ex : target.train) {
        if (!ex.has_rationale())
          throw std::invalid_argument("train_target: rationale mode needs rationales");
        supervision.push_back(normalize_mask(ex.rationale));
      }
      break;
    case Supervision::kGenerated:
    case Supervision::kOracle:
      if (!supervision_attention || supervision_attention->size() != target.train.size())
        throw std::invalid_argument("train_target: missing attention supervision");
      supervision = *supervision_attention;
      break;
  }
  double lambda = config.supervision == Supervision::kNone ? 0.0 : config.lambda_att_target;
  return train_attention_classifier(model, target.train, target.dev, supervision, lambda,
                                    config.schedule, config.batch_size, config.seed);
}

double evaluate_accuracy(const AttentionClassifierModel& model,
                         const std::vector<Example>& split) {
  if (split.empty()) throw std::invalid_argument("evaluate_accuracy: empty split");
  int correct = 0, total = 0;
  for (const Example& ex : split) {
    if (!ex.label) throw std::invalid_argument("evaluate_accuracy: unlabeled example");
    if (model.predict(ex.tokens) == static_cast<int>(*ex.label)) ++correct;
    ++total;
  }
  return static_cast<double>(correct) / total;
}

AttentionClassifierModel train_oracle_attention(const Tensor& embedding,
                                                const std::vector<Example>& large_split,
                                                const std::vector<Example>& dev,
                                                const std::string& task_id, TaskKind kind,
                                                const OracleConfig& config) {
  AttentionClassifierModel model(embedding, config.embed_dim, config.encoder_hidden,
                                 config.attention_dim, config.predictor_hidden, config.dropout,
                                 task_id, kind, config.seed);
  train_attention_classifier(model, large_split, dev, {}, 0.0, config.schedule,
                             config.batch_size, config.seed);
  return model;
}

std::vector<double> normalize_mask(const std::vector<uint8_t>& mask) {
  double total = 0;
  for (uint8_t b : mask) total += b;
  if (total == 0) throw std::invalid_argument("normalize_mask: all-zero mask");
  std::vector<double> out(mask.size());
  for (size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] / total;
  return out;
}

double attention_distance_report(const std::vector<std::vector<double>>& source,
                                 const std::vector<std::vector<double>>& oracle) {
  if (source.empty() || source.size() != oracle.size())
    throw std::invalid_argument("attention_distance_report: misaligned collections");
  double total = 0;
  for (size_t i = 0; i < source.size(); ++i) {
    Tensor a({static_cast<int>(source[i].size())});
    std::copy(source[i].begin(), source[i].end(), a.data());
    Tensor b({static_cast<int>(oracle[i].size())});
    std::copy(oracle[i].begin(), oracle[i].end(), b.data());
    total += ad::soft_margin_cosine_distance(Value::constant(std::move(a)),
                                             Value::constant(std::move(b)))
                 .item();
  }
  return total / static_cast<double>(source.size());
}

GridResult grid_tune(const std::vector<double>& candidates, const model::R2AModel& ckpt,
                     const corpus::TaskDataset& target,
                     const std::vector<std::vector<double>>* supervision_attention,
                     TargetTrainConfig config) {
  if (candidates.empty()) throw std::invalid_argument("grid_tune: no candidates");
  std::vector<double> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  GridResult result;
  result.best_dev_accuracy = -1.0;
  for (double lambda : sorted) {
    config.lambda_att_target = lambda;
    AttentionClassifierModel model = AttentionClassifierModel::from_checkpoint(
        ckpt, target.task_id, target.kind, config.seed);
    TargetResult r = train_target(model, target, supervision_attention, config);
    result.all.emplace_back(lambda, r.best_dev_accuracy);
    if (r.best_dev_accuracy > result.best_dev_accuracy) {
      result.best_dev_accuracy = r.best_dev_accuracy;
      result.best_lambda = lambda;
    }
  }
  return result;
}

void EvalReport::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("EvalReport: cannot open " + path);
  out << "metric,split,seed,value\n";
  char buf[64];
  for (const EvalRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.value);
    out << r.metric << ',' << r.split << ',' << r.seed << ',' << buf << '\n';
  }
}

void EvalReport::write_json(const std::string& path) const {
  nlohmann::json j = nlohmann::json::array();
  for (const EvalRow& r : rows)
    j.push_back({{"metric", r.metric}, {"split", r.split}, {"seed", r.seed}, {"value", r.value}});
  std::ofstream out(path);
  if (!out) throw std::runtime_error("EvalReport: cannot open " + path);
  out << j.dump(2) << '\n';
}

}  // namespace r2a::trainer
