#include "r2a/rationalizer.hpp"

#include <cmath>

namespace r2a::rationalizer {

using ad::Value;
using corpus::TaskKind;
using nets::DropoutCtx;

Rationalizer::Rationalizer(const corpus::Vocab& vocab, corpus::EmbeddingMatrix emb,
                           RationalizerDims dims, TaskKind kind, uint64_t seed)
    : dims_(dims), kind_(kind) {
  if (emb.weights.rows() != vocab.size() || emb.dim != dims.embed_dim)
    throw std::invalid_argument("Rationalizer: embedding size does not match vocab/dims");
  embedding_ = Value::constant(std::move(emb.weights));
  {
    RngStream rng = named_stream(seed, "init:rationalizer:gen");
    gen_enc_ = nets::BiLstm::create(params_, "gen.enc", dims.embed_dim, dims.gen_hidden, rng);
    gen_w_ = params_.add("gen.head.w",
                         nets::init_uniform({2 * dims.gen_hidden}, 2 * dims.gen_hidden, rng));
    gen_b_ = params_.add("gen.head.b", Tensor::scalar(0.0));
  }
  {
    RngStream rng = named_stream(seed, "init:rationalizer:clf");
    clf_ = nets::ConvClassifier::create(params_, "clf", dims.embed_dim, dims.feature_maps,
                                        dims.predictor_hidden,
                                        kind == TaskKind::kClassification ? 2 : 1, rng);
    clf_.head.w2.node()->value.fill(0.0);
  }
}

Rationalizer::Sample Rationalizer::generator_forward(const std::vector<int>& tokens,
                                                     SampleMode mode, double tau,
                                                     const DropoutCtx& ctx,
                                                     RngStream* noise) const {
  Value emb = nets::apply_dropout(ad::gather_rows(embedding_, tokens), ctx);
  Value h = gen_enc_.forward(emb).h;                       // [L,2H]
  Value scores = ad::add_scalar(ad::matmul(h, gen_w_), gen_b_);  // logit(p)
  Sample s;
  s.p = ad::sigmoid(scores);
  if (mode == SampleMode::kHard) {
    Tensor z({static_cast<int>(tokens.size())});
    for (int i = 0; i < z.size(); ++i) z[i] = s.p.val()[i] > 0.5 ? 1.0 : 0.0;
    s.z = Value::constant(std::move(z));
    return s;
  }
  if (tau <= 0) throw std::invalid_argument("generator_forward: tau must be > 0 when relaxed");
  if (!noise) throw std::invalid_argument("generator_forward: relaxed mode needs a noise stream");
  // binary concrete relaxation: z = sigmoid((logit(p) + g) / tau)
  Tensor g({static_cast<int>(tokens.size())});
  for (int i = 0; i < g.size(); ++i) g[i] = noise->logistic();
  s.z = ad::sigmoid(ad::scale(ad::add(scores, Value::constant(std::move(g))), 1.0 / tau));
  return s;
}

Value Rationalizer::classify(const std::vector<int>& tokens, const Value& z,
                             const DropoutCtx& ctx) const {
  Value emb = nets::apply_dropout(ad::gather_rows(embedding_, tokens), ctx);
  return clf_.forward(emb, z, ctx);
}

Value Rationalizer::task_loss(const Value& output, double label) const {
  if (kind_ == TaskKind::kClassification)
    return ad::cross_entropy(output, static_cast<int>(label));
  return ad::mse(output, label);
}

std::vector<uint8_t> Rationalizer::extract_mask(const std::vector<int>& tokens) const {
  Sample s = generator_forward(tokens, SampleMode::kHard, 0.0, DropoutCtx::inference(), nullptr);
  std::vector<uint8_t> mask(tokens.size(), 0);
  bool any = false;
  for (size_t i = 0; i < tokens.size(); ++i) {
    mask[i] = s.z.val()[static_cast<int>(i)] > 0.5 ? 1 : 0;
    any = any || mask[i];
  }
  if (!any) {
    int best = 0;
    for (int i = 1; i < s.p.val().size(); ++i)
      if (s.p.val()[i] > s.p.val()[best]) best = i;
    mask[best] = 1;
  }
  return mask;
}

Value rationalizer_loss(const Value& task_loss, const Value& z,
                        const RationalizerWeights& weights) {
  weights.validate();
  Value loss = ad::add(task_loss, ad::scale(ad::mean(z), weights.sparsity));
  int L = z.val().size();
  if (L > 1) {
    Value diff = ad::sub(ad::slice(z, 1, L), ad::slice(z, 0, L - 1));
    loss = ad::add(loss, ad::scale(ad::mean(ad::abs_op(diff)), weights.coherence));
  }
  return loss;
}

std::vector<RationalizerEpoch> train_rationalizer(Rationalizer& model,
                                                  const corpus::TaskDataset& task,
                                                  const RationalizerTrainConfig& config) {
  if (task.train.empty()) throw std::invalid_argument("train_rationalizer: empty train split");
  config.weights.validate();
  config.schedule.validate();
  for (const auto& ex : task.train)
    if (!ex.label)
      throw std::invalid_argument("train_rationalizer: unlabeled example in train split");

  Batcher batcher(static_cast<int>(task.train.size()), config.batch_size,
                  named_stream(config.seed, "shuffle:rationalizer"));
  RngStream dropout_rng = named_stream(config.seed, "dropout:rationalizer");
  RngStream gumbel_rng = named_stream(config.seed, "gumbel");
  DropoutCtx train_ctx{true, model.dims().dropout, &dropout_rng};

  AdamState adam({config.schedule.initial_lr});
  PlateauScheduler scheduler(config.schedule, config.schedule.initial_lr);

  std::vector<RationalizerEpoch> trace;
  for (int epoch = 0; epoch < config.schedule.max_epochs; ++epoch) {
    RationalizerEpoch et;
    et.epoch = epoch;
    RationalizerWeights weights = config.weights;
    if (epoch < config.sparsity_warmup_epochs) {
      weights.sparsity = 0.0;
      weights.coherence = 0.0;
    }
    int steps = batcher.batches_per_epoch();
    for (int step = 0; step < steps; ++step) {
      std::vector<Value> losses;
      for (int idx : batcher.next()) {
        const corpus::Example& ex = task.train[idx];
        auto sample = model.generator_forward(ex.tokens, SampleMode::kRelaxed,
                                              config.weights.tau, train_ctx, &gumbel_rng);
        Value out = model.classify(ex.tokens, sample.z, train_ctx);
        losses.push_back(rationalizer_loss(model.task_loss(out, *ex.label), sample.z,
                                           weights));
      }
      Value total = ad::mean_vec(losses);
      et.train_loss += total.item();
      model.params().zero_grad();
      ad::backward(total);
      adam.step(model.params());
    }
    et.train_loss /= steps;

    int dev_count = 0;
    double dev_loss = 0, dev_z = 0;
    for (const auto& ex : task.dev) {
      if (!ex.label) continue;
      auto sample = model.generator_forward(ex.tokens, SampleMode::kHard, 0.0,
                                            DropoutCtx::inference(), nullptr);
      Value out = model.classify(ex.tokens, sample.z, DropoutCtx::inference());
      dev_loss += model.task_loss(out, *ex.label).item();
      dev_z += sample.z.val().flat().mean();
      ++dev_count;
    }
    if (dev_count > 0) {
      et.dev_task_loss = dev_loss / dev_count;
      et.dev_mean_z = dev_z / dev_count;
      adam.set_learning_rate(scheduler.update(-et.dev_task_loss));
    }
    et.lr = adam.learning_rate();
    trace.push_back(et);
    if (dev_count > 0 && scheduler.exhausted()) break;
  }
  return trace;
}

std::vector<corpus::Example> extract_rationales(const Rationalizer& model,
                                                const std::vector<corpus::Example>& examples) {
  std::vector<corpus::Example> out = examples;
  for (auto& ex : out) ex.rationale = model.extract_mask(ex.tokens);
  return out;
}

}  // namespace r2a::rationalizer
