#include "r2a/r2a_model.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace r2a::model {

using ad::Value;
using corpus::TaskKind;
using nets::DropoutCtx;
using nlohmann::json;

// --- critic -----------------------------------------------------------------

Critic Critic::create(ParamMap& params, int in_dim, int hidden, RngStream& rng) {
  Critic c;
  c.in_dim = in_dim;
  c.hidden = hidden;
  c.w1 = params.add("critic.w1", nets::init_uniform({hidden, in_dim}, in_dim, rng));
  // spread the ReLU kinks over the summary range; zero-init the output layer
  // so the first ascent step follows the objective before the penalty locks
  // a slope sign
  Tensor b1({hidden});
  for (int i = 0; i < hidden; ++i) b1[i] = rng.uniform(-0.5, 0.5);
  c.b1 = params.add("critic.b1", std::move(b1));
  c.w2 = params.add("critic.w2", Tensor({hidden}));
  c.b2 = params.add("critic.b2", Tensor::scalar(0.0));
  return c;
}

Value Critic::score_one(const Value& x) const {
  Value hid = ad::relu(ad::affine(x, w1, b1));
  return ad::add(ad::dot(w2, hid), b2);
}

Value Critic::score_rows(const Value& xs) const {
  Value hid = ad::relu(ad::affine(xs, w1, b1));  // [N,Hc]
  return ad::add_scalar(ad::matmul(hid, w2), b2);
}

Value Critic::gradient_penalty(const Tensor& interpolates) const {
  int K = interpolates.rows();
  std::vector<Value> terms;
  terms.reserve(K);
  for (int k = 0; k < K; ++k) {
    // pre-activation sign pattern, constant under the a.e. derivative
    Tensor x({in_dim});
    for (int j = 0; j < in_dim; ++j) x[j] = interpolates.at(k, j);
    Eigen::VectorXd pre = w1.val().mat() * x.flat() + b1.val().flat();
    Tensor mask({hidden});
    for (int j = 0; j < hidden; ++j) mask[j] = pre[j] > 0.0 ? 1.0 : 0.0;

    Value wm = ad::mul(w2, Value::constant(mask));
    Value g = ad::matmul_tn(w1, wm);  // grad_x f = W1^T (w2 .* step(pre))
    if (g.val().flat().squaredNorm() == 0.0) {
      terms.push_back(Value::scalar(1.0));  // (0-1)^2, no parameter gradient a.e.
    } else {
      terms.push_back(ad::square(ad::add_const(ad::norm2(g), -1.0)));
    }
  }
  return ad::mean_vec(terms);
}

// --- model ------------------------------------------------------------------

R2AModel::R2AModel(corpus::Vocab vocab, corpus::EmbeddingMatrix emb, ModelDims dims,
                   const std::vector<std::pair<std::string, TaskKind>>& tasks, uint64_t seed,
                   uint64_t bin_seed)
    : vocab_(std::move(vocab)), dims_(dims), bin_seed_(bin_seed) {
  if (emb.weights.rows() != vocab_.size() || emb.dim != dims_.embed_dim)
    throw std::invalid_argument("R2AModel: embedding size does not match vocab/dims");
  if (tasks.empty()) throw std::invalid_argument("R2AModel: no source tasks");
  embedding_ = Value::constant(std::move(emb.weights));

  int H = dims_.encoder_hidden;
  {
    RngStream rng = named_stream(seed, "init:enc");
    enc_ = nets::BiLstm::create(params_, "enc", dims_.embed_dim, H, rng);
  }
  for (const auto& [id, kind] : tasks) {
    SourceTask t;
    t.task_id = id;
    t.kind = kind;
    RngStream rng_att = named_stream(seed, "init:att:" + id);
    t.att = nets::AttentionHead::create(params_, "att:" + id, 2 * H, dims_.attention_dim,
                                        rng_att);
    RngStream rng_pred = named_stream(seed, "init:pred:" + id);
    t.pred = nets::Predictor::create(params_, "pred:" + id, 2 * H, dims_.predictor_hidden,
                                     kind == TaskKind::kClassification ? 2 : 1, rng_pred);
    t.pred.w2.node()->value.fill(0.0);  // uniform predictions before training
    tasks_.push_back(std::move(t));
  }
  {
    // identity start: h_inv == h until the alignment pressure moves it
    Tensor w({2 * H, 2 * H});
    for (int i = 0; i < 2 * H; ++i) w.at(i, i) = 1.0;
    w_inv_ = params_.add("inv.w", std::move(w));
    b_inv_ = params_.add("inv.b", Tensor({2 * H}));
  }
  {
    // zero-init bin heads: the untrained LM loss is exactly ln(B)
    lm_fwd_w_ = params_.add("lm.fwd.w", Tensor({dims_.bin_count, H}));
    lm_fwd_b_ = params_.add("lm.fwd.b", Tensor({dims_.bin_count}));
    lm_bwd_w_ = params_.add("lm.bwd.w", Tensor({dims_.bin_count, H}));
    lm_bwd_b_ = params_.add("lm.bwd.b", Tensor({dims_.bin_count}));
  }
  {
    RngStream rng = named_stream(seed, "init:enc_r2a");
    enc_r2a_ = nets::BiLstm::create(params_, "enc_r2a", 2 * H + 2, dims_.r2a_hidden, rng);
  }
  {
    RngStream rng = named_stream(seed, "init:att_r2a");
    att_r2a_ = nets::AttentionHead::create(params_, "att_r2a", 2 * dims_.r2a_hidden,
                                           dims_.attention_dim, rng);
  }
  {
    RngStream rng = named_stream(seed, "init:critic");
    critic_ = Critic::create(critic_params_, 4 * H, dims_.critic_hidden, rng);
  }
  bins_ = corpus::assign_bins(vocab_, dims_.bin_count, bin_seed);
}

int R2AModel::task_index(const std::string& task_id) const {
  for (size_t i = 0; i < tasks_.size(); ++i)
    if (tasks_[i].task_id == task_id) return static_cast<int>(i);
  throw std::invalid_argument("R2AModel: unknown task id '" + task_id + "'");
}

R2AModel::Encoded R2AModel::encode(const std::vector<int>& tokens,
                                   const DropoutCtx& ctx) const {
  Encoded e;
  e.emb = nets::apply_dropout(ad::gather_rows(embedding_, tokens), ctx);
  e.enc = enc_.forward(e.emb);
  return e;
}

Value R2AModel::invariant(const Encoded& e) const { return ad::affine(e.enc.h, w_inv_, b_inv_); }

Value R2AModel::summary(const Value& h_inv) const {
  int L = h_inv.val().rows();
  return ad::concat(ad::row(h_inv, 0), ad::row(h_inv, L - 1));
}

Value R2AModel::task_loss(const Encoded& e, int task_index, double label,
                          const DropoutCtx& ctx, Value* alpha_out) const {
  const SourceTask& t = tasks_.at(task_index);
  Value alpha = t.att.forward(e.enc.h);
  if (alpha_out) *alpha_out = alpha;
  Value context = ad::vecmat(alpha, e.enc.h);
  Value out = t.pred.forward(context, ctx);
  if (t.kind == TaskKind::kClassification)
    return ad::cross_entropy(out, static_cast<int>(label));
  return ad::mse(out, label);
}

Value R2AModel::lm_loss(const Encoded& e, const std::vector<int>& tokens) const {
  int L = static_cast<int>(tokens.size());
  std::vector<int> targets(L);
  for (int i = 0; i < L; ++i) targets[i] = bins_.bin(tokens[i]);

  Value zero = Value::constant(Tensor({dims_.encoder_hidden}));
  std::vector<Value> fwd_in(L), bwd_in(L);
  for (int i = 0; i < L; ++i) {
    fwd_in[i] = i == 0 ? zero : e.enc.fwd[i - 1];
    bwd_in[i] = i == L - 1 ? zero : e.enc.bwd[i + 1];
  }
  Value ce_f = ad::cross_entropy_rows(ad::affine(ad::stack_rows(fwd_in), lm_fwd_w_, lm_fwd_b_),
                                      targets);
  Value ce_b = ad::cross_entropy_rows(ad::affine(ad::stack_rows(bwd_in), lm_bwd_w_, lm_bwd_b_),
                                      targets);
  return ad::scale(ad::add(ce_f, ce_b), 0.5);
}

Value R2AModel::generate_attention(const Value& h_inv, const std::vector<uint8_t>& rationale,
                                   const corpus::RationaleFreqTable& freq,
                                   const std::vector<int>& tokens) const {
  int L = h_inv.val().rows();
  if (static_cast<int>(rationale.size()) != L || static_cast<int>(tokens.size()) != L)
    throw std::invalid_argument("generate_attention: rationale/sequence length mismatch");
  Tensor aug({L, 2});
  for (int i = 0; i < L; ++i) {
    aug.at(i, 0) = rationale[i] ? 1.0 : 0.0;
    aug.at(i, 1) = freq.freq(tokens[i]);
  }
  Value u = enc_r2a_.forward(ad::concat_cols(h_inv, Value::constant(std::move(aug)))).h;
  return att_r2a_.forward(u);
}

std::vector<double> R2AModel::infer_attention(const corpus::Example& example,
                                              const corpus::RationaleFreqTable& freq) const {
  if (!example.has_rationale())
    throw std::invalid_argument("infer_attention: example has no rationale");
  Encoded e = encode(example.tokens, DropoutCtx::inference());
  Value alpha = generate_attention(invariant(e), example.rationale, freq, example.tokens);
  return std::vector<double>(alpha.val().data(), alpha.val().data() + alpha.val().size());
}

Tensor R2AModel::summary_of(const std::vector<int>& tokens) const {
  Encoded e = encode(tokens, DropoutCtx::inference());
  return summary(invariant(e)).val();
}

// --- critic update ----------------------------------------------------------

namespace {

Tensor stack_tensors(const std::vector<Tensor>& rows) {
  int n = static_cast<int>(rows.size());
  int d = rows[0].size();
  Tensor out({n, d});
  for (int i = 0; i < n; ++i) {
    if (rows[i].size() != d) throw std::invalid_argument("summaries differ in width");
    std::copy(rows[i].data(), rows[i].data() + d, out.data() + i * d);
  }
  return out;
}

}  // namespace

double critic_update(const std::vector<Tensor>& source_summaries,
                     const std::vector<Tensor>& target_summaries, Critic& critic,
                     ParamMap& critic_params, AdamState& critic_adam, double gp_weight,
                     int iters, RngStream& rng) {
  if (source_summaries.empty() || target_summaries.empty())
    throw std::invalid_argument("critic_update: empty batch");
  Tensor src = stack_tensors(source_summaries);
  Tensor tgt = stack_tensors(target_summaries);
  int ns = src.rows(), nt = tgt.rows(), w = src.cols();

  for (int it = 0; it < iters; ++it) {
    int K = std::max(ns, nt);
    Tensor interp({K, w});
    for (int k = 0; k < K; ++k) {
      int i = rng.uniform_int(ns);
      int j = rng.uniform_int(nt);
      double eps = rng.uniform();
      for (int c = 0; c < w; ++c)
        interp.at(k, c) = eps * src.at(i, c) + (1.0 - eps) * tgt.at(j, c);
    }
    Value fs = ad::mean(critic.score_rows(Value::constant(src)));
    Value ft = ad::mean(critic.score_rows(Value::constant(tgt)));
    Value objective = ad::sub(ad::sub(fs, ft),
                              ad::scale(critic.gradient_penalty(interp), gp_weight));
    critic_params.zero_grad();
    ad::backward(ad::neg(objective));  // ascent
    critic_adam.step(critic_params);
  }

  Value fs = ad::mean(critic.score_rows(Value::constant(src)));
  Value ft = ad::mean(critic.score_rows(Value::constant(tgt)));
  return fs.item() - ft.item();
}

// --- joint training ---------------------------------------------------------

namespace {

Value rationale_vector(const std::vector<uint8_t>& rationale) {
  Tensor r({static_cast<int>(rationale.size())});
  bool any = false;
  for (size_t i = 0; i < rationale.size(); ++i) {
    r[static_cast<int>(i)] = rationale[i] ? 1.0 : 0.0;
    any = any || rationale[i];
  }
  if (!any) throw std::invalid_argument("consistency term: all-zero rationale");
  return Value::constant(std::move(r));
}

}  // namespace

std::vector<EpochTrace> r2a_train(R2AModel& model,
                                  const std::vector<corpus::TaskDataset>& sources,
                                  const std::vector<corpus::Example>& target_unlabeled,
                                  const R2ATrainConfig& config) {
  if (sources.empty()) throw std::invalid_argument("r2a_train: no source tasks");
  config.weights.validate();
  config.schedule.validate();
  const LossWeights& w = config.weights;
  bool aspect = config.mode == TransferMode::kAspectTransfer;
  if (aspect && w.wd != 0.0)
    throw std::invalid_argument("r2a_train: aspect transfer requires lambda_wd = 0");
  bool use_att = w.att > 0.0;
  bool use_cons = aspect && w.cons > 0.0;
  bool use_lm = w.lm > 0.0;
  bool use_wd = !aspect && w.wd > 0.0;
  bool need_target = use_wd || (use_lm && !target_unlabeled.empty());
  if (use_wd && target_unlabeled.empty())
    throw std::invalid_argument("r2a_train: Wasserstein term needs unlabeled target data");

  std::vector<int> task_index(sources.size());
  std::vector<corpus::RationaleFreqTable> freqs(sources.size());
  for (size_t t = 0; t < sources.size(); ++t) {
    task_index[t] = model.task_index(sources[t].task_id);
    if (sources[t].train.empty())
      throw std::invalid_argument("r2a_train: task '" + sources[t].task_id +
                                  "' has no train split");
    if (use_att || use_cons) {
      for (const auto& ex : sources[t].train)
        if (!ex.has_rationale())
          throw std::invalid_argument("r2a_train: source example without rationale in task '" +
                                      sources[t].task_id + "'");
      freqs[t] = corpus::rationale_frequency(sources[t].train, model.vocab().size());
    }
  }

  std::vector<Batcher> task_batchers;
  int steps_per_epoch = 0;
  for (const auto& task : sources) {
    task_batchers.emplace_back(static_cast<int>(task.train.size()), config.batch_size,
                               named_stream(config.seed, "shuffle:" + task.task_id));
    steps_per_epoch = std::max(steps_per_epoch, task_batchers.back().batches_per_epoch());
  }
  std::optional<Batcher> target_batcher;
  if (need_target)
    target_batcher.emplace(static_cast<int>(target_unlabeled.size()), config.batch_size,
                           named_stream(config.seed, "shuffle:target"));

  RngStream dropout_rng = named_stream(config.seed, "dropout");
  DropoutCtx train_ctx{true, model.dims().dropout, &dropout_rng};
  RngStream critic_rng = named_stream(config.seed, "critic");

  AdamState adam({config.schedule.initial_lr});
  AdamState critic_adam({w.critic_lr});
  PlateauScheduler scheduler(config.schedule, config.schedule.initial_lr);

  std::vector<EpochTrace> trace;
  for (int epoch = 0; epoch < config.schedule.max_epochs; ++epoch) {
    EpochTrace et;
    et.epoch = epoch;
    double wd_sum = 0, cons_sum = 0;
    for (int step = 0; step < steps_per_epoch; ++step) {
      std::vector<std::vector<int>> batches;
      for (auto& b : task_batchers) batches.push_back(b.next());
      std::vector<int> target_batch;
      if (target_batcher) target_batch = target_batcher->next();

      // critic ascent phase on frozen encoder summaries
      if (use_wd) {
        std::vector<Tensor> src_sum, tgt_sum;
        for (size_t t = 0; t < sources.size(); ++t)
          for (int idx : batches[t]) src_sum.push_back(model.summary_of(sources[t].train[idx].tokens));
        for (int idx : target_batch)
          tgt_sum.push_back(model.summary_of(target_unlabeled[idx].tokens));
        critic_update(src_sum, tgt_sum, model.critic(), model.critic_params(), critic_adam,
                      w.gp_weight, w.critic_iters, critic_rng);
      }

      std::vector<Value> lbl_losses, att_losses, lm_losses, cons_losses;
      std::vector<Value> src_summaries, tgt_summaries;
      for (size_t t = 0; t < sources.size(); ++t) {
        for (int idx : batches[t]) {
          const corpus::Example& ex = sources[t].train[idx];
          if (!ex.label)
            throw std::invalid_argument("r2a_train: unlabeled example in source train split");
          auto enc = model.encode(ex.tokens, train_ctx);
          Value alpha;
          lbl_losses.push_back(model.task_loss(enc, task_index[t], *ex.label, train_ctx, &alpha));
          if (use_att || use_cons || use_wd) {
            Value h_inv = model.invariant(enc);
            if (use_att || use_cons) {
              Value alpha_hat =
                  model.generate_attention(h_inv, ex.rationale, freqs[t], ex.tokens);
              if (use_att)
                att_losses.push_back(
                    ad::soft_margin_cosine_distance(ad::detach(alpha), alpha_hat));
              if (use_cons)
                cons_losses.push_back(ad::soft_margin_cosine_distance(
                    alpha_hat, rationale_vector(ex.rationale)));
            }
            if (use_wd) src_summaries.push_back(model.summary(h_inv));
          }
          if (use_lm) lm_losses.push_back(model.lm_loss(enc, ex.tokens));
        }
      }
      for (int idx : target_batch) {
        const corpus::Example& ex = target_unlabeled[idx];
        auto enc = model.encode(ex.tokens, train_ctx);
        if (use_lm) lm_losses.push_back(model.lm_loss(enc, ex.tokens));
        if (use_wd) tgt_summaries.push_back(model.summary(model.invariant(enc)));
      }

      Value total = ad::mean_vec(lbl_losses);
      et.lbl += total.item();
      if (use_att) {
        et.has_att = true;
        Value att_loss = ad::mean_vec(att_losses);
        et.att += att_loss.item();
        total = ad::add(total, ad::scale(att_loss, w.att));
      }
      if (use_lm) {
        et.has_lm = true;
        Value lm = ad::mean_vec(lm_losses);
        et.lm += lm.item();
        total = ad::add(total, ad::scale(lm, w.lm));
      }
      if (use_wd) {
        // descend the dual estimate through the encoder, critic frozen
        Critic frozen{model.critic().in_dim, model.critic().hidden,
                      Value::constant(model.critic().w1.val()),
                      Value::constant(model.critic().b1.val()),
                      Value::constant(model.critic().w2.val()),
                      Value::constant(model.critic().b2.val())};
        Value fs = ad::mean(frozen.score_rows(ad::stack_rows(src_summaries)));
        Value ft = ad::mean(frozen.score_rows(ad::stack_rows(tgt_summaries)));
        Value wd_term = ad::sub(fs, ft);
        et.has_wd = true;
        wd_sum += wd_term.item();
        total = ad::add(total, ad::scale(wd_term, w.wd));
      }
      if (use_cons) {
        Value cons = ad::mean_vec(cons_losses);
        et.has_cons = true;
        cons_sum += cons.item();
        total = ad::add(total, ad::scale(cons, w.cons));
      }
      et.total += total.item();

      model.params().zero_grad();
      ad::backward(total);
      adam.step(model.params());
    }

    et.lbl /= steps_per_epoch;
    et.att /= steps_per_epoch;
    et.lm /= steps_per_epoch;
    if (use_wd) et.wd = wd_sum / steps_per_epoch;
    if (use_cons) et.cons = cons_sum / steps_per_epoch;
    et.total /= steps_per_epoch;

    // dev label loss drives the plateau schedule (lower is better)
    int dev_count = 0;
    double dev_sum = 0;
    for (size_t t = 0; t < sources.size(); ++t) {
      for (const auto& ex : sources[t].dev) {
        if (!ex.label) continue;
        auto enc = model.encode(ex.tokens, DropoutCtx::inference());
        dev_sum += model
                       .task_loss(enc, task_index[t], *ex.label, DropoutCtx::inference(), nullptr)
                       .item();
        ++dev_count;
      }
    }
    if (dev_count > 0) {
      et.dev_lbl = dev_sum / dev_count;
      adam.set_learning_rate(scheduler.update(-et.dev_lbl));
    }
    et.lr = adam.learning_rate();
    trace.push_back(et);
    if (dev_count > 0 && scheduler.exhausted()) break;
  }
  return trace;
}

// --- checkpoint -------------------------------------------------------------

namespace {

std::string hash_hex(uint64_t h) {
  std::ostringstream ss;
  ss << std::hex << h;
  return ss.str();
}

json params_to_json(const ParamMap& params) {
  json out = json::object();
  for (const auto& [name, node] : params.items()) {
    json entry;
    entry["shape"] = node->value.shape();
    entry["data"] = node->value.vec_data();
    out[name] = std::move(entry);
  }
  return out;
}

void params_from_json(const json& j, ParamMap& params) {
  for (auto& [name, node] : params.items()) {
    if (!j.contains(name))
      throw std::runtime_error("checkpoint: missing parameter '" + name + "'");
    const json& entry = j.at(name);
    std::vector<int> shape = entry.at("shape").get<std::vector<int>>();
    if (shape != node->value.shape())
      throw std::runtime_error("checkpoint: shape mismatch for parameter '" + name + "'");
    std::vector<double> data = entry.at("data").get<std::vector<double>>();
    node->value = Tensor(shape, std::move(data));
  }
}

}  // namespace

void save_checkpoint(const std::string& path, const R2AModel& model, const LossWeights& weights,
                     TransferMode mode) {
  json j;
  j["format"] = "r2a-checkpoint";
  j["version"] = 1;
  j["mode"] = mode == TransferMode::kAspectTransfer ? "aspect-transfer" : "domain-transfer";
  j["vocab_hash"] = hash_hex(model.vocab().hash());
  j["bin_seed"] = model.bin_seed();
  const ModelDims& d = model.dims();
  j["dims"] = {{"embed_dim", d.embed_dim},
               {"encoder_hidden", d.encoder_hidden},
               {"r2a_hidden", d.r2a_hidden},
               {"attention_dim", d.attention_dim},
               {"predictor_hidden", d.predictor_hidden},
               {"critic_hidden", d.critic_hidden},
               {"bin_count", d.bin_count},
               {"dropout", d.dropout}};
  json tasks = json::array();
  for (const auto& t : model.tasks())
    tasks.push_back({{"id", t.task_id},
                     {"kind", t.kind == TaskKind::kClassification ? "classification"
                                                                  : "regression"}});
  j["tasks"] = std::move(tasks);
  j["loss_weights"] = {{"att", weights.att},         {"lm", weights.lm},
                       {"wd", weights.wd},           {"att_target", weights.att_target},
                       {"cons", weights.cons},       {"gp_weight", weights.gp_weight},
                       {"critic_iters", weights.critic_iters},
                       {"critic_lr", weights.critic_lr}};
  j["embedding"] = {{"dim", d.embed_dim}, {"data", model.embedding().val().vec_data()}};
  j["params"] = params_to_json(model.params());
  j["critic_params"] = params_to_json(model.critic_params());

  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << j.dump() << '\n';
}

Checkpoint load_checkpoint(const std::string& path, const corpus::Vocab& expected_vocab) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("load_checkpoint: invalid JSON: " + std::string(e.what()));
  }
  if (j.value("format", "") != "r2a-checkpoint")
    throw std::runtime_error("load_checkpoint: not a checkpoint file");
  if (j.at("vocab_hash").get<std::string>() != hash_hex(expected_vocab.hash()))
    throw std::runtime_error("load_checkpoint: vocabulary hash mismatch");

  const json& jd = j.at("dims");
  ModelDims dims;
  dims.embed_dim = jd.at("embed_dim").get<int>();
  dims.encoder_hidden = jd.at("encoder_hidden").get<int>();
  dims.r2a_hidden = jd.at("r2a_hidden").get<int>();
  dims.attention_dim = jd.at("attention_dim").get<int>();
  dims.predictor_hidden = jd.at("predictor_hidden").get<int>();
  dims.critic_hidden = jd.at("critic_hidden").get<int>();
  dims.bin_count = jd.at("bin_count").get<int>();
  dims.dropout = jd.at("dropout").get<double>();

  std::vector<std::pair<std::string, TaskKind>> tasks;
  for (const auto& t : j.at("tasks"))
    tasks.emplace_back(t.at("id").get<std::string>(),
                       t.at("kind").get<std::string>() == "regression"
                           ? TaskKind::kRegression
                           : TaskKind::kClassification);

  corpus::EmbeddingMatrix emb;
  emb.dim = dims.embed_dim;
  emb.weights = Tensor({expected_vocab.size(), dims.embed_dim},
                       j.at("embedding").at("data").get<std::vector<double>>());

  Checkpoint ckpt;
  ckpt.model = std::make_unique<R2AModel>(expected_vocab, std::move(emb), dims, tasks,
                                          /*seed=*/0, j.at("bin_seed").get<uint64_t>());
  params_from_json(j.at("params"), ckpt.model->params());
  params_from_json(j.at("critic_params"), ckpt.model->critic_params());

  const json& jw = j.at("loss_weights");
  ckpt.weights.att = jw.at("att").get<double>();
  ckpt.weights.lm = jw.at("lm").get<double>();
  ckpt.weights.wd = jw.at("wd").get<double>();
  ckpt.weights.att_target = jw.at("att_target").get<double>();
  ckpt.weights.cons = jw.at("cons").get<double>();
  ckpt.weights.gp_weight = jw.at("gp_weight").get<double>();
  ckpt.weights.critic_iters = jw.at("critic_iters").get<int>();
  ckpt.weights.critic_lr = jw.at("critic_lr").get<double>();
  ckpt.mode = j.value("mode", "domain-transfer") == "aspect-transfer"
                  ? TransferMode::kAspectTransfer
                  : TransferMode::kDomainTransfer;
  return ckpt;
}

}  // namespace r2a::model
