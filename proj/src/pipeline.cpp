#include "r2a/pipeline.hpp"

#include "r2a/trainer.hpp"

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace r2a::cli {

namespace fs = std::filesystem;
using corpus::Example;
using corpus::TaskDataset;
using corpus::TaskKind;
using corpus::Vocab;
using nlohmann::json;

const std::vector<std::string> kCommands = {
    "synth",        "rationalize", "train-r2a",    "gen-attention", "train-oracle",
    "train-target", "eval",        "export-reprs", "learning-curve"};

namespace {

// Removes declared outputs unless the command completed.
class OutputGuard {
 public:
  ~OutputGuard() {
    if (committed_) return;
    for (const auto& p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
  std::string track(const std::string& path) {
    paths_.push_back(path);
    return path;
  }
  void commit() { committed_ = true; }

 private:
  std::vector<std::string> paths_;
  bool committed_ = false;
};

void ensure_parent_dir(const std::string& path) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void require_file(const std::string& path, const std::string& hint) {
  if (!fs::exists(path))
    throw ConfigError("missing input file " + path + " (" + hint + ")");
}

Vocab load_vocab(const RunConfig& config) {
  require_file(config.vocab_path(), "run `synth` first or set data.vocab");
  return Vocab::load(config.vocab_path());
}

corpus::EmbeddingMatrix load_run_embeddings(const RunConfig& config, const Vocab& vocab) {
  std::string path = config.get("data.embeddings", "");
  if (!path.empty()) {
    require_file(path, "data.embeddings");
    return corpus::load_embeddings(path, vocab, config.seed());
  }
  return corpus::random_embeddings(vocab, config.dims().embed_dim, config.seed());
}

std::vector<Example> load_split(const std::string& path, Vocab& vocab, TaskKind kind,
                                const std::string& hint) {
  require_file(path, hint);
  return corpus::load_examples(path, vocab, /*grow_vocab=*/false, kind);
}

TaskDataset load_target(const RunConfig& config, Vocab& vocab, bool need_unlabeled) {
  TaskDataset target;
  target.task_id = config.target_task_id();
  target.kind = TaskKind::kClassification;
  target.train = load_split(config.target_split_path("train"), vocab, target.kind,
                            "target train split");
  target.dev =
      load_split(config.target_split_path("dev"), vocab, target.kind, "target dev split");
  if (fs::exists(config.target_split_path("test")))
    target.test = corpus::load_examples(config.target_split_path("test"), vocab, false,
                                        target.kind);
  if (need_unlabeled)
    target.unlabeled = load_split(config.target_split_path("unlabeled"), vocab, target.kind,
                                  "target unlabeled split");
  else if (fs::exists(config.target_split_path("unlabeled")))
    target.unlabeled = corpus::load_examples(config.target_split_path("unlabeled"), vocab,
                                             false, target.kind);
  return target;
}

// first-n subset used by low-resource runs and the learning curve
void truncate_train(TaskDataset& target, int n) {
  if (n > 0 && n < static_cast<int>(target.train.size())) target.train.resize(n);
}

model::Checkpoint load_run_checkpoint(const RunConfig& config, const Vocab& vocab) {
  require_file(config.checkpoint_path(), "run `train-r2a` first");
  return model::load_checkpoint(config.checkpoint_path(), vocab);
}

void write_r2a_trace(const std::string& path, const std::vector<model::EpochTrace>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "epoch,lbl,att,lm,wd,cons,total,dev_lbl,lr\n";
  char buf[64];
  auto cell = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& et : trace) {
    out << et.epoch << ',' << cell(et.lbl) << ',' << (et.has_att ? cell(et.att) : "") << ','
        << (et.has_lm ? cell(et.lm) : "") << ',' << (et.has_wd ? cell(et.wd) : "") << ','
        << (et.has_cons ? cell(et.cons) : "") << ',' << cell(et.total) << ','
        << cell(et.dev_lbl) << ',' << cell(et.lr) << '\n';
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// the supervision attention for train-target / learning-curve
std::vector<std::vector<double>> load_supervision(const RunConfig& config,
                                                  trainer::Supervision mode, size_t n_train) {
  std::vector<std::vector<double>> att;
  if (mode == trainer::Supervision::kGenerated) {
    require_file(config.generated_attention_path(), "run `gen-attention` first");
    att = read_attention_file(config.generated_attention_path());
  } else if (mode == trainer::Supervision::kOracle) {
    require_file(config.oracle_attention_path(), "run `train-oracle` first");
    att = read_attention_file(config.oracle_attention_path());
  } else {
    return att;
  }
  if (att.size() < n_train)
    throw std::runtime_error("attention file holds " + std::to_string(att.size()) +
                             " rows, need " + std::to_string(n_train));
  att.resize(n_train);
  return att;
}

void save_target_model(const std::string& path, trainer::AttentionClassifierModel& model,
                       const Vocab& vocab, const model::ModelDims& dims) {
  json j;
  j["format"] = "r2a-target-model";
  j["vocab_hash"] = [&] {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%llx", static_cast<unsigned long long>(vocab.hash()));
    return std::string(buf);
  }();
  j["task_id"] = model.task_id();
  j["kind"] = model.kind() == TaskKind::kClassification ? "classification" : "regression";
  j["dims"] = {{"embed_dim", dims.embed_dim},
               {"encoder_hidden", dims.encoder_hidden},
               {"attention_dim", dims.attention_dim},
               {"predictor_hidden", dims.predictor_hidden},
               {"dropout", dims.dropout}};
  json params = json::object();
  for (const auto& [name, node] : model.params().items())
    params[name] = {{"shape", node->value.shape()}, {"data", node->value.vec_data()}};
  j["params"] = std::move(params);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump() << '\n';
}

trainer::AttentionClassifierModel load_target_model(const std::string& path,
                                                    const Vocab& vocab,
                                                    const Tensor& embedding) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  if (j.value("format", "") != "r2a-target-model")
    throw std::runtime_error(path + " is not a target model file");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%llx", static_cast<unsigned long long>(vocab.hash()));
  if (j.at("vocab_hash").get<std::string>() != buf)
    throw std::runtime_error("target model: vocabulary hash mismatch");
  const json& jd = j.at("dims");
  trainer::AttentionClassifierModel model(
      embedding, jd.at("embed_dim").get<int>(), jd.at("encoder_hidden").get<int>(),
      jd.at("attention_dim").get<int>(), jd.at("predictor_hidden").get<int>(),
      jd.at("dropout").get<double>(), j.at("task_id").get<std::string>(),
      j.at("kind").get<std::string>() == "regression" ? TaskKind::kRegression
                                                      : TaskKind::kClassification,
      /*seed=*/0);
  for (auto& [name, node] : model.params().items()) {
    const json& entry = j.at("params").at(name);
    std::vector<int> shape = entry.at("shape").get<std::vector<int>>();
    if (shape != node->value.shape())
      throw std::runtime_error("target model: shape mismatch for " + name);
    node->value = Tensor(shape, entry.at("data").get<std::vector<double>>());
  }
  return model;
}

}  // namespace

void write_attention_file(const std::string& path,
                          const std::vector<std::vector<double>>& attention) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (size_t i = 0; i < attention.size(); ++i) {
    json j;
    j["index"] = i;
    j["attention"] = attention[i];
    out << j.dump() << '\n';
  }
}

std::vector<std::vector<double>> read_attention_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    size_t index = j.at("index").get<size_t>();
    if (index != rows.size())
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": rows out of order");
    rows.push_back(j.at("attention").get<std::vector<double>>());
  }
  return rows;
}

void cmd_synth(const RunConfig& config) {
  corpus::SyntheticSpec spec = config.synth_spec();
  corpus::SyntheticSuite suite = corpus::make_synthetic_suite(spec);
  std::string dir = config.output_dir() + "/synth";
  fs::create_directories(dir);

  OutputGuard guard;
  suite.vocab.save(guard.track(dir + "/vocab.txt"));
  for (const auto& task : suite.sources) {
    corpus::save_examples(guard.track(dir + "/" + task.task_id + "_train.jsonl"), task.train,
                          suite.vocab);
    corpus::save_examples(guard.track(dir + "/" + task.task_id + "_dev.jsonl"), task.dev,
                          suite.vocab);
  }
  corpus::save_examples(guard.track(dir + "/target_train.jsonl"), suite.target.train,
                        suite.vocab);
  corpus::save_examples(guard.track(dir + "/target_dev.jsonl"), suite.target.dev, suite.vocab);
  corpus::save_examples(guard.track(dir + "/target_test.jsonl"), suite.target.test,
                        suite.vocab);
  corpus::save_examples(guard.track(dir + "/target_unlabeled.jsonl"), suite.target.unlabeled,
                        suite.vocab);
  corpus::save_examples(guard.track(dir + "/target_oracle_pool.jsonl"),
                        suite.target_oracle_pool, suite.vocab);
  write_attention_file(guard.track(dir + "/target_train_oracle_attention.jsonl"),
                       suite.target_train_oracle);
  guard.commit();
}

void cmd_rationalize(const RunConfig& config) {
  Vocab vocab = load_vocab(config);
  std::string dir = config.output_dir() + "/rationalized";
  fs::create_directories(dir);

  OutputGuard guard;
  for (const std::string& task_id : config.source_task_ids()) {
    TaskDataset task;
    task.task_id = task_id;
    task.kind = TaskKind::kClassification;
    task.train =
        load_split(config.source_train_path(task_id), vocab, task.kind, "source train split");
    task.dev = load_split(config.source_dev_path(task_id), vocab, task.kind,
                          "source dev split");

    rationalizer::Rationalizer model(vocab, load_run_embeddings(config, vocab),
                                     config.rationalizer_dims(), task.kind,
                                     config.seed() ^ fnv1a64("rationalizer:" + task_id));
    rationalizer::RationalizerTrainConfig rc;
    rc.weights = config.rationalizer_weights();
    rc.schedule = config.schedule("rationalizer");
    rc.batch_size = config.batch_size("rationalizer");
    rc.seed = config.seed() ^ fnv1a64("rationalizer:" + task_id);
    auto trace = rationalizer::train_rationalizer(model, task, rc);

    corpus::save_examples(guard.track(dir + "/" + task_id + "_train.jsonl"),
                          rationalizer::extract_rationales(model, task.train), vocab);
    corpus::save_examples(guard.track(dir + "/" + task_id + "_dev.jsonl"),
                          rationalizer::extract_rationales(model, task.dev), vocab);

    std::ofstream trace_out(guard.track(dir + "/" + task_id + "_trace.csv"));
    trace_out << "epoch,train_loss,dev_task_loss,dev_mean_z,lr\n";
    for (const auto& et : trace)
      trace_out << et.epoch << ',' << format_double(et.train_loss) << ','
                << format_double(et.dev_task_loss) << ',' << format_double(et.dev_mean_z)
                << ',' << format_double(et.lr) << '\n';
  }
  guard.commit();
}

void cmd_train_r2a(const RunConfig& config) {
  Vocab vocab = load_vocab(config);
  std::vector<TaskDataset> sources;
  for (const std::string& task_id : config.source_task_ids()) {
    TaskDataset task;
    task.task_id = task_id;
    task.kind = TaskKind::kClassification;
    task.train = load_split(config.rationalized_train_path(task_id), vocab, task.kind,
                            "run `rationalize` first");
    task.dev = load_split(config.source_dev_path(task_id), vocab, task.kind,
                          "source dev split");
    sources.push_back(std::move(task));
  }
  bool domain = config.mode() == model::TransferMode::kDomainTransfer;
  TaskDataset target = load_target(config, vocab, /*need_unlabeled=*/domain);

  std::vector<std::pair<std::string, TaskKind>> task_list;
  for (const auto& t : sources) task_list.emplace_back(t.task_id, t.kind);
  model::R2AModel model(vocab, load_run_embeddings(config, vocab), config.dims(), task_list,
                        config.seed(), config.get_u64("model.bin_seed", config.seed() + 1));

  model::R2ATrainConfig rc;
  rc.mode = config.mode();
  rc.weights = config.loss_weights();
  rc.schedule = config.schedule("train");
  rc.batch_size = config.batch_size("train");
  rc.seed = config.seed();
  auto trace = model::r2a_train(model, sources, target.unlabeled, rc);

  OutputGuard guard;
  ensure_parent_dir(config.checkpoint_path());
  model::save_checkpoint(guard.track(config.checkpoint_path()), model, rc.weights, rc.mode);
  write_r2a_trace(guard.track(config.output_dir() + "/r2a_trace.csv"), trace);
  guard.commit();
}

void cmd_gen_attention(const RunConfig& config) {
  Vocab vocab = load_vocab(config);
  model::Checkpoint ckpt = load_run_checkpoint(config, vocab);
  TaskDataset target = load_target(config, vocab, /*need_unlabeled=*/false);
  truncate_train(target, config.get_int("target.train_size", 0));

  for (const Example& ex : target.train)
    if (!ex.has_rationale())
      throw std::runtime_error("gen-attention: target train example without rationale");
  corpus::RationaleFreqTable freq = corpus::rationale_frequency(target.train, vocab.size());

  std::vector<std::vector<double>> rows;
  rows.reserve(target.train.size());
  for (const Example& ex : target.train)
    rows.push_back(ckpt.model->infer_attention(ex, freq));

  OutputGuard guard;
  ensure_parent_dir(config.generated_attention_path());
  write_attention_file(guard.track(config.generated_attention_path()), rows);
  guard.commit();
}

void cmd_train_oracle(const RunConfig& config) {
  Vocab vocab = load_vocab(config);
  TaskDataset target = load_target(config, vocab, /*need_unlabeled=*/false);
  truncate_train(target, config.get_int("target.train_size", 0));
  std::vector<Example> pool = load_split(config.target_split_path("oracle_pool"), vocab,
                                         target.kind, "target oracle pool split");

  corpus::EmbeddingMatrix emb = load_run_embeddings(config, vocab);
  model::ModelDims dims = config.dims();
  trainer::OracleConfig oc;
  oc.embed_dim = dims.embed_dim;
  oc.encoder_hidden = dims.encoder_hidden;
  oc.attention_dim = dims.attention_dim;
  oc.predictor_hidden = dims.predictor_hidden;
  oc.dropout = dims.dropout;
  oc.schedule = config.schedule("oracle");
  oc.batch_size = config.batch_size("oracle");
  oc.seed = config.seed() ^ fnv1a64("oracle");
  trainer::AttentionClassifierModel oracle = trainer::train_oracle_attention(
      emb.weights, pool, target.dev, target.task_id, target.kind, oc);

  std::vector<std::vector<double>> rows;
  rows.reserve(target.train.size());
  for (const Example& ex : target.train) rows.push_back(oracle.attention(ex.tokens));

  OutputGuard guard;
  ensure_parent_dir(config.oracle_attention_path());
  write_attention_file(guard.track(config.oracle_attention_path()), rows);
  guard.commit();
}

void cmd_train_target(const RunConfig& config) {
  Vocab vocab = load_vocab(config);
  model::Checkpoint ckpt = load_run_checkpoint(config, vocab);
  TaskDataset target = load_target(config, vocab, /*need_unlabeled=*/false);
  truncate_train(target, config.get_int("target.train_size", 0));

  trainer::Supervision sup =
      trainer::supervision_from_string(config.get("target.supervision", "generated"));
  std::vector<std::vector<double>> supervision =
      load_supervision(config, sup, target.train.size());

  trainer::TargetTrainConfig tc;
  tc.supervision = sup;
  tc.lambda_att_target = ckpt.weights.att_target;
  if (config.has("loss.lambda_att_target"))
    tc.lambda_att_target = config.get_double("loss.lambda_att_target", 1.0);
  tc.schedule = config.schedule("target");
  tc.batch_size = config.batch_size("target");
  tc.seed = config.get_u64("target.seed", config.seed());

  trainer::AttentionClassifierModel model = trainer::AttentionClassifierModel::from_checkpoint(
      *ckpt.model, target.task_id, target.kind, tc.seed);
  trainer::TargetResult result = train_target(
      model, target, supervision.empty() ? nullptr : &supervision, tc);

  trainer::EvalReport report;
  report.add("dev_accuracy", "dev", tc.seed, result.best_dev_accuracy);
  if (!target.test.empty())
    report.add("test_accuracy", "test", tc.seed, trainer::evaluate_accuracy(model, target.test));

  OutputGuard guard;
  ensure_parent_dir(config.target_model_path());
  save_target_model(guard.track(config.target_model_path()), model, vocab, ckpt.model->dims());
  report.write_csv(guard.track(config.output_dir() + "/target_report.csv"));
  report.write_json(guard.track(config.output_dir() + "/target_report.json"));
  guard.commit();
}

void cmd_eval(const RunConfig& config) {
  Vocab vocab = load_vocab(config);
  trainer::EvalReport report;
  uint64_t seed = config.seed();

  if (fs::exists(config.target_model_path())) {
    corpus::EmbeddingMatrix emb = load_run_embeddings(config, vocab);
    trainer::AttentionClassifierModel model =
        load_target_model(config.target_model_path(), vocab, emb.weights);
    TaskDataset target = load_target(config, vocab, /*need_unlabeled=*/false);
    if (!target.test.empty())
      report.add("test_accuracy", "test", seed, trainer::evaluate_accuracy(model, target.test));
    report.add("dev_accuracy", "dev", seed, trainer::evaluate_accuracy(model, target.dev));
  }

  // distance of configured attention sources against the oracle attention
  std::string oracle_path = config.get("eval.oracle_attention", config.oracle_attention_path());
  if (fs::exists(oracle_path)) {
    auto oracle = read_attention_file(oracle_path);
    if (fs::exists(config.generated_attention_path())) {
      auto generated = read_attention_file(config.generated_attention_path());
      if (generated.size() == oracle.size())
        report.add("cosine_distance_generated", "train", seed,
                   trainer::attention_distance_report(generated, oracle));
    }
    TaskDataset target = load_target(config, vocab, /*need_unlabeled=*/false);
    truncate_train(target, config.get_int("target.train_size", 0));
    if (target.train.size() == oracle.size()) {
      std::vector<std::vector<double>> rationales;
      bool ok = true;
      for (const Example& ex : target.train) {
        if (!ex.has_rationale()) {
          ok = false;
          break;
        }
        rationales.push_back(trainer::normalize_mask(ex.rationale));
      }
      if (ok)
        report.add("cosine_distance_rationale", "train", seed,
                   trainer::attention_distance_report(rationales, oracle));
    }
  }

  if (report.rows.empty())
    throw std::runtime_error("eval: nothing to evaluate (no model or attention files found)");

  OutputGuard guard;
  fs::create_directories(config.output_dir());
  report.write_csv(guard.track(config.output_dir() + "/eval_report.csv"));
  report.write_json(guard.track(config.output_dir() + "/eval_report.json"));
  guard.commit();
}

void cmd_export_reprs(const RunConfig& config) {
  Vocab vocab = load_vocab(config);
  model::Checkpoint ckpt = load_run_checkpoint(config, vocab);
  int limit = config.get_int("export.limit", 200);

  OutputGuard guard;
  fs::create_directories(config.output_dir());
  std::ofstream out(guard.track(config.output_dir() + "/representations.csv"));
  int width = 4 * ckpt.model->dims().encoder_hidden;
  out << "task,index";
  for (int j = 0; j < width; ++j) out << ",d" << j;
  out << '\n';

  auto dump_split = [&](const std::string& name, const std::vector<Example>& examples) {
    int n = std::min<int>(limit, static_cast<int>(examples.size()));
    for (int i = 0; i < n; ++i) {
      Tensor s = ckpt.model->summary_of(examples[i].tokens);
      out << name << ',' << i;
      for (int j = 0; j < s.size(); ++j) out << ',' << format_double(s[j]);
      out << '\n';
    }
  };
  for (const std::string& task_id : config.source_task_ids()) {
    std::string path = config.source_train_path(task_id);
    require_file(path, "source train split");
    dump_split(task_id, corpus::load_examples(path, vocab, false, TaskKind::kClassification));
  }
  TaskDataset target = load_target(config, vocab, /*need_unlabeled=*/false);
  dump_split("target", target.train);
  if (!target.unlabeled.empty()) dump_split("target_unlabeled", target.unlabeled);
  guard.commit();
}

void cmd_learning_curve(const RunConfig& config) {
  Vocab vocab = load_vocab(config);
  model::Checkpoint ckpt = load_run_checkpoint(config, vocab);
  TaskDataset target = load_target(config, vocab, /*need_unlabeled=*/false);
  if (target.test.empty()) throw std::runtime_error("learning-curve: needs a test split");

  trainer::Supervision sup =
      trainer::supervision_from_string(config.get("target.supervision", "generated"));
  std::vector<double> sizes = config.get_double_list("curve.sizes", {25, 50, 100, 200});
  int seeds = config.get_int("curve.seeds", 5);

  std::vector<std::vector<double>> full_supervision =
      load_supervision(config, sup, target.train.size());

  OutputGuard guard;
  fs::create_directories(config.output_dir());
  std::ofstream out(guard.track(config.output_dir() + "/learning_curve.csv"));
  out << "supervision,n,seed,test_accuracy\n";
  for (double size_d : sizes) {
    int n = static_cast<int>(size_d);
    if (n < 1 || n > static_cast<int>(target.train.size()))
      throw ConfigError("learning-curve: size " + std::to_string(n) + " out of range");
    TaskDataset subset = target;
    subset.train.resize(n);
    std::vector<std::vector<double>> supervision = full_supervision;
    if (!supervision.empty()) supervision.resize(n);
    for (int s = 0; s < seeds; ++s) {
      trainer::TargetTrainConfig tc;
      tc.supervision = sup;
      tc.lambda_att_target = config.get_double("loss.lambda_att_target", 1.0);
      tc.schedule = config.schedule("target");
      tc.batch_size = config.batch_size("target");
      tc.seed = config.seed() + static_cast<uint64_t>(s);
      trainer::AttentionClassifierModel model =
          trainer::AttentionClassifierModel::from_checkpoint(*ckpt.model, target.task_id,
                                                             target.kind, tc.seed);
      train_target(model, subset, supervision.empty() ? nullptr : &supervision, tc);
      double acc = trainer::evaluate_accuracy(model, target.test);
      out << trainer::supervision_to_string(sup) << ',' << n << ',' << tc.seed << ','
          << format_double(acc) << '\n';
    }
  }
  guard.commit();
}

int run_config(const std::string& command, const RunConfig& config) {
  try {
    config.validate();
    if (command == "synth")
      cmd_synth(config);
    else if (command == "rationalize")
      cmd_rationalize(config);
    else if (command == "train-r2a")
      cmd_train_r2a(config);
    else if (command == "gen-attention")
      cmd_gen_attention(config);
    else if (command == "train-oracle")
      cmd_train_oracle(config);
    else if (command == "train-target")
      cmd_train_target(config);
    else if (command == "eval")
      cmd_eval(config);
    else if (command == "export-reprs")
      cmd_export_reprs(config);
    else if (command == "learning-curve")
      cmd_learning_curve(config);
    else {
      std::cerr << "unknown command: " << command << "\n";
      return 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int run(const std::string& command, const std::string& config_path) {
  RunConfig config;
  try {
    config = RunConfig::load(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return run_config(command, config);
}

}  // namespace r2a::cli
