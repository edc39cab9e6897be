#include "r2a/config.hpp"

#include <fstream>
#include <sstream>

namespace r2a::cli {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    cfg.entries_[key] = value;
  }
  return cfg;
}

std::string RunConfig::get(const std::string& key, const std::string& def) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? def : it->second;
}

int RunConfig::get_int(const std::string& key, int def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  try {
    size_t pos = 0;
    int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("config: key '" + key + "' is not an integer: " + it->second);
  }
}

double RunConfig::get_double(const std::string& key, double def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  try {
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("config: key '" + key + "' is not a number: " + it->second);
  }
}

uint64_t RunConfig::get_u64(const std::string& key, uint64_t def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  try {
    size_t pos = 0;
    uint64_t v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("config: key '" + key + "' is not an unsigned integer: " + it->second);
  }
}

bool RunConfig::get_bool(const std::string& key, bool def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("config: key '" + key + "' is not a boolean: " + it->second);
}

std::vector<std::string> RunConfig::get_list(const std::string& key,
                                             const std::vector<std::string>& def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  std::vector<std::string> out;
  std::istringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> RunConfig::get_double_list(const std::string& key,
                                               const std::vector<double>& def) const {
  if (!has(key)) return def;
  std::vector<double> out;
  for (const std::string& s : get_list(key, {})) {
    try {
      out.push_back(std::stod(s));
    } catch (...) {
      throw ConfigError("config: key '" + key + "' holds a non-number: " + s);
    }
  }
  return out;
}

model::TransferMode RunConfig::mode() const {
  std::string m = get("mode", "domain-transfer");
  if (m == "domain-transfer") return model::TransferMode::kDomainTransfer;
  if (m == "aspect-transfer") return model::TransferMode::kAspectTransfer;
  throw ConfigError("config: mode must be domain-transfer or aspect-transfer, got '" + m + "'");
}

model::ModelDims RunConfig::dims() const {
  model::ModelDims d;
  d.embed_dim = get_int("model.embed_dim", 300);
  d.encoder_hidden = get_int("model.encoder_hidden", 200);
  d.r2a_hidden = get_int("model.r2a_hidden", 50);
  d.attention_dim = get_int("model.attention_dim", 50);
  d.predictor_hidden = get_int("model.predictor_hidden", 50);
  d.critic_hidden = get_int("model.critic_hidden", 100);
  d.bin_count = get_int("model.bin_count", 100);
  d.dropout = get_double("model.dropout", 0.1);
  return d;
}

model::LossWeights RunConfig::loss_weights() const {
  model::LossWeights w;
  w.att = get_double("loss.lambda_att", 0.01);
  w.lm = get_double("loss.lambda_lm", 0.1);
  w.wd = get_double("loss.lambda_wd", mode() == model::TransferMode::kAspectTransfer ? 0.0 : 0.01);
  w.att_target = get_double("loss.lambda_att_target", 1.0);
  w.cons = get_double("loss.lambda_cons", 0.01);
  w.gp_weight = get_double("loss.gp_weight", 10.0);
  w.critic_iters = get_int("loss.critic_iters", 5);
  w.critic_lr = get_double("loss.critic_lr", 0.001);
  return w;
}

TrainSchedule RunConfig::schedule(const std::string& prefix) const {
  TrainSchedule s;
  s.initial_lr = get_double(prefix + ".lr", 0.001);
  s.divisor = get_double(prefix + ".lr_divisor", 10.0);
  s.patience = get_int(prefix + ".patience", 3);
  s.delta = get_double(prefix + ".delta", 1e-4);
  s.max_epochs = get_int(prefix + ".epochs", 20);
  s.lr_floor = get_double(prefix + ".lr_floor", 1e-6);
  return s;
}

int RunConfig::batch_size(const std::string& prefix) const {
  return get_int(prefix + ".batch_size", 32);
}

corpus::SyntheticSpec RunConfig::synth_spec() const {
  corpus::SyntheticSpec s;
  s.vocab_size = get_int("synth.vocab_size", 300);
  s.num_aspects = get_int("synth.num_aspects", 3);
  s.keywords_per_aspect = get_int("synth.keywords_per_aspect", 3);
  s.sentiment_words_per_polarity = get_int("synth.sentiment_per_polarity", 8);
  s.min_sentiment_tokens = get_int("synth.min_sentiment", 1);
  s.max_sentiment_tokens = get_int("synth.max_sentiment", 3);
  s.polarity_match = get_double("synth.polarity_match", 0.6);
  s.noise_rate = get_double("synth.noise_rate", 0.6);
  s.max_noise_run = get_int("synth.max_noise_run", 5);
  s.seed = get_u64("synth.seed", seed());
  s.source_train = get_int("synth.source_train", 2000);
  s.source_dev = get_int("synth.source_dev", 200);
  s.target_train = get_int("synth.target_train", 200);
  s.target_dev = get_int("synth.target_dev", 200);
  s.target_test = get_int("synth.target_test", 500);
  s.target_unlabeled = get_int("synth.target_unlabeled", 2000);
  s.oracle_pool = get_int("synth.oracle_pool", 2000);
  return s;
}

rationalizer::RationalizerDims RunConfig::rationalizer_dims() const {
  rationalizer::RationalizerDims d;
  d.embed_dim = get_int("model.embed_dim", 300);
  d.gen_hidden = get_int("rationalizer.gen_hidden", 200);
  d.feature_maps = get_int("rationalizer.feature_maps", 50);
  d.predictor_hidden = get_int("model.predictor_hidden", 50);
  d.dropout = get_double("model.dropout", 0.1);
  return d;
}

rationalizer::RationalizerWeights RunConfig::rationalizer_weights() const {
  rationalizer::RationalizerWeights w;
  w.sparsity = get_double("rationalizer.lambda_sparse", 0.01);
  w.coherence = get_double("rationalizer.lambda_coherence", 0.02);
  w.tau = get_double("rationalizer.tau", 1.0);
  return w;
}

std::vector<std::string> RunConfig::source_task_ids() const {
  return get_list("data.source_tasks", {"aspect0", "aspect1"});
}

std::string RunConfig::vocab_path() const {
  return get("data.vocab", output_dir() + "/synth/vocab.txt");
}

std::string RunConfig::source_train_path(const std::string& task_id) const {
  return get("data.source." + task_id + ".train",
             output_dir() + "/synth/" + task_id + "_train.jsonl");
}

std::string RunConfig::source_dev_path(const std::string& task_id) const {
  return get("data.source." + task_id + ".dev",
             output_dir() + "/synth/" + task_id + "_dev.jsonl");
}

std::string RunConfig::rationalized_train_path(const std::string& task_id) const {
  return get("data.source." + task_id + ".train_rationalized",
             output_dir() + "/rationalized/" + task_id + "_train.jsonl");
}

std::string RunConfig::rationalized_dev_path(const std::string& task_id) const {
  return get("data.source." + task_id + ".dev_rationalized",
             output_dir() + "/rationalized/" + task_id + "_dev.jsonl");
}

std::string RunConfig::target_split_path(const std::string& split) const {
  return get("data.target." + split, output_dir() + "/synth/target_" + split + ".jsonl");
}

std::string RunConfig::checkpoint_path() const {
  return get("paths.checkpoint", output_dir() + "/r2a_checkpoint.json");
}

std::string RunConfig::generated_attention_path() const {
  return get("paths.generated_attention", output_dir() + "/attention_generated.jsonl");
}

std::string RunConfig::oracle_attention_path() const {
  return get("paths.oracle_attention", output_dir() + "/attention_oracle.jsonl");
}

std::string RunConfig::target_model_path() const {
  return get("paths.target_model", output_dir() + "/target_model.json");
}

void RunConfig::validate() const {
  model::TransferMode m = mode();
  model::LossWeights w = loss_weights();
  try {
    w.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (m == model::TransferMode::kAspectTransfer && w.wd != 0.0)
    throw ConfigError("config: aspect-transfer mode requires loss.lambda_wd = 0");
  if (get_double("model.dropout", 0.1) < 0.0 || get_double("model.dropout", 0.1) >= 1.0)
    throw ConfigError("config: model.dropout must lie in [0,1)");
  std::string sup = get("target.supervision", "generated");
  if (sup != "none" && sup != "rationale" && sup != "generated" && sup != "oracle")
    throw ConfigError("config: target.supervision must be one of none|rationale|generated|oracle");
}

}  // namespace r2a::cli
