#pragma once

#include "r2a/r2a_model.hpp"
#include "r2a/rationalizer.hpp"
#include "r2a/schedule.hpp"
#include "r2a/synthetic.hpp"

#include <map>
#include <string>
#include <vector>

namespace r2a::cli {

// Thrown for malformed or inconsistent configuration; mapped to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key-value run configuration with dotted section keys. Every
// hyperparameter has a default matching the reference settings; a config file
// only lists overrides.
class RunConfig {
 public:
  static RunConfig load(const std::string& path);
  static RunConfig from_string(const std::string& text);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::string get(const std::string& key, const std::string& def) const;
  int get_int(const std::string& key, int def) const;
  double get_double(const std::string& key, double def) const;
  uint64_t get_u64(const std::string& key, uint64_t def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::vector<std::string> get_list(const std::string& key,
                                    const std::vector<std::string>& def) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& def) const;

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

  // assembled views
  model::TransferMode mode() const;
  uint64_t seed() const { return get_u64("seed", 1); }
  std::string output_dir() const { return get("output_dir", "out"); }
  model::ModelDims dims() const;
  model::LossWeights loss_weights() const;
  TrainSchedule schedule(const std::string& prefix) const;
  int batch_size(const std::string& prefix) const;
  corpus::SyntheticSpec synth_spec() const;
  rationalizer::RationalizerDims rationalizer_dims() const;
  rationalizer::RationalizerWeights rationalizer_weights() const;

  std::vector<std::string> source_task_ids() const;
  std::string target_task_id() const { return get("data.target.id", "aspect2"); }

  // default locations written by `synth` and consumed downstream
  std::string vocab_path() const;
  std::string source_train_path(const std::string& task_id) const;
  std::string source_dev_path(const std::string& task_id) const;
  std::string rationalized_train_path(const std::string& task_id) const;
  std::string rationalized_dev_path(const std::string& task_id) const;
  std::string target_split_path(const std::string& split) const;
  std::string checkpoint_path() const;
  std::string generated_attention_path() const;
  std::string oracle_attention_path() const;
  std::string target_model_path() const;

  // mode/weight consistency; throws ConfigError
  void validate() const;

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace r2a::cli
