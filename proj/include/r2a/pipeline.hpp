#pragma once

#include "r2a/config.hpp"

#include <string>
#include <vector>

namespace r2a::cli {

// Pipeline stages. Each writes its declared artifacts under the config's
// output directory, removing partial outputs when it fails.
void cmd_synth(const RunConfig& config);
void cmd_rationalize(const RunConfig& config);
void cmd_train_r2a(const RunConfig& config);
void cmd_gen_attention(const RunConfig& config);
void cmd_train_oracle(const RunConfig& config);
void cmd_train_target(const RunConfig& config);
void cmd_eval(const RunConfig& config);
void cmd_export_reprs(const RunConfig& config);
void cmd_learning_curve(const RunConfig& config);

extern const std::vector<std::string> kCommands;

// Dispatch; returns the process exit status (0 ok, 1 validation, 2 runtime).
int run(const std::string& command, const std::string& config_path);
int run_config(const std::string& command, const RunConfig& config);

// attention file helpers ({"index": i, "attention": [...]} JSON lines)
void write_attention_file(const std::string& path,
                          const std::vector<std::vector<double>>& attention);
std::vector<std::vector<double>> read_attention_file(const std::string& path);

}  // namespace r2a::cli
