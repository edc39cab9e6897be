#include "doctest.h"

#include "r2a/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace r2a;
using namespace r2a::cli;
namespace fs = std::filesystem;

namespace {

std::string tiny_config(const std::string& out_dir) {
  std::ostringstream ss;
  ss << "mode = domain-transfer\n"
     << "seed = 9\n"
     << "output_dir = " << out_dir << "\n"
     << "model.embed_dim = 6\n"
     << "model.encoder_hidden = 4\n"
     << "model.r2a_hidden = 3\n"
     << "model.attention_dim = 3\n"
     << "model.predictor_hidden = 5\n"
     << "model.critic_hidden = 8\n"
     << "model.bin_count = 4\n"
     << "rationalizer.gen_hidden = 4\n"
     << "rationalizer.feature_maps = 3\n"
     << "rationalizer.epochs = 1\n"
     << "train.epochs = 1\n"
     << "train.batch_size = 8\n"
     << "target.epochs = 2\n"
     << "target.batch_size = 8\n"
     << "oracle.epochs = 1\n"
     << "synth.vocab_size = 70\n"
     << "synth.num_aspects = 3\n"
     << "synth.keywords_per_aspect = 2\n"
     << "synth.sentiment_per_polarity = 3\n"
     << "synth.source_train = 16\n"
     << "synth.source_dev = 6\n"
     << "synth.target_train = 10\n"
     << "synth.target_dev = 6\n"
     << "synth.target_test = 6\n"
     << "synth.target_unlabeled = 12\n"
     << "synth.oracle_pool = 10\n";
  return ss.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::path("r2a_cli_test_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("config: parsing, defaults and errors") {
  RunConfig cfg = RunConfig::from_string(
      "# comment\n"
      "mode = aspect-transfer\n"
      "loss.lambda_wd = 0\n"
      "synth.vocab_size = 120\n"
      "curve.sizes = 10, 20,30\n");
  CHECK(cfg.mode() == model::TransferMode::kAspectTransfer);
  CHECK(cfg.get_int("synth.vocab_size", 0) == 120);
  CHECK(cfg.get_int("model.encoder_hidden", 200) == 200);  // default
  CHECK(cfg.get_double_list("curve.sizes", {}) == std::vector<double>{10, 20, 30});
  cfg.validate();

  CHECK_THROWS_AS(RunConfig::from_string("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_string("mode = sideways\n").mode(), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_string("synth.vocab_size = abc\n").get_int("synth.vocab_size", 0),
                  ConfigError);
}

TEST_CASE("config: aspect transfer with nonzero lambda_wd is a validation error") {
  RunConfig cfg = RunConfig::from_string("mode = aspect-transfer\nloss.lambda_wd = 0.01\n");
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK(run_config("train-target", cfg) == 1);
}

TEST_CASE("run: unknown command and missing config map to exit 1") {
  CHECK(run("frobnicate", "nonexistent.conf") == 1);
  CHECK(run("synth", "nonexistent.conf") == 1);
}

TEST_CASE("synth: deterministic bytes, then the full pipeline runs") {
  TempDir dir;
  RunConfig cfg = RunConfig::from_string(tiny_config(dir.str() + "/out"));

  REQUIRE(run_config("synth", cfg) == 0);
  std::string first = slurp(dir.str() + "/out/synth/target_train.jsonl");
  std::string vocab_first = slurp(dir.str() + "/out/synth/vocab.txt");
  REQUIRE(run_config("synth", cfg) == 0);
  CHECK(slurp(dir.str() + "/out/synth/target_train.jsonl") == first);
  CHECK(slurp(dir.str() + "/out/synth/vocab.txt") == vocab_first);
  CHECK(fs::exists(dir.str() + "/out/synth/aspect0_train.jsonl"));
  CHECK(fs::exists(dir.str() + "/out/synth/target_train_oracle_attention.jsonl"));

  // gen-attention before train-r2a: validation error about the checkpoint
  CHECK(run_config("gen-attention", cfg) == 1);

  REQUIRE(run_config("rationalize", cfg) == 0);
  CHECK(fs::exists(dir.str() + "/out/rationalized/aspect0_train.jsonl"));
  CHECK(fs::exists(dir.str() + "/out/rationalized/aspect1_trace.csv"));

  REQUIRE(run_config("train-r2a", cfg) == 0);
  CHECK(fs::exists(dir.str() + "/out/r2a_checkpoint.json"));
  CHECK(fs::exists(dir.str() + "/out/r2a_trace.csv"));

  REQUIRE(run_config("gen-attention", cfg) == 0);
  auto rows = read_attention_file(dir.str() + "/out/attention_generated.jsonl");
  CHECK(rows.size() == 10);
  for (const auto& row : rows) {
    double total = 0;
    for (double v : row) {
      CHECK(v >= 0);
      total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }

  // gen-attention is idempotent byte-for-byte
  std::string att_first = slurp(dir.str() + "/out/attention_generated.jsonl");
  REQUIRE(run_config("gen-attention", cfg) == 0);
  CHECK(slurp(dir.str() + "/out/attention_generated.jsonl") == att_first);

  REQUIRE(run_config("train-oracle", cfg) == 0);
  CHECK(read_attention_file(dir.str() + "/out/attention_oracle.jsonl").size() == 10);

  REQUIRE(run_config("train-target", cfg) == 0);
  CHECK(fs::exists(dir.str() + "/out/target_model.json"));
  CHECK(fs::exists(dir.str() + "/out/target_report.csv"));

  REQUIRE(run_config("eval", cfg) == 0);
  std::string report = slurp(dir.str() + "/out/eval_report.csv");
  CHECK(report.rfind("metric,split,seed,value", 0) == 0);
  CHECK(report.find("test_accuracy") != std::string::npos);
  CHECK(report.find("cosine_distance_generated") != std::string::npos);
  CHECK(report.find("cosine_distance_rationale") != std::string::npos);

  REQUIRE(run_config("export-reprs", cfg) == 0);
  std::string reprs = slurp(dir.str() + "/out/representations.csv");
  CHECK(reprs.rfind("task,index", 0) == 0);
  CHECK(reprs.find("target_unlabeled") != std::string::npos);

  RunConfig curve_cfg = cfg;
  curve_cfg.set("curve.sizes", "4,8");
  curve_cfg.set("curve.seeds", "2");
  REQUIRE(run_config("learning-curve", curve_cfg) == 0);
  std::string curve = slurp(dir.str() + "/out/learning_curve.csv");
  CHECK(curve.rfind("supervision,n,seed,test_accuracy", 0) == 0);
  int lines = 0;
  for (char c : curve)
    if (c == '\n') ++lines;
  CHECK(lines == 1 + 2 * 2);

  // reruns of a training stage are byte-identical
  std::string ckpt_first = slurp(dir.str() + "/out/r2a_checkpoint.json");
  REQUIRE(run_config("train-r2a", cfg) == 0);
  CHECK(slurp(dir.str() + "/out/r2a_checkpoint.json") == ckpt_first);

  // supervision modes that need files reject their absence
  RunConfig bad = cfg;
  bad.set("paths.generated_attention", dir.str() + "/out/never_written.jsonl");
  CHECK(run_config("train-target", bad) == 1);
}

TEST_CASE("attention file: round trip and order validation") {
  TempDir dir;
  std::vector<std::vector<double>> rows = {{0.5, 0.5}, {0.1, 0.2, 0.7}};
  std::string path = dir.str() + "/att.jsonl";
  write_attention_file(path, rows);
  CHECK(read_attention_file(path) == rows);

  std::ofstream out(path);
  out << R"({"attention":[1.0],"index":3})" << "\n";
  out.close();
  CHECK_THROWS_AS(read_attention_file(path), std::runtime_error);
}
