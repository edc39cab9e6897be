#pragma once

#include "r2a/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace r2a::corpus {

// Shared token table. Id 0 is padding, id 1 the unknown token; both exist in
// every vocabulary.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocab() {
    add("<pad>");
    add("<unk>");
  }

  int add(const std::string& tok);
  // id of tok, or kUnk when absent
  int id(const std::string& tok) const;
  bool contains(const std::string& tok) const { return table_.count(tok) > 0; }
  const std::string& token(int id) const { return tokens_.at(id); }
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  uint64_t hash() const;

  void save(const std::string& path) const;
  static Vocab load(const std::string& path);

 private:
  std::unordered_map<std::string, int> table_;
  std::vector<std::string> tokens_;
};

enum class TaskKind { kClassification, kRegression };

// The atomic supervised unit (x, y, r).
struct Example {
  std::vector<int> tokens;              // ids into the shared vocabulary
  std::optional<double> label;          // class id or regression value
  std::vector<uint8_t> rationale;       // empty when absent; else length == tokens

  int length() const { return static_cast<int>(tokens.size()); }
  bool has_rationale() const { return !rationale.empty(); }
};

struct TaskDataset {
  std::string task_id;
  TaskKind kind = TaskKind::kClassification;
  std::vector<Example> train, dev, test, unlabeled;
};

// JSON-lines loader. When `grow_vocab`, unseen tokens are added; otherwise
// they map to the unknown id. Labels are validated against `kind`.
std::vector<Example> load_examples(const std::string& path, Vocab& vocab, bool grow_vocab,
                                   TaskKind kind);
void save_examples(const std::string& path, const std::vector<Example>& examples,
                   const Vocab& vocab);

// freq(w) = occurrences of w marked 1 / all occurrences of w, over one task's
// train split. Absent tokens map to 0.
class RationaleFreqTable {
 public:
  RationaleFreqTable() = default;
  explicit RationaleFreqTable(std::vector<double> freq) : freq_(std::move(freq)) {}
  double freq(int token_id) const {
    return token_id >= 0 && token_id < static_cast<int>(freq_.size()) ? freq_[token_id] : 0.0;
  }
  const std::vector<double>& values() const { return freq_; }

 private:
  std::vector<double> freq_;
};

RationaleFreqTable rationale_frequency(const std::vector<Example>& train_split, int vocab_size);

// Total balanced map token id -> bin id, deterministic in (vocab, B, seed).
struct BinMap {
  std::vector<int> bin_of;
  int bin_count = 0;
  int bin(int token_id) const { return bin_of.at(token_id); }
};

BinMap assign_bins(const Vocab& vocab, int bin_count, uint64_t seed);

}  // namespace r2a::corpus
