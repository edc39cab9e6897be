#pragma once

#include "r2a/corpus.hpp"

#include <vector>

namespace r2a::corpus {

// Generator for the synthetic transfer suite. Reviews interleave aspect
// segments (keyword followed by sentiment words) with noise words. For the
// task owning aspect a: label = majority polarity of aspect a's sentiment
// words, rationale marks aspect a's keyword and sentiment tokens, and the
// constructed oracle attention is uniform over aspect a's sentiment tokens
// only. Rationales and oracle attention differ by design.
struct SyntheticSpec {
  int vocab_size = 300;
  int num_aspects = 3;
  int keywords_per_aspect = 3;
  int sentiment_words_per_polarity = 8;
  // sentiment tokens per segment, drawn from the odd values in the range so
  // the majority is never tied
  int min_sentiment_tokens = 1;
  int max_sentiment_tokens = 3;
  double polarity_match = 0.6;  // chance a sentiment token carries the label polarity
  double noise_rate = 0.6;      // continue-a-noise-run probability per slot
  int max_noise_run = 5;
  uint64_t seed = 1;

  int source_train = 2000;
  int source_dev = 200;
  int target_train = 200;
  int target_dev = 200;
  int target_test = 500;
  int target_unlabeled = 2000;
  int oracle_pool = 2000;
};

struct SyntheticSuite {
  Vocab vocab;
  std::vector<TaskDataset> sources;                       // aspects 0 .. A-2
  TaskDataset target;                                     // aspect A-1
  std::vector<Example> target_oracle_pool;                // large labeled split
  std::vector<std::vector<double>> target_train_oracle;   // constructed oracle attention
};

SyntheticSuite make_synthetic_suite(const SyntheticSpec& spec);

}  // namespace r2a::corpus
