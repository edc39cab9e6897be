#include "r2a/synthetic.hpp"

#include <stdexcept>
#include <string>

namespace r2a::corpus {

namespace {

struct AspectWords {
  std::vector<int> keywords;
  std::vector<int> positive;
  std::vector<int> negative;
};

struct Generated {
  Example example;                  // labeled + rationale for the owning aspect
  std::vector<double> oracle;       // uniform over the owning aspect's sentiment tokens
};

class SuiteBuilder {
 public:
  explicit SuiteBuilder(const SyntheticSpec& spec) : spec_(spec) {
    validate();
    build_vocab();
  }

  Vocab& vocab() { return vocab_; }
  const std::vector<AspectWords>& aspects() const { return aspects_; }

  // One review labeled/rationalized for `aspect`.
  Generated generate(int aspect, RngStream& rng) const {
    for (int attempt = 0; attempt < 20; ++attempt) {
      Generated g = try_generate(aspect, rng);
      if (!g.example.tokens.empty()) return g;
    }
    throw std::runtime_error("make_synthetic_suite: failed to produce a valid example");
  }

 private:
  void validate() const {
    if (spec_.num_aspects < 2)
      throw std::invalid_argument("SyntheticSpec: need at least two aspects");
    if (spec_.keywords_per_aspect < 1 || spec_.sentiment_words_per_polarity < 1)
      throw std::invalid_argument("SyntheticSpec: empty keyword or sentiment set");
    if (spec_.min_sentiment_tokens < 1 ||
        spec_.max_sentiment_tokens < (spec_.min_sentiment_tokens | 1))
      throw std::invalid_argument("SyntheticSpec: bad sentiment token range");
    if (spec_.polarity_match <= 0.0 || spec_.polarity_match > 1.0)
      throw std::invalid_argument("SyntheticSpec: polarity_match must lie in (0,1]");
    if (spec_.noise_rate < 0.0 || spec_.noise_rate >= 1.0)
      throw std::invalid_argument("SyntheticSpec: noise_rate must be in [0,1)");
    int special = spec_.num_aspects *
                  (spec_.keywords_per_aspect + 2 * spec_.sentiment_words_per_polarity);
    if (spec_.vocab_size < special + 3)
      throw std::invalid_argument("SyntheticSpec: vocab_size too small for the aspect words");
  }

  void build_vocab() {
    for (int a = 0; a < spec_.num_aspects; ++a) {
      AspectWords w;
      for (int k = 0; k < spec_.keywords_per_aspect; ++k)
        w.keywords.push_back(vocab_.add("kw" + std::to_string(a) + "_" + std::to_string(k)));
      for (int k = 0; k < spec_.sentiment_words_per_polarity; ++k)
        w.positive.push_back(vocab_.add("pos" + std::to_string(a) + "_" + std::to_string(k)));
      for (int k = 0; k < spec_.sentiment_words_per_polarity; ++k)
        w.negative.push_back(vocab_.add("neg" + std::to_string(a) + "_" + std::to_string(k)));
      aspects_.push_back(std::move(w));
    }
    int n = 0;
    while (vocab_.size() < spec_.vocab_size)
      noise_.push_back(vocab_.add("noise_" + std::to_string(n++)));
  }

  void emit_noise(std::vector<int>& tokens, RngStream& rng) const {
    int run = 0;
    while (run < spec_.max_noise_run && rng.uniform() < spec_.noise_rate) {
      tokens.push_back(noise_[rng.uniform_int(static_cast<int>(noise_.size()))]);
      ++run;
    }
  }

  Generated try_generate(int aspect, RngStream& rng) const {
    std::vector<int> order(spec_.num_aspects);
    for (int i = 0; i < spec_.num_aspects; ++i) order[i] = i;
    rng.shuffle(order);

    Generated g;
    std::vector<int>& tokens = g.example.tokens;
    std::vector<std::pair<int, int>> segment_spans(spec_.num_aspects);  // [begin,end)
    std::vector<int> polarity(spec_.num_aspects);
    std::vector<std::vector<int>> sentiment_pos(spec_.num_aspects);

    for (int slot = 0; slot < spec_.num_aspects; ++slot) {
      emit_noise(tokens, rng);
      int a = order[slot];
      const AspectWords& w = aspects_[a];
      int begin = static_cast<int>(tokens.size());
      tokens.push_back(w.keywords[rng.uniform_int(static_cast<int>(w.keywords.size()))]);

      // odd counts only: a strict majority always exists
      int lo = spec_.min_sentiment_tokens | 1;
      int n_odd = (spec_.max_sentiment_tokens - lo) / 2 + 1;
      int k = lo + 2 * rng.uniform_int(n_odd);
      int label = rng.bernoulli(0.5) ? 1 : 0;
      std::vector<int> pols(k);
      int majority = 0;
      for (int i = 0; i < k; ++i) {
        pols[i] = rng.uniform(0.0, 1.0) < spec_.polarity_match ? label : 1 - label;
        majority += (pols[i] == label) ? 1 : -1;
      }
      // enforce a strict majority of the drawn label
      while (majority <= 0) {
        int i = rng.uniform_int(k);
        if (pols[i] != label) {
          pols[i] = label;
          majority += 2;
        }
      }
      for (int i = 0; i < k; ++i) {
        const std::vector<int>& pool = pols[i] ? w.positive : w.negative;
        sentiment_pos[a].push_back(static_cast<int>(tokens.size()));
        tokens.push_back(pool[rng.uniform_int(static_cast<int>(pool.size()))]);
      }
      polarity[a] = label;
      segment_spans[a] = {begin, static_cast<int>(tokens.size())};
    }
    emit_noise(tokens, rng);

    if (sentiment_pos[aspect].empty()) return Generated{};  // caller retries

    int L = static_cast<int>(tokens.size());
    g.example.label = static_cast<double>(polarity[aspect]);
    g.example.rationale.assign(L, 0);
    for (int i = segment_spans[aspect].first; i < segment_spans[aspect].second; ++i)
      g.example.rationale[i] = 1;
    g.oracle.assign(L, 0.0);
    double mass = 1.0 / static_cast<double>(sentiment_pos[aspect].size());
    for (int i : sentiment_pos[aspect]) g.oracle[i] = mass;
    return g;
  }

  SyntheticSpec spec_;
  Vocab vocab_;
  std::vector<AspectWords> aspects_;
  std::vector<int> noise_;
};

std::vector<Example> generate_split(const SuiteBuilder& b, int aspect, int count,
                                    RngStream& rng, bool keep_label, bool keep_rationale,
                                    std::vector<std::vector<double>>* oracle_out = nullptr) {
  std::vector<Example> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Generated g = b.generate(aspect, rng);
    if (!keep_label) g.example.label.reset();
    if (!keep_rationale) g.example.rationale.clear();
    if (oracle_out) oracle_out->push_back(std::move(g.oracle));
    out.push_back(std::move(g.example));
  }
  return out;
}

}  // namespace

SyntheticSuite make_synthetic_suite(const SyntheticSpec& spec) {
  SuiteBuilder builder(spec);
  SyntheticSuite suite;

  int target_aspect = spec.num_aspects - 1;
  for (int a = 0; a < spec.num_aspects - 1; ++a) {
    RngStream rng = named_stream(spec.seed, "synthetic:source" + std::to_string(a));
    TaskDataset task;
    task.task_id = "aspect" + std::to_string(a);
    task.kind = TaskKind::kClassification;
    task.train = generate_split(builder, a, spec.source_train, rng, true, true);
    task.dev = generate_split(builder, a, spec.source_dev, rng, true, true);
    suite.sources.push_back(std::move(task));
  }

  RngStream rng = named_stream(spec.seed, "synthetic:target");
  suite.target.task_id = "aspect" + std::to_string(target_aspect);
  suite.target.kind = TaskKind::kClassification;
  suite.target.train = generate_split(builder, target_aspect, spec.target_train, rng, true, true,
                                      &suite.target_train_oracle);
  suite.target.dev = generate_split(builder, target_aspect, spec.target_dev, rng, true, false);
  suite.target.test = generate_split(builder, target_aspect, spec.target_test, rng, true, false);
  suite.target.unlabeled =
      generate_split(builder, target_aspect, spec.target_unlabeled, rng, false, false);
  suite.target_oracle_pool =
      generate_split(builder, target_aspect, spec.oracle_pool, rng, true, false);

  suite.vocab = builder.vocab();
  return suite;
}

}  // namespace r2a::corpus
