#include "r2a/corpus.hpp"

#include "json.hpp"

#include <fstream>
#include <numeric>
#include <stdexcept>

namespace r2a::corpus {

using nlohmann::json;

int Vocab::add(const std::string& tok) {
  auto it = table_.find(tok);
  if (it != table_.end()) return it->second;
  int id = static_cast<int>(tokens_.size());
  table_.emplace(tok, id);
  tokens_.push_back(tok);
  return id;
}

int Vocab::id(const std::string& tok) const {
  auto it = table_.find(tok);
  return it == table_.end() ? kUnk : it->second;
}

uint64_t Vocab::hash() const {
  uint64_t h = 1469598103934665603ull;
  for (const auto& t : tokens_) {
    for (unsigned char c : t) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= '\n';
    h *= 1099511628211ull;
  }
  return h;
}

void Vocab::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("Vocab::save: cannot open " + path);
  for (const auto& t : tokens_) out << t << '\n';
}

Vocab Vocab::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("Vocab::load: cannot open " + path);
  Vocab v;
  std::string line;
  int idx = 0;
  while (std::getline(in, line)) {
    if (idx == kPad || idx == kUnk) {
      // reserved rows; accept whatever spelling the file uses
      ++idx;
      continue;
    }
    v.add(line);
    ++idx;
  }
  return v;
}

namespace {

void validate_label(const json& v, TaskKind kind, const std::string& path, int line_no) {
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + msg);
  };
  if (kind == TaskKind::kClassification) {
    if (!v.is_number_integer()) fail("classification label must be an integer");
    long l = v.get<long>();
    if (l != 0 && l != 1) fail("classification label must be 0 or 1");
  } else {
    if (!v.is_number()) fail("regression label must be a number");
    double d = v.get<double>();
    if (d < 0.0 || d > 1.0) fail("regression label must lie in [0,1]");
  }
}

}  // namespace

std::vector<Example> load_examples(const std::string& path, Vocab& vocab, bool grow_vocab,
                                   TaskKind kind) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_examples: cannot open " + path);
  std::vector<Example> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + msg);
    };
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      fail(std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("tokens") || !obj["tokens"].is_array())
      fail("expected an object with a 'tokens' array");

    Example ex;
    for (const auto& t : obj["tokens"]) {
      if (!t.is_string()) fail("tokens must be strings");
      const std::string tok = t.get<std::string>();
      ex.tokens.push_back(grow_vocab ? vocab.add(tok) : vocab.id(tok));
    }
    if (ex.tokens.empty()) fail("empty token sequence");

    if (obj.contains("label") && !obj["label"].is_null()) {
      validate_label(obj["label"], kind, path, line_no);
      ex.label = obj["label"].get<double>();
    }

    if (obj.contains("rationale") && !obj["rationale"].is_null()) {
      const auto& r = obj["rationale"];
      if (!r.is_array()) fail("rationale must be an array");
      if (r.size() != ex.tokens.size())
        fail("rationale length " + std::to_string(r.size()) + " != token count " +
             std::to_string(ex.tokens.size()));
      for (const auto& b : r) {
        if (!b.is_number_integer() || (b.get<int>() != 0 && b.get<int>() != 1))
          fail("rationale entries must be 0 or 1");
        ex.rationale.push_back(static_cast<uint8_t>(b.get<int>()));
      }
    }
    out.push_back(std::move(ex));
  }
  return out;
}

void save_examples(const std::string& path, const std::vector<Example>& examples,
                   const Vocab& vocab) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_examples: cannot open " + path);
  for (const auto& ex : examples) {
    json obj;
    json toks = json::array();
    for (int id : ex.tokens) toks.push_back(vocab.token(id));
    obj["tokens"] = std::move(toks);
    if (ex.label) {
      double l = *ex.label;
      if (l == static_cast<long>(l))
        obj["label"] = static_cast<long>(l);
      else
        obj["label"] = l;
    } else {
      obj["label"] = nullptr;
    }
    if (ex.has_rationale()) {
      json r = json::array();
      for (uint8_t b : ex.rationale) r.push_back(static_cast<int>(b));
      obj["rationale"] = std::move(r);
    }
    out << obj.dump() << '\n';
  }
}

RationaleFreqTable rationale_frequency(const std::vector<Example>& train_split, int vocab_size) {
  std::vector<double> marked(vocab_size, 0.0), total(vocab_size, 0.0);
  for (const auto& ex : train_split) {
    if (!ex.has_rationale())
      throw std::invalid_argument("rationale_frequency: example without rationale mask");
    for (int i = 0; i < ex.length(); ++i) {
      total[ex.tokens[i]] += 1.0;
      if (ex.rationale[i]) marked[ex.tokens[i]] += 1.0;
    }
  }
  std::vector<double> freq(vocab_size, 0.0);
  for (int w = 0; w < vocab_size; ++w)
    if (total[w] > 0) freq[w] = marked[w] / total[w];
  return RationaleFreqTable(std::move(freq));
}

BinMap assign_bins(const Vocab& vocab, int bin_count, uint64_t seed) {
  if (bin_count < 1) throw std::invalid_argument("assign_bins: bin count must be >= 1");
  if (bin_count > vocab.size())
    throw std::invalid_argument("assign_bins: more bins than vocabulary entries");
  std::vector<int> perm(vocab.size());
  std::iota(perm.begin(), perm.end(), 0);
  RngStream rng = named_stream(seed, "bin_assignment");
  rng.shuffle(perm);
  BinMap map;
  map.bin_count = bin_count;
  map.bin_of.assign(vocab.size(), 0);
  for (size_t i = 0; i < perm.size(); ++i)
    map.bin_of[perm[i]] = static_cast<int>(i % bin_count);
  return map;
}

}  // namespace r2a::corpus
