#include "r2a/embeddings.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace r2a::corpus {

namespace {

void fill_random_row(Tensor& weights, int row, int dim, const std::string& token,
                     uint64_t seed) {
  RngStream rng = named_stream(seed, "embed:" + token);
  for (int j = 0; j < dim; ++j) weights.at(row, j) = rng.uniform(-0.1, 0.1);
}

}  // namespace

EmbeddingMatrix load_embeddings(const std::string& path, const Vocab& vocab, uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_embeddings: cannot open " + path);

  int dim = -1;
  std::vector<std::pair<int, std::vector<double>>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    std::vector<double> vals;
    double v;
    while (ss >> v) vals.push_back(v);
    if (dim < 0) {
      if (vals.empty())
        throw std::runtime_error("load_embeddings: no values on line " + std::to_string(line_no));
      dim = static_cast<int>(vals.size());
    } else if (static_cast<int>(vals.size()) != dim) {
      throw std::runtime_error("load_embeddings: inconsistent width at line " +
                               std::to_string(line_no) + " (got " +
                               std::to_string(vals.size()) + ", expected " + std::to_string(dim) +
                               ")");
    }
    if (vocab.contains(tok)) rows.emplace_back(vocab.id(tok), std::move(vals));
  }
  if (dim < 0) throw std::runtime_error("load_embeddings: empty file " + path);

  EmbeddingMatrix emb;
  emb.dim = dim;
  emb.weights = Tensor({vocab.size(), dim});
  std::vector<uint8_t> covered(vocab.size(), 0);
  for (const auto& [id, vals] : rows) {
    for (int j = 0; j < dim; ++j) emb.weights.at(id, j) = vals[j];
    covered[id] = 1;
  }
  for (int id = 0; id < vocab.size(); ++id) {
    if (covered[id]) continue;
    if (id == Vocab::kPad) continue;  // padding row stays zero
    fill_random_row(emb.weights, id, dim, vocab.token(id), seed);
  }
  return emb;
}

EmbeddingMatrix random_embeddings(const Vocab& vocab, int dim, uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_embeddings: dim must be >= 1");
  EmbeddingMatrix emb;
  emb.dim = dim;
  emb.weights = Tensor({vocab.size(), dim});
  for (int id = 0; id < vocab.size(); ++id) {
    if (id == Vocab::kPad) continue;
    fill_random_row(emb.weights, id, dim, vocab.token(id), seed);
  }
  return emb;
}

}  // namespace r2a::corpus
