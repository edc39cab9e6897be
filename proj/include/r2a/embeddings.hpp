#pragma once

#include "r2a/corpus.hpp"
#include "r2a/tensor.hpp"

#include <string>

namespace r2a::corpus {

struct EmbeddingMatrix {
  Tensor weights;  // V x D
  int dim = 0;
};

// Text format: one token per line, `token v1 v2 ... vD`. D is inferred from
// the first line. Tokens absent from the file (and the reserved rows) are
// initialized uniform in [-0.1, 0.1] from the run seed, per token, so the
// fallback does not depend on vocabulary order.
EmbeddingMatrix load_embeddings(const std::string& path, const Vocab& vocab, uint64_t seed);

EmbeddingMatrix random_embeddings(const Vocab& vocab, int dim, uint64_t seed);

}  // namespace r2a::corpus
