#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace r2a {

// Deterministic RNG stream. Uniform doubles are derived from the raw 64-bit
// output directly so sequences are identical across standard libraries.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // logistic noise: log(u) - log(1-u), u in (0,1)
  double logistic() {
    double u;
    do {
      u = uniform();
    } while (u <= 0.0 || u >= 1.0);
    return std::log(u) - std::log(1.0 - u);
  }

  // uniform integer in [0, n)
  int uniform_int(int n) { return static_cast<int>(gen_() % static_cast<uint64_t>(n)); }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(static_cast<int>(i)));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Independent named substream of a run seed. Components draw from their own
// streams so adding or removing one component leaves the others untouched.
inline RngStream named_stream(uint64_t seed, std::string_view name) {
  return RngStream(seed ^ fnv1a64(name));
}

}  // namespace r2a
