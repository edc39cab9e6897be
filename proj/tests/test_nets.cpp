#include "doctest.h"

#include "r2a/gradcheck.hpp"
#include "r2a/nets.hpp"

#include <cmath>

using namespace r2a;
using ad::Value;
using namespace r2a::nets;

namespace {

Tensor random_tensor(std::vector<int> shape, RngStream& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (int i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

}  // namespace

TEST_CASE("bilstm: L=1 runs from zero initial states") {
  ParamMap params;
  RngStream rng(1);
  BiLstm l = BiLstm::create(params, "enc", 3, 2, rng);
  Value x = Value::constant(random_tensor({1, 3}, rng));
  auto out = l.forward(x);
  CHECK(out.h.val().rows() == 1);
  CHECK(out.h.val().cols() == 4);
  CHECK(out.fwd.size() == 1);
}

TEST_CASE("bilstm: all-zero parameters give exactly zero states") {
  ParamMap params;
  RngStream rng(2);
  BiLstm l = BiLstm::create(params, "enc", 3, 2, rng);
  for (auto& [_, n] : params.items()) n->value.fill(0.0);
  Value x = Value::constant(random_tensor({4, 3}, rng));
  auto out = l.forward(x);
  for (int i = 0; i < out.h.val().size(); ++i) CHECK(out.h.val()[i] == 0.0);
}

TEST_CASE("bilstm: causality under perturbation of the last/first token") {
  ParamMap params;
  RngStream rng(3);
  BiLstm l = BiLstm::create(params, "enc", 3, 2, rng);
  Tensor x = random_tensor({5, 3}, rng);
  auto base = l.forward(Value::constant(x));

  Tensor x_last = x;
  for (int j = 0; j < 3; ++j) x_last.at(4, j) += 1.0;
  auto pert_last = l.forward(Value::constant(x_last));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(pert_last.fwd[i].val()[j] == base.fwd[i].val()[j]);

  Tensor x_first = x;
  for (int j = 0; j < 3; ++j) x_first.at(0, j) -= 1.0;
  auto pert_first = l.forward(Value::constant(x_first));
  for (int i = 1; i < 5; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(pert_first.bwd[i].val()[j] == base.bwd[i].val()[j]);
}

TEST_CASE("bilstm: width mismatch rejected") {
  ParamMap params;
  RngStream rng(4);
  BiLstm l = BiLstm::create(params, "enc", 3, 2, rng);
  CHECK_THROWS_AS(l.forward(Value::constant(Tensor({2, 5}))), std::invalid_argument);
}

TEST_CASE("bilstm: gradient check") {
  ParamMap params;
  RngStream rng(5);
  BiLstm l = BiLstm::create(params, "enc", 2, 2, rng);
  Value x = Value::param(random_tensor({4, 2}, rng));
  Tensor weights = random_tensor({4, 4}, rng);
  auto f = [&] { return ad::mean(ad::mul(l.forward(x).h, Value::constant(weights))); };
  auto nodes = params.nodes();
  nodes.push_back(x.node());
  CHECK(finite_difference_check(f, nodes, 1e-5) < 1e-4);
}

TEST_CASE("attention: zero query gives uniform weights") {
  ParamMap params;
  RngStream rng(6);
  AttentionHead head = AttentionHead::create(params, "att", 4, 3, rng);
  head.q.node()->value.fill(0.0);
  Value h = Value::constant(random_tensor({5, 4}, rng));
  Value alpha = head.forward(h);
  for (int i = 0; i < 5; ++i) CHECK(alpha.val()[i] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("attention: identical rows give uniform weights") {
  ParamMap params;
  RngStream rng(7);
  AttentionHead head = AttentionHead::create(params, "att", 4, 3, rng);
  Tensor h({3, 4});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) h.at(i, j) = 0.3 * j - 0.1;
  Value alpha = head.forward(Value::constant(h));
  for (int i = 0; i < 3; ++i) CHECK(alpha.val()[i] == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("attention: ln 9 score gap gives (0.1, 0.9)") {
  ParamMap params;
  RngStream rng(8);
  AttentionHead head = AttentionHead::create(params, "att", 1, 1, rng);
  head.w.node()->value[0] = 1.0;
  head.b.node()->value[0] = 0.0;
  head.q.node()->value[0] = 2.0 * std::log(9.0);
  // tanh maps 0 -> 0 and atanh(0.5) -> 0.5, so scores are (0, ln 9)
  Tensor h({2, 1});
  h.at(0, 0) = 0.0;
  h.at(1, 0) = std::atanh(0.5);
  Value alpha = head.forward(Value::constant(h));
  CHECK(alpha.val()[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(alpha.val()[1] == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("attention: mask zeroes the padded tail") {
  ParamMap params;
  RngStream rng(9);
  AttentionHead head = AttentionHead::create(params, "att", 4, 3, rng);
  Value h = Value::constant(random_tensor({4, 4}, rng));
  Value alpha = head.forward(h, {1, 1, 0, 0});
  CHECK(alpha.val()[2] == 0.0);
  CHECK(alpha.val()[3] == 0.0);
  CHECK(alpha.val()[0] + alpha.val()[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("attention: shift invariance of pre-softmax scores") {
  // adding a constant to all scores leaves alpha unchanged; realized by
  // comparing against a manually shifted softmax of the same scores
  ParamMap params;
  RngStream rng(10);
  AttentionHead head = AttentionHead::create(params, "att", 4, 3, rng);
  Value h = Value::constant(random_tensor({6, 4}, rng));
  Value proj = ad::tanh_op(ad::affine(h, head.w, head.b));
  Value scores = ad::matmul(proj, head.q);
  Value alpha = ad::softmax(scores);
  Value shifted = ad::softmax(ad::add_const(scores, 17.5));
  for (int i = 0; i < 6; ++i)
    CHECK(alpha.val()[i] == doctest::Approx(shifted.val()[i]).epsilon(1e-9));
}

TEST_CASE("attention: gradient check") {
  ParamMap params;
  RngStream rng(11);
  AttentionHead head = AttentionHead::create(params, "att", 3, 2, rng);
  Value h = Value::param(random_tensor({4, 3}, rng));
  Tensor mix = random_tensor({4}, rng);
  auto f = [&] { return ad::dot(head.forward(h), Value::constant(mix)); };
  auto nodes = params.nodes();
  nodes.push_back(h.node());
  CHECK(finite_difference_check(f, nodes, 1e-5) < 1e-4);
}

TEST_CASE("predictor: zero weights give zero logits") {
  ParamMap params;
  RngStream rng(12);
  Predictor p = Predictor::create(params, "pred", 4, 5, 2, rng);
  for (auto& [_, n] : params.items()) n->value.fill(0.0);
  Value out = p.forward(Value::constant(random_tensor({4}, rng)), DropoutCtx::inference());
  CHECK(out.val()[0] == 0.0);
  CHECK(out.val()[1] == 0.0);
}

TEST_CASE("predictor: one-hot attention picks a single row as context") {
  RngStream rng(13);
  Tensor h = random_tensor({5, 3}, rng);
  Tensor onehot({5});
  onehot[3] = 1.0;
  Value context = ad::vecmat(Value::constant(onehot), Value::constant(h));
  for (int j = 0; j < 3; ++j) CHECK(context.val()[j] == h.at(3, j));
}

TEST_CASE("predictor: uniform attention over identical rows matches single row") {
  ParamMap params;
  RngStream rng(14);
  Predictor p = Predictor::create(params, "pred", 3, 4, 2, rng);
  Tensor row = random_tensor({3}, rng);
  Tensor h({4, 3});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) h.at(i, j) = row[j];
  Tensor uniform = Tensor::full({4}, 0.25);
  Value context = ad::vecmat(Value::constant(uniform), Value::constant(h));
  Value via_mean = p.forward(context, DropoutCtx::inference());
  Value direct = p.forward(Value::constant(row), DropoutCtx::inference());
  for (int c = 0; c < 2; ++c)
    CHECK(via_mean.val()[c] == doctest::Approx(direct.val()[c]).epsilon(1e-12));
}

TEST_CASE("predictor: gradient check with regression output") {
  ParamMap params;
  RngStream rng(15);
  Predictor p = Predictor::create(params, "pred", 3, 4, 1, rng);
  Value x = Value::param(random_tensor({3}, rng));
  auto f = [&] { return ad::mse(ad::sum(p.forward(x, DropoutCtx::inference())), 0.7); };
  auto nodes = params.nodes();
  nodes.push_back(x.node());
  CHECK(finite_difference_check(f, nodes, 1e-5) < 1e-4);
}

namespace {

// plain-loop conv oracle: relu(filter . window + bias), max over time
std::vector<double> conv_pool_oracle(const Tensor& x, const Tensor& filt, const Tensor& bias,
                                     int w) {
  int L = x.rows(), D = x.cols(), F = filt.rows();
  std::vector<double> pooled(F, -1e300);
  for (int t = 0; t + w <= L; ++t) {
    for (int f = 0; f < F; ++f) {
      double acc = bias[f];
      for (int k = 0; k < w; ++k)
        for (int d = 0; d < D; ++d) acc += filt.at(f, k * D + d) * x.at(t + k, d);
      pooled[f] = std::max(pooled[f], std::max(acc, 0.0));
    }
  }
  return pooled;
}

}  // namespace

TEST_CASE("conv: z=0 gives identical outputs for any equal-length inputs") {
  ParamMap params;
  RngStream rng(16);
  ConvClassifier c = ConvClassifier::create(params, "cnn", 3, 4, 5, 2, rng);
  Value zeros = Value::constant(Tensor({9}));
  Value a = c.forward(Value::constant(random_tensor({9, 3}, rng)), zeros,
                      DropoutCtx::inference());
  Value b = c.forward(Value::constant(random_tensor({9, 3}, rng)), zeros,
                      DropoutCtx::inference());
  for (int i = 0; i < 2; ++i) CHECK(a.val()[i] == b.val()[i]);
}

TEST_CASE("conv: z=1 equals the plain CNN, checked against a loop oracle") {
  ParamMap params;
  RngStream rng(17);
  ConvClassifier c = ConvClassifier::create(params, "cnn", 3, 4, 5, 2, rng);
  Tensor x = random_tensor({10, 3}, rng);
  Value ones = Value::constant(Tensor::full({10}, 1.0));

  // pooled features from the oracle, fed through the same head
  std::vector<double> all;
  for (size_t k = 0; k < c.windows.size(); ++k) {
    auto pooled = conv_pool_oracle(x, c.filters[k].node()->value, c.biases[k].node()->value,
                                   c.windows[k]);
    all.insert(all.end(), pooled.begin(), pooled.end());
  }
  Value oracle_logits = c.head.forward(
      Value::constant(Tensor({static_cast<int>(all.size())}, all)), DropoutCtx::inference());

  Value got = c.forward(Value::constant(x), ones, DropoutCtx::inference());
  for (int i = 0; i < 2; ++i)
    CHECK(got.val()[i] == doctest::Approx(oracle_logits.val()[i]).epsilon(1e-12));
}

TEST_CASE("conv: short sequences are padded to the largest window") {
  ParamMap params;
  RngStream rng(18);
  ConvClassifier c = ConvClassifier::create(params, "cnn", 3, 4, 5, 2, rng);
  Value z = Value::constant(Tensor::full({2}, 1.0));
  Value out = c.forward(Value::constant(random_tensor({2, 3}, rng)), z,
                        DropoutCtx::inference());
  CHECK(out.val().size() == 2);
}

TEST_CASE("conv: permutations outside the max windows keep pooled features") {
  RngStream rng(19);
  int D = 2, F = 3, L = 10;
  // positive embeddings with one dominant token makes the max window stable
  Tensor x({L, D});
  for (int i = 0; i < L; ++i)
    for (int d = 0; d < D; ++d) x.at(i, d) = rng.uniform(0.01, 0.1);
  int big = 5;
  for (int d = 0; d < D; ++d) x.at(big, d) = 10.0;

  ParamMap params;
  ConvClassifier c = ConvClassifier::create(params, "cnn", D, F, 4, 2, rng);
  for (size_t k = 0; k < c.filters.size(); ++k) {
    auto& filt = c.filters[k].node()->value;
    for (int i = 0; i < filt.size(); ++i) filt[i] = rng.uniform(0.05, 0.5);
    c.biases[k].node()->value.fill(0.0);
  }

  std::vector<std::vector<double>> base;
  for (size_t k = 0; k < c.windows.size(); ++k)
    base.push_back(conv_pool_oracle(x, c.filters[k].node()->value, c.biases[k].node()->value,
                                    c.windows[k]));

  // permute only positions no window containing `big` touches
  std::vector<int> outside;
  for (int i = 0; i < L; ++i)
    if (i < big - 6 || i > big + 6) outside.push_back(i);
  // with big=5 and window 7 every position is in range; use window<=3 region:
  outside.clear();
  for (int i = 0; i < L; ++i)
    if (std::abs(i - big) > 2) outside.push_back(i);

  for (int trial = 0; trial < 5; ++trial) {
    std::vector<int> perm = outside;
    rng.shuffle(perm);
    Tensor xp = x;
    for (size_t j = 0; j < outside.size(); ++j)
      for (int d = 0; d < D; ++d) xp.at(outside[j], d) = x.at(perm[j], d);
    // windows 3 only: max window sits inside [big-2, big+2]
    auto permuted = conv_pool_oracle(xp, c.filters[0].node()->value,
                                     c.biases[0].node()->value, c.windows[0]);
    for (int f = 0; f < F; ++f) CHECK(permuted[f] == doctest::Approx(base[0][f]).epsilon(1e-12));
  }
}

TEST_CASE("conv: gradient check through z and embeddings") {
  ParamMap params;
  RngStream rng(20);
  ConvClassifier c = ConvClassifier::create(params, "cnn", 2, 3, 4, 2, rng);
  Value x = Value::param(random_tensor({8, 2}, rng));
  Value z = Value::param(random_tensor({8}, rng, 0.1, 0.9));
  auto f = [&] { return ad::cross_entropy(c.forward(x, z, DropoutCtx::inference()), 1); };
  auto nodes = params.nodes();
  nodes.push_back(x.node());
  nodes.push_back(z.node());
  CHECK(finite_difference_check(f, nodes, 1e-5) < 1e-4);
}

TEST_CASE("attention classifier blocks compose end to end") {
  ParamMap params;
  RngStream rng(21);
  BiLstm enc = BiLstm::create(params, "enc", 3, 2, rng);
  AttentionHead att = AttentionHead::create(params, "att", 4, 3, rng);
  Predictor pred = Predictor::create(params, "pred", 4, 5, 2, rng);
  Value h = enc.forward(Value::constant(random_tensor({6, 3}, rng))).h;
  Value alpha = att.forward(h);
  Value logits = pred.forward(ad::vecmat(alpha, h), DropoutCtx::inference());
  CHECK(alpha.val().size() == 6);
  CHECK(logits.val().size() == 2);
  double s = 0;
  for (int i = 0; i < 6; ++i) s += alpha.val()[i];
  CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
}
