#include "doctest.h"

#include "r2a/adam.hpp"
#include "r2a/autodiff.hpp"
#include "r2a/gradcheck.hpp"
#include "r2a/rng.hpp"

#include <cmath>

using namespace r2a;
using ad::Value;

namespace {

Tensor random_tensor(std::vector<int> shape, RngStream& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (int i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

}  // namespace

TEST_CASE("backward: sum of vector gives ones") {
  Value p = Value::param(Tensor({3}, {2.0, -1.0, 5.0}));
  ad::backward(ad::sum(p));
  CHECK(p.grad()[0] == 1.0);
  CHECK(p.grad()[1] == 1.0);
  CHECK(p.grad()[2] == 1.0);
}

TEST_CASE("backward: dot(p,p) gives 2p") {
  Value p = Value::param(Tensor({2}, {1.0, 2.0}));
  ad::backward(ad::dot(p, p));
  CHECK(p.grad()[0] == doctest::Approx(2.0));
  CHECK(p.grad()[1] == doctest::Approx(4.0));
}

TEST_CASE("backward: non-scalar root rejected") {
  Value p = Value::param(Tensor({3}, {1.0, 2.0, 3.0}));
  CHECK_THROWS_AS(ad::backward(ad::scale(p, 2.0)), std::invalid_argument);
}

TEST_CASE("backward: repeated calls accumulate") {
  Value p = Value::param(Tensor({2}, {1.0, 1.0}));
  Value root = ad::sum(p);
  ad::backward(root);
  ad::backward(root);
  CHECK(p.grad()[0] == 2.0);
}

TEST_CASE("backward: unreachable parameter stays exactly zero") {
  Value used = Value::param(Tensor({2}, {1.0, 2.0}));
  Value unused = Value::param(Tensor({2}, {3.0, 4.0}));
  ad::backward(ad::sum(used));
  CHECK(unused.grad()[0] == 0.0);
  CHECK(unused.grad()[1] == 0.0);
}

TEST_CASE("backward: two-layer tanh network matches finite differences") {
  RngStream rng(7);
  Value w1 = Value::param(random_tensor({4, 3}, rng));
  Value b1 = Value::param(random_tensor({4}, rng));
  Value w2 = Value::param(random_tensor({1, 4}, rng));
  Value b2 = Value::param(random_tensor({1}, rng));
  Tensor x = random_tensor({3}, rng);
  auto f = [&] {
    Value h = ad::tanh_op(ad::affine(Value::constant(x), w1, b1));
    return ad::sum(ad::tanh_op(ad::affine(h, w2, b2)));
  };
  double err =
      finite_difference_check(f, {w1.node(), b1.node(), w2.node(), b2.node()}, 1e-5);
  CHECK(err < 1e-4);
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  ParamMap params;
  Value p = params.add("p", Tensor({3}, {1.0, 2.0, 3.0}));
  AdamState adam;
  adam.step(params);
  CHECK(p.val()[0] == 1.0);
  CHECK(p.val()[1] == 2.0);
  CHECK(p.val()[2] == 3.0);
}

TEST_CASE("adam: bias-corrected first step moves by about lr") {
  // p=0, g=1, lr=0.001, b1=0.9, b2=0.999, eps=1e-8:
  // mhat=1, vhat=1 => p = -lr/(1+eps)
  ParamMap params;
  Value p = params.add("p", Tensor({1}, {0.0}));
  p.grad()[0] = 1.0;
  AdamState adam;
  adam.step(params);
  CHECK(p.val()[0] == doctest::Approx(-0.001).epsilon(1e-6));
  CHECK(adam.step_count() == 1);
}

TEST_CASE("adam: step counter increments per call") {
  ParamMap params;
  params.add("p", Tensor({1}, {0.0}));
  AdamState adam;
  adam.step(params);
  adam.step(params);
  CHECK(adam.step_count() == 2);
}

TEST_CASE("adam: non-finite gradient names the parameter") {
  ParamMap params;
  params.add("fine", Tensor({1}, {0.0}));
  Value bad = params.add("exploded", Tensor({1}, {0.0}));
  bad.grad()[0] = std::numeric_limits<double>::quiet_NaN();
  AdamState adam;
  try {
    adam.step(params);
    FAIL("expected throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("exploded") != std::string::npos);
  }
}

TEST_CASE("softmax: uniform logits") {
  Value s = Value::constant(Tensor({4}, {3.7, 3.7, 3.7, 3.7}));
  Value p = ad::softmax(s);
  for (int i = 0; i < 4; ++i) CHECK(p.val()[i] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("softmax: hand-computed two-point case") {
  Value s = Value::constant(Tensor({2}, {std::log(1.0), std::log(3.0)}));
  Value p = ad::softmax(s);
  CHECK(p.val()[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p.val()[1] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("softmax: masked positions are exactly zero") {
  Value s = Value::constant(Tensor({3}, {0.0, 0.0, 0.0}));
  Value p = ad::softmax(s, {1, 0, 1});
  CHECK(p.val()[0] == 0.5);
  CHECK(p.val()[1] == 0.0);
  CHECK(p.val()[2] == 0.5);
}

TEST_CASE("softmax: all-masked rejected") {
  Value s = Value::constant(Tensor({2}, {0.0, 0.0}));
  CHECK_THROWS_AS(ad::softmax(s, {0, 0}), std::invalid_argument);
}

TEST_CASE("softmax properties: distribution and shift invariance") {
  RngStream rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    int L = 1 + rng.uniform_int(8);
    Tensor scores = random_tensor({L}, rng, -5.0, 5.0);
    Value p = ad::softmax(Value::constant(scores));
    double total = 0.0;
    for (int i = 0; i < L; ++i) {
      CHECK(p.val()[i] >= 0.0);
      total += p.val()[i];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

    double c = rng.uniform(-10.0, 10.0);
    Tensor shifted = scores;
    for (int i = 0; i < L; ++i) shifted[i] += c;
    Value q = ad::softmax(Value::constant(shifted));
    for (int i = 0; i < L; ++i) CHECK(q.val()[i] == doctest::Approx(p.val()[i]).epsilon(1e-9));
  }
}

TEST_CASE("soft-margin cosine: identical vectors give 0") {
  Value a = Value::constant(Tensor({3}, {1.0, 2.0, -1.0}));
  CHECK(ad::soft_margin_cosine_distance(a, a).item() == 0.0);
}

TEST_CASE("soft-margin cosine: orthogonal vectors give 0.9") {
  Value a = Value::constant(Tensor({2}, {1.0, 0.0}));
  Value b = Value::constant(Tensor({2}, {0.0, 2.0}));
  CHECK(ad::soft_margin_cosine_distance(a, b).item() == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("soft-margin cosine: hand-computed 45 degree case") {
  // max(0, 1 - 1/sqrt(2) - 0.1) = 0.19289321881345248
  Value a = Value::constant(Tensor({2}, {1.0, 0.0}));
  Value b = Value::constant(Tensor({2}, {1.0, 1.0}));
  CHECK(ad::soft_margin_cosine_distance(a, b).item() ==
        doctest::Approx(0.19289321881345248).epsilon(1e-12));
}

TEST_CASE("soft-margin cosine: zero vector rejected") {
  Value a = Value::constant(Tensor({2}, {0.0, 0.0}));
  Value b = Value::constant(Tensor({2}, {1.0, 0.0}));
  CHECK_THROWS_AS(ad::soft_margin_cosine_distance(a, b), std::invalid_argument);
  CHECK_THROWS_AS(ad::soft_margin_cosine_distance(b, a), std::invalid_argument);
}

TEST_CASE("soft-margin cosine properties: scale invariance and range") {
  RngStream rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    int L = 2 + rng.uniform_int(6);
    Tensor ta = random_tensor({L}, rng);
    Tensor tb = random_tensor({L}, rng);
    if (ta.flat().norm() == 0 || tb.flat().norm() == 0) continue;
    double d = ad::soft_margin_cosine_distance(Value::constant(ta), Value::constant(tb)).item();
    CHECK(d >= 0.0);
    CHECK(d <= 1.9);

    double c = rng.uniform(0.1, 10.0);
    double k = rng.uniform(0.1, 10.0);
    Tensor sa = ta, sb = tb;
    for (int i = 0; i < L; ++i) {
      sa[i] *= c;
      sb[i] *= k;
    }
    double ds = ad::soft_margin_cosine_distance(Value::constant(sa), Value::constant(sb)).item();
    CHECK(ds == doctest::Approx(d).epsilon(1e-9));
  }
}

TEST_CASE("soft-margin cosine: zero whenever cos >= 0.9") {
  Value a = Value::constant(Tensor({2}, {1.0, 0.0}));
  Value b = Value::constant(Tensor({2}, {1.0, 0.1}));  // cos ~ 0.995
  CHECK(ad::soft_margin_cosine_distance(a, b).item() == 0.0);
}

TEST_CASE("finite_difference_check: quadratic is near-exact") {
  Value x = Value::param(Tensor({1}, {3.0}));
  auto f = [&] { return ad::dot(x, x); };
  CHECK(finite_difference_check(f, {x.node()}, 1e-5) < 1e-8);
}

TEST_CASE("finite_difference_check: soft-margin cosine away from hinge") {
  Tensor fixed({3}, {0.3, -0.7, 0.5});
  Value a = Value::param(Tensor({3}, {1.0, 0.4, -0.2}));
  auto f = [&] {
    return ad::soft_margin_cosine_distance(a, Value::constant(fixed));
  };
  CHECK(finite_difference_check(f, {a.node()}, 1e-5) < 1e-4);
}

TEST_CASE("finite_difference_check: constant function") {
  Value x = Value::param(Tensor({2}, {1.0, 2.0}));
  auto f = [&] { return Value::scalar(5.0); };
  CHECK(finite_difference_check(f, {x.node()}, 1e-5) == 0.0);
}

TEST_CASE("gradient checks across primitive ops at random points") {
  RngStream rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    Value a = Value::param(random_tensor({3, 4}, rng));
    Value b = Value::param(random_tensor({3, 4}, rng));
    Value m = Value::param(random_tensor({4, 2}, rng));
    Value v = Value::param(random_tensor({4}, rng, 0.2, 1.5));
    Value u = Value::param(random_tensor({3}, rng));

    std::vector<ad::NodePtr> params = {a.node(), b.node(), m.node(), v.node(), u.node()};
    auto f = [&] {
      Value t1 = ad::mul(ad::tanh_op(a), ad::sigmoid(b));       // [3,4]
      Value t2 = ad::matmul(t1, m);                             // [3,2]
      Value t3 = ad::matmul(t1, v);                             // [3]
      Value t4 = ad::vecmat(u, t1);                             // [4]
      Value t5 = ad::softmax(ad::matmul_tn(t2, u));             // [2]
      Value s = ad::add(ad::mean(t2), ad::sum(ad::log_op(ad::add_const(ad::square(t3), 1.0))));
      s = ad::add(s, ad::dot(t4, ad::sqrt_op(ad::add_const(ad::square(t4), 0.5))));
      s = ad::add(s, ad::sum(ad::mul(t5, t5)));
      s = ad::add(s, ad::norm2(ad::row(t1, 1)));
      s = ad::add(s, ad::sum(ad::abs_op(ad::add_const(u, 0.3))));
      return s;
    };
    CHECK(finite_difference_check(f, params, 1e-5) < 1e-4);
  }
}

TEST_CASE("gradient check: concat, slice, gather, windows, max") {
  RngStream rng(55);
  Value emb = Value::param(random_tensor({6, 3}, rng));
  Value w = Value::param(random_tensor({2, 6}, rng));
  std::vector<int> ids = {4, 0, 2, 2, 5};
  auto f = [&] {
    Value rows = ad::gather_rows(emb, ids);       // [5,3]
    Value win = ad::gather_windows(rows, 2);      // [4,6]
    Value feats = ad::matmul_nt(win, w);          // [4,2]
    Value pooled = ad::max_over_rows(feats);      // [2]
    Value joined = ad::concat(pooled, ad::slice(ad::row(rows, 0), 0, 2));
    return ad::sum(ad::mul(joined, joined));
  };
  CHECK(finite_difference_check(f, {emb.node(), w.node()}, 1e-5) < 1e-4);
}

TEST_CASE("gradient check: cross entropy and mse") {
  RngStream rng(77);
  Value logits = Value::param(random_tensor({4, 5}, rng));
  Value one = Value::param(random_tensor({3}, rng));
  std::vector<int> targets = {1, 0, 4, 2};
  auto f = [&] {
    Value l1 = ad::cross_entropy_rows(logits, targets);
    Value l2 = ad::cross_entropy(ad::matmul_tn(logits, Value::constant(Tensor({4}, {1, -1, 0.5, 2}))), 3);
    Value l3 = ad::mse(ad::dot(one, one), 2.0);
    return ad::add(ad::add(l1, l2), l3);
  };
  CHECK(finite_difference_check(f, {logits.node(), one.node()}, 1e-5) < 1e-4);
}

TEST_CASE("dropout: inverted scaling keeps expectation, off at inference") {
  RngStream rng(3);
  Tensor big = random_tensor({2000}, rng, 1.0, 2.0);
  Value x = Value::constant(big);
  RngStream drop_rng(42);
  Value dropped = ad::dropout(x, 0.1, drop_rng, true);
  double se = 0, sd = 0;
  int zeros = 0;
  for (int i = 0; i < big.size(); ++i) {
    se += big[i];
    sd += dropped.val()[i];
    if (dropped.val()[i] == 0.0) ++zeros;
  }
  CHECK(zeros > 100);  // ~200 expected
  CHECK(sd / se == doctest::Approx(1.0).epsilon(0.05));

  RngStream drop_rng2(42);
  Value same = ad::dropout(x, 0.1, drop_rng2, false);
  CHECK(same.node() == x.node());  // identity when disabled
}

TEST_CASE("dropout: gradient flows through fixed mask") {
  RngStream rng(5);
  Value x = Value::param(random_tensor({10}, rng));
  // freeze one mask by re-seeding inside f
  auto f = [&] {
    RngStream drop_rng(9);
    return ad::sum(ad::dropout(x, 0.3, drop_rng, true));
  };
  CHECK(finite_difference_check(f, {x.node()}, 1e-5) < 1e-8);
}
