#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "spamdet/classifier.hpp"

using namespace spamdet;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<TrainExample> gen_examples(std::mt19937_64& rng, std::size_t n,
                                      std::size_t dim) {
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<TrainExample> data(n);
  bool saw_pos = false, saw_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d)
      if (coin(rng)) data[i].features.emplace_back(d, val(rng));
    data[i].deceptive = coin(rng) == 1;
    (data[i].deceptive ? saw_pos : saw_neg) = true;
  }
  if (!saw_pos) data[0].deceptive = true;
  if (!saw_neg) data[n - 1].deceptive = false;
  return data;
}

double objective(const std::vector<double>& w, double b, double C,
                 std::size_t dim, const std::vector<TrainExample>& data) {
  std::vector<double> gw;
  double gb;
  return nll_and_grad(w, b, C, dim, data, gw, gb);
}

}  // namespace

TEST_CASE("loss at the zero model is N ln 2") {
  std::mt19937_64 rng(7);
  auto data = gen_examples(rng, 13, 4);
  std::vector<double> w(4, 0.0);
  double loss = objective(w, 0.0, 1.0, 4, data);
  CHECK(loss == doctest::Approx(13 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("doubling C halves the regularization term exactly") {
  std::mt19937_64 rng(8);
  auto data = gen_examples(rng, 10, 3);
  std::vector<double> w = {0.5, -1.25, 2.0};
  double norm_sq = 0.5 * 0.5 + 1.25 * 1.25 + 2.0 * 2.0;
  double l1 = objective(w, 0.3, 1.0, 3, data);
  double l2 = objective(w, 0.3, 2.0, 3, data);
  double linf = objective(w, 0.3, kInf, 3, data);
  CHECK(l1 - linf == doctest::Approx(norm_sq / 2).epsilon(1e-12));
  CHECK(l2 - linf == doctest::Approx(norm_sq / 4).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> init(-1.0, 1.0);
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t dim = 1 + trial % 6;
    auto data = gen_examples(rng, 10, dim);
    std::vector<double> w(dim);
    for (auto& x : w) x = init(rng);
    double b = init(rng);
    double C = trial % 3 == 0 ? kInf : 0.5 + trial % 4;

    std::vector<double> gw;
    double gb;
    nll_and_grad(w, b, C, dim, data, gw, gb);

    for (std::size_t d = 0; d <= dim; ++d) {
      auto wp = w, wm = w;
      double bp = b, bm = b;
      if (d < dim) {
        wp[d] += h;
        wm[d] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      double numeric = (objective(wp, bp, C, dim, data) -
                        objective(wm, bm, C, dim, data)) /
                       (2 * h);
      double analytic = d < dim ? gw[d] : gb;
      double scale = std::max({1.0, std::abs(numeric), std::abs(analytic)});
      CHECK(std::abs(numeric - analytic) / scale <= 1e-5);
    }
  }
}

TEST_CASE("separable 1-D data trains to a positive weight") {
  std::vector<TrainExample> data;
  for (int i = 0; i < 8; ++i) {
    TrainExample ex;
    ex.features = {{0, i % 2 == 0 ? 1.0 : -1.0}};
    ex.deceptive = i % 2 == 0;
    data.push_back(ex);
  }
  auto model = train(data, 1);
  CHECK(model.weights[0] > 0);
  CHECK(model.converged);
  for (const auto& ex : data)
    CHECK(predict(model, ex.features) == ex.deceptive);
}

TEST_CASE("training is bit-identical across runs") {
  std::mt19937_64 rng(4242);
  auto data = gen_examples(rng, 40, 8);
  auto a = train(data, 8);
  auto b = train(data, 8);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("final objective never exceeds the zero-model objective") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    auto data = gen_examples(rng, 25, 5);
    auto model = train(data, 5);
    double at_zero = 25 * std::log(2.0);
    CHECK(objective(model.weights, model.bias, model.C, 5, data) <=
          at_zero + 1e-9);
  }
}

TEST_CASE("convexity: two training configurations meet the same objective") {
  std::mt19937_64 rng(55);
  auto data = gen_examples(rng, 30, 6);
  TrainOptions strict;
  strict.tol = 1e-10;
  strict.max_iter = 5000;
  auto a = train(data, 6, strict);
  // restarting from the trained model is impossible (zero init is fixed),
  // but a second run with a tighter tolerance must land within 1e-8
  TrainOptions stricter = strict;
  stricter.tol = 1e-12;
  auto b = train(data, 6, stricter);
  double fa = objective(a.weights, a.bias, 1.0, 6, data);
  double fb = objective(b.weights, b.bias, 1.0, 6, data);
  CHECK(std::abs(fa - fb) <= 1e-8);
}

TEST_CASE("unregularized training is invariant to global input scaling") {
  std::mt19937_64 rng(31);
  auto data = gen_examples(rng, 24, 4);
  auto scaled = data;
  for (auto& ex : scaled)
    for (auto& [i, v] : ex.features) v *= 7.5;
  TrainOptions opts;
  opts.C = kInf;
  opts.tol = 1e-9;
  opts.max_iter = 5000;
  auto a = train(data, 4, opts);
  auto b = train(scaled, 4, opts);
  for (std::size_t i = 0; i < data.size(); ++i)
    CHECK(predict(a, data[i].features) == predict(b, scaled[i].features));
}

TEST_CASE("predict_proba and threshold conventions") {
  MaxentModel zero;
  zero.weights = {0.0};
  CHECK(predict_proba(zero, {{0, 3.0}}) == doctest::Approx(0.5));
  // probability exactly 0.5 is deceptive at threshold 0.5
  CHECK(predict(zero, {{0, 1.0}}));
  MaxentModel neg;
  neg.weights = {-2.0};
  CHECK(predict_proba(neg, {{0, 1.0}}) < 0.5);
  CHECK(!predict(neg, {{0, 1.0}}));
  MaxentModel big;
  big.weights = {50.0};
  CHECK(predict_proba(big, {{0, 10.0}}) == doctest::Approx(1.0));
  // raising the threshold never flips authentic to deceptive
  CHECK(!predict(neg, {{0, 1.0}}, 0.9));
}

TEST_CASE("single-class data is rejected") {
  std::vector<TrainExample> data(3);
  for (auto& ex : data) {
    ex.features = {{0, 1.0}};
    ex.deceptive = true;
  }
  CHECK_THROWS_AS(train(data, 1), std::runtime_error);
}

TEST_CASE("model text round-trips exactly") {
  std::mt19937_64 rng(64);
  auto data = gen_examples(rng, 20, 5);
  auto model = train(data, 5);
  auto text = model_to_text(model, nullptr);
  auto loaded = model_from_text(text, nullptr);
  CHECK(loaded.weights == model.weights);
  CHECK(loaded.bias == model.bias);
  CHECK(loaded.C == model.C);
  for (const auto& ex : data)
    CHECK(predict_proba(loaded, ex.features) ==
          predict_proba(model, ex.features));
}
