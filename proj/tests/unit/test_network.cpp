#include <gtest/gtest.h>

#include <cmath>

#include "dfcnn/error.hpp"
#include "dfcnn/network.hpp"
#include "test_support.hpp"

namespace dfcnn {
namespace {

Tensor3 random_tokens(SplitMix64& rng, std::size_t batch, std::size_t lookback) {
  Tensor3 t(batch, lookback, 3);
  for (double& x : t.data()) x = testing::uniform(rng, -2.0, 2.0);
  return t;
}

NetworkParams random_params(SplitMix64& rng, std::size_t lookback, std::size_t out) {
  NetworkParams p = init_params(lookback, out, rng.next());
  for (double& g : p.norm.gamma) g = testing::uniform(rng, 0.5, 1.5);
  for (double& b : p.norm.beta) b = testing::uniform(rng, -0.5, 0.5);
  for (double& b : p.conv.bias) b = testing::uniform(rng, -0.5, 0.5);
  p.linear.bias = testing::uniform(rng, -0.5, 0.5);
  return p;
}

double loss_of(const NetworkParams& params, const Tensor3& tokens,
               const std::vector<double>& target) {
  Network net(params);
  return mse_loss(net.forward(tokens), target).value;
}

bool close(double analytic, double numeric) {
  const double diff = std::abs(analytic - numeric);
  if (diff <= 1e-7) return true;
  return diff / std::max(std::abs(analytic), std::abs(numeric)) < 1e-4;
}

TEST(InitParams, SeededAndBounded) {
  const auto a = init_params(2, 3, 3407);
  const auto b = init_params(2, 3, 3407);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == init_params(2, 3, 3408));
  EXPECT_EQ(a.norm.gamma, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(a.norm.beta, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(a.norm.running_mean, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(a.norm.running_var, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(a.conv.bias, (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_EQ(a.linear.bias, 0.0);
  ASSERT_EQ(a.conv.kernels.size(), 18u);
  for (double w : a.conv.kernels) EXPECT_LT(std::abs(w), 1.0 / std::sqrt(6.0));
  for (double w : a.linear.weights) EXPECT_LT(std::abs(w), 1.0 / std::sqrt(3.0));
  EXPECT_THROW(init_params(0, 2, 1), UsageError);
}

TEST(InitParams, DrawOrderIsConvThenLinear) {
  const auto p = init_params(1, 2, 99);
  SplitMix64 rng(99);
  const double conv_bound = 1.0 / std::sqrt(3.0);
  for (double w : p.conv.kernels) EXPECT_EQ(w, rng.next_symmetric(conv_bound));
  const double lin_bound = 1.0 / std::sqrt(2.0);
  for (double w : p.linear.weights) EXPECT_EQ(w, rng.next_symmetric(lin_bound));
}

TEST(SplitMix64, PublishedReferenceStream) {
  // Reference outputs for seed 1234567.
  SplitMix64 rng(1234567);
  EXPECT_EQ(rng.next(), 6457827717110365317ULL);
  EXPECT_EQ(rng.next(), 3203168211198807973ULL);
  EXPECT_EQ(rng.next(), 9817491932198370423ULL);
}

TEST(Network, ShapeChain) {
  SplitMix64 rng(5);
  for (std::size_t lookback = 1; lookback <= 10; ++lookback) {
    for (std::size_t out = 1; out <= 10; ++out) {
      Network net(init_params(lookback, out, 3407));
      const auto pred = net.forward(random_tokens(rng, 4, lookback));
      ASSERT_EQ(pred.size(), 4u);
    }
  }
}

TEST(Network, BackwardBeforeForwardIsAStateError) {
  Network net(init_params(2, 2, 1));
  EXPECT_THROW((void)net.backward(std::vector<double>{0.0}), StateError);
}

TEST(Network, RejectsMismatchedLayers) {
  NetworkParams p = init_params(2, 2, 1);
  p.linear.weights.push_back(0.0);
  EXPECT_THROW(Network{p}, ShapeError);
}

TEST(Network, GradientsMatchFiniteDifferences) {
  SplitMix64 rng(123);
  const double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const auto batch = testing::uniform_index(rng, 1, 8);
    const auto lookback = testing::uniform_index(rng, 1, 5);
    const auto out = testing::uniform_index(rng, 1, 4);
    const NetworkParams params = random_params(rng, lookback, out);
    const Tensor3 tokens = random_tokens(rng, batch, lookback);
    std::vector<double> target(batch);
    for (double& t : target) t = testing::uniform(rng, -2.0, 2.0);

    Network net(params);
    const auto loss = mse_loss(net.forward(tokens), target);
    const Gradients g = net.backward(loss.grad);
    const auto analytic = g.trainable();

    NetworkParams probe = params;
    auto views = probe.trainable();
    for (std::size_t t = 0; t < views.size(); ++t) {
      for (std::size_t i = 0; i < views[t].size(); ++i) {
        const double saved = views[t][i];
        views[t][i] = saved + h;
        const double up = loss_of(probe, tokens, target);
        views[t][i] = saved - h;
        const double down = loss_of(probe, tokens, target);
        views[t][i] = saved;
        const double numeric = (up - down) / (2 * h);
        EXPECT_TRUE(close(analytic[t][i], numeric))
            << "trial " << trial << " tensor " << t << " index " << i << ": analytic "
            << analytic[t][i] << " numeric " << numeric;
      }
    }

    Tensor3 shifted = tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const double saved = shifted.data()[i];
      shifted.data()[i] = saved + h;
      const double up = loss_of(params, shifted, target);
      shifted.data()[i] = saved - h;
      const double down = loss_of(params, shifted, target);
      shifted.data()[i] = saved;
      EXPECT_TRUE(close(g.input.data()[i], (up - down) / (2 * h))) << "input " << i;
    }
  }
}

TEST(Network, ZeroResidualGivesZeroGradients) {
  SplitMix64 rng(8);
  Network net(random_params(rng, 3, 2));
  const Tensor3 tokens = random_tokens(rng, 5, 3);
  const auto pred = net.forward(tokens);
  const auto loss = mse_loss(pred, pred);
  const Gradients g = net.backward(loss.grad);
  for (const auto& t : g.trainable()) {
    for (double v : t) EXPECT_EQ(v, 0.0);
  }
}

TEST(Network, DuplicatedBatchKeepsParameterGradients) {
  SplitMix64 rng(21);
  const NetworkParams params = random_params(rng, 2, 3);
  const Tensor3 tokens = random_tokens(rng, 4, 2);
  std::vector<double> target{0.5, -1.0, 0.25, 2.0};

  Tensor3 doubled(8, 2, 3);
  for (std::size_t rep = 0; rep < 2; ++rep) {
    std::copy(tokens.data().begin(), tokens.data().end(),
              doubled.data().begin() + static_cast<std::ptrdiff_t>(rep * tokens.size()));
  }
  std::vector<double> doubled_target = target;
  doubled_target.insert(doubled_target.end(), target.begin(), target.end());

  Network a(params);
  const Gradients ga = a.backward(mse_loss(a.forward(tokens), target).grad);
  Network b(params);
  const Gradients gb = b.backward(mse_loss(b.forward(doubled), doubled_target).grad);
  const auto ta = ga.trainable();
  const auto tb = gb.trainable();
  for (std::size_t t = 0; t < ta.size(); ++t) {
    for (std::size_t i = 0; i < ta[t].size(); ++i) EXPECT_NEAR(ta[t][i], tb[t][i], 1e-12);
  }
}

TEST(Network, InferLeavesParamsUntouched) {
  SplitMix64 rng(3);
  NetworkParams p = random_params(rng, 2, 2);
  p.norm.mode = NormMode::kInference;
  const NetworkParams before = p;
  const Tensor3 tokens = random_tokens(rng, 1, 2);
  const auto y1 = infer(p, tokens);
  const auto y2 = infer(p, tokens);
  EXPECT_EQ(y1, y2);
  EXPECT_TRUE(p == before);
}

}  // namespace
}  // namespace dfcnn
