#include "dfcnn/network.hpp"

#include <cmath>

#include "dfcnn/error.hpp"
#include "dfcnn/random.hpp"

namespace dfcnn {

std::vector<std::span<double>> NetworkParams::trainable() {
  return {norm.gamma, norm.beta, conv.kernels, conv.bias, linear.weights,
          std::span<double>(&linear.bias, 1)};
}

bool operator==(const NetworkParams& a, const NetworkParams& b) {
  return a.norm.gamma == b.norm.gamma && a.norm.beta == b.norm.beta &&
         a.norm.running_mean == b.norm.running_mean && a.norm.running_var == b.norm.running_var &&
         a.norm.epsilon == b.norm.epsilon && a.norm.momentum == b.norm.momentum &&
         a.norm.mode == b.norm.mode && a.conv.out_channels == b.conv.out_channels &&
         a.conv.in_channels == b.conv.in_channels && a.conv.width == b.conv.width &&
         a.conv.kernels == b.conv.kernels && a.conv.bias == b.conv.bias &&
         a.linear.weights == b.linear.weights && a.linear.bias == b.linear.bias;
}

NetworkParams init_params(std::size_t lookback, std::size_t out_channels, std::uint64_t seed) {
  if (lookback == 0 || out_channels == 0) {
    throw UsageError("lookback and out channel count must be positive");
  }
  NetworkParams p;
  p.norm = BatchNormParams::identity(lookback);
  p.conv.out_channels = out_channels;
  p.conv.in_channels = lookback;
  p.conv.width = 3;
  p.conv.kernels.resize(out_channels * lookback * 3);
  p.conv.bias.assign(out_channels, 0.0);
  p.linear.weights.resize(out_channels);
  p.linear.bias = 0.0;

  SplitMix64 rng(seed);
  const double conv_bound = 1.0 / std::sqrt(static_cast<double>(lookback * 3));
  for (double& w : p.conv.kernels) w = rng.next_symmetric(conv_bound);
  const double linear_bound = 1.0 / std::sqrt(static_cast<double>(out_channels));
  for (double& w : p.linear.weights) w = rng.next_symmetric(linear_bound);
  return p;
}

std::vector<std::span<const double>> Gradients::trainable() const {
  return {gamma, beta, kernels, conv_bias, weights, std::span<const double>(&bias, 1)};
}

std::vector<double> infer(const NetworkParams& params, const Tensor3& tokens) {
  BatchNormParams norm = params.norm;  // copy: forward may touch running stats
  const BatchNormResult bn = batchnorm_forward(tokens, norm);
  return linear_forward(conv1d_forward(bn.output, params.conv), params.linear);
}

Network::Network(NetworkParams params) : params_(std::move(params)) {
  params_.norm.validate();
  params_.conv.validate();
  if (params_.linear.weights.size() != params_.conv.out_channels ||
      params_.norm.channels() != params_.conv.in_channels) {
    throw ShapeError("network layer dimensions do not chain");
  }
}

std::vector<double> Network::forward(const Tensor3& tokens) {
  BatchNormResult bn = batchnorm_forward(tokens, params_.norm);
  Tensor3 conv_out = conv1d_forward(bn.output, params_.conv);
  std::vector<double> pred = linear_forward(conv_out, params_.linear);
  cache_ = Cache{std::move(bn.cache), std::move(bn.output), std::move(conv_out)};
  return pred;
}

Gradients Network::backward(std::span<const double> grad_pred) const {
  if (!cache_) throw StateError("backward() called without a completed forward pass");
  const LinearGrads lin = linear_backward(grad_pred, cache_->conv_out, params_.linear);
  const ConvGrads conv = conv1d_backward(lin.input, cache_->normalized_out, params_.conv);
  BatchNormGrads bn = batchnorm_backward(conv.input, cache_->norm, params_.norm);
  Gradients g;
  g.gamma = std::move(bn.gamma);
  g.beta = std::move(bn.beta);
  g.kernels = conv.kernels;
  g.conv_bias = conv.bias;
  g.weights = lin.weights;
  g.bias = lin.bias;
  g.input = std::move(bn.input);
  return g;
}

}  // namespace dfcnn
