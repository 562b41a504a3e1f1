#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dfcnn/layers.hpp"
#include "dfcnn/tensor.hpp"

namespace dfcnn {

/// Learnable state of the batchnorm -> conv -> linear stack.
struct NetworkParams {
  BatchNormParams norm;
  ConvParams conv;
  LinearParams linear;

  [[nodiscard]] std::size_t lookback() const noexcept { return conv.in_channels; }
  [[nodiscard]] std::size_t out_channels() const noexcept { return conv.out_channels; }

  /// Trainable tensors in a fixed order: gamma, beta, kernels, conv bias,
  /// linear weights, linear bias.
  std::vector<std::span<double>> trainable();

  friend bool operator==(const NetworkParams&, const NetworkParams&);
};

/**
 * Seeded initialization: gamma = 1, beta = 0, running stats (0, 1); conv
 * kernels then linear weights drawn from SplitMix64(seed) uniformly in
 * [-1/sqrt(fan_in), 1/sqrt(fan_in)) in row-major order, where fan_in is
 * lookback * 3 for the convolution and out_channels for the linear layer;
 * biases 0.
 */
NetworkParams init_params(std::size_t lookback, std::size_t out_channels, std::uint64_t seed);

/// Gradients in the same order as NetworkParams::trainable().
struct Gradients {
  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> kernels;
  std::vector<double> conv_bias;
  std::vector<double> weights;
  double bias = 0.0;
  Tensor3 input;

  std::vector<std::span<const double>> trainable() const;
};

/// Stateless forward pass with the parameters' current norm mode; running
/// stats are not touched.
std::vector<double> infer(const NetworkParams& params, const Tensor3& tokens);

/**
 * @brief Forward/backward driver holding the activations of the last pass.
 *
 * Not thread-safe: forward() updates batch-norm running statistics in
 * training mode and overwrites the cached activations.
 */
class Network {
 public:
  explicit Network(NetworkParams params);

  std::vector<double> forward(const Tensor3& tokens);
  /// Backpropagates d loss / d prediction; throws StateError without a prior forward().
  [[nodiscard]] Gradients backward(std::span<const double> grad_pred) const;

  [[nodiscard]] NetworkParams& params() noexcept { return params_; }
  [[nodiscard]] const NetworkParams& params() const noexcept { return params_; }

 private:
  struct Cache {
    BatchNormCache norm;
    Tensor3 normalized_out;
    Tensor3 conv_out;
  };

  NetworkParams params_;
  std::optional<Cache> cache_;
};

}  // namespace dfcnn
