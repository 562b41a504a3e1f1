#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dfcnn/tensor.hpp"

namespace dfcnn {

enum class NormMode { kTraining, kInference };

/**
 * @brief Per-channel batch normalization state.
 *
 * Training mode normalizes each channel over (batch, features) with the
 * biased batch variance and folds the unbiased variance into the running
 * estimate; inference mode uses the running estimates.
 */
struct BatchNormParams {
  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> running_mean;
  std::vector<double> running_var;
  double epsilon = 1e-5;
  double momentum = 0.1;
  NormMode mode = NormMode::kTraining;

  [[nodiscard]] std::size_t channels() const noexcept { return gamma.size(); }
  /// gamma = 1, beta = 0, running stats (0, 1).
  static BatchNormParams identity(std::size_t channels);
  void validate() const;
};

struct BatchNormCache {
  Tensor3 normalized;            // x_hat, before gamma/beta
  std::vector<double> inv_std;   // per channel
  NormMode mode = NormMode::kTraining;
};

struct BatchNormResult {
  Tensor3 output;
  BatchNormCache cache;
};

/// Training mode also updates params.running_mean / running_var.
BatchNormResult batchnorm_forward(const Tensor3& x, BatchNormParams& params);

struct BatchNormGrads {
  Tensor3 input;
  std::vector<double> gamma;
  std::vector<double> beta;
};

BatchNormGrads batchnorm_backward(const Tensor3& grad_out, const BatchNormCache& cache,
                                  const BatchNormParams& params);

/// Kernels laid out (out_channels, in_channels, width) row-major.
struct ConvParams {
  std::size_t out_channels = 0;
  std::size_t in_channels = 0;
  std::size_t width = 3;
  std::vector<double> kernels;
  std::vector<double> bias;

  [[nodiscard]] double kernel(std::size_t o, std::size_t c, std::size_t m) const noexcept {
    return kernels[(o * in_channels + c) * width + m];
  }
  void validate() const;
};

/// Valid cross-correlation (no flip) whose width equals the feature size,
/// so each output channel reduces a whole window to one value.
Tensor3 conv1d_forward(const Tensor3& x, const ConvParams& params);

struct ConvGrads {
  Tensor3 input;
  std::vector<double> kernels;
  std::vector<double> bias;
};

ConvGrads conv1d_backward(const Tensor3& grad_out, const Tensor3& input, const ConvParams& params);

struct LinearParams {
  std::vector<double> weights;
  double bias = 0.0;
};

/// y_b = sum_o A_o * (sum_f x(b, o, f)) + bias
std::vector<double> linear_forward(const Tensor3& x, const LinearParams& params);

struct LinearGrads {
  Tensor3 input;
  std::vector<double> weights;
  double bias = 0.0;
};

LinearGrads linear_backward(std::span<const double> grad_out, const Tensor3& input,
                            const LinearParams& params);

struct LossResult {
  double value = 0.0;
  std::vector<double> grad;  // d loss / d pred
};

LossResult mse_loss(std::span<const double> pred, std::span<const double> target);

}  // namespace dfcnn
