#include "dfcnn/layers.hpp"

#include <cmath>
#include <string>

#include "dfcnn/error.hpp"

namespace dfcnn {

BatchNormParams BatchNormParams::identity(std::size_t channels) {
  BatchNormParams p;
  p.gamma.assign(channels, 1.0);
  p.beta.assign(channels, 0.0);
  p.running_mean.assign(channels, 0.0);
  p.running_var.assign(channels, 1.0);
  return p;
}

void BatchNormParams::validate() const {
  const std::size_t c = gamma.size();
  if (c == 0 || beta.size() != c || running_mean.size() != c || running_var.size() != c) {
    throw ShapeError("batch norm parameter vectors must share one non-zero length");
  }
  if (!(epsilon > 0.0)) throw UsageError("batch norm epsilon must be positive");
  if (!(momentum > 0.0 && momentum < 1.0)) throw UsageError("batch norm momentum must be in (0, 1)");
  for (double v : running_var) {
    if (!(v >= 0.0)) throw NumericError("batch norm running variance must be non-negative");
  }
}

BatchNormResult batchnorm_forward(const Tensor3& x, BatchNormParams& params) {
  params.validate();
  if (x.channels() != params.channels()) {
    throw ShapeError("batch norm expects " + std::to_string(params.channels()) +
                     " channels, got " + std::to_string(x.channels()));
  }
  if (x.size() == 0) throw ShapeError("batch norm received an empty batch");
  const std::size_t per_channel = x.batch() * x.features();
  if (params.mode == NormMode::kTraining && per_channel < 2) {
    throw ShapeError("training-mode batch norm needs more than one value per channel");
  }

  BatchNormResult r{Tensor3(x.batch(), x.channels(), x.features()),
                    {Tensor3(x.batch(), x.channels(), x.features()),
                     std::vector<double>(x.channels()), params.mode}};
  const double n = static_cast<double>(per_channel);
  for (std::size_t c = 0; c < x.channels(); ++c) {
    double mean = 0.0;
    double var = 0.0;
    if (params.mode == NormMode::kTraining) {
      for (std::size_t b = 0; b < x.batch(); ++b)
        for (std::size_t f = 0; f < x.features(); ++f) mean += x(b, c, f);
      mean /= n;
      for (std::size_t b = 0; b < x.batch(); ++b)
        for (std::size_t f = 0; f < x.features(); ++f) {
          const double d = x(b, c, f) - mean;
          var += d * d;
        }
      var /= n;
      const double m = params.momentum;
      params.running_mean[c] = (1.0 - m) * params.running_mean[c] + m * mean;
      params.running_var[c] = (1.0 - m) * params.running_var[c] + m * var * n / (n - 1.0);
    } else {
      mean = params.running_mean[c];
      var = params.running_var[c];
    }
    const double inv_std = 1.0 / std::sqrt(var + params.epsilon);
    r.cache.inv_std[c] = inv_std;
    for (std::size_t b = 0; b < x.batch(); ++b)
      for (std::size_t f = 0; f < x.features(); ++f) {
        const double xhat = (x(b, c, f) - mean) * inv_std;
        r.cache.normalized(b, c, f) = xhat;
        r.output(b, c, f) = xhat * params.gamma[c] + params.beta[c];
      }
  }
  return r;
}

BatchNormGrads batchnorm_backward(const Tensor3& grad_out, const BatchNormCache& cache,
                                  const BatchNormParams& params) {
  const Tensor3& xhat = cache.normalized;
  if (!grad_out.same_shape(xhat) || xhat.channels() != params.channels()) {
    throw ShapeError("batch norm backward shape mismatch");
  }
  BatchNormGrads g{Tensor3(xhat.batch(), xhat.channels(), xhat.features()),
                   std::vector<double>(params.channels(), 0.0),
                   std::vector<double>(params.channels(), 0.0)};
  const double n = static_cast<double>(xhat.batch() * xhat.features());
  for (std::size_t c = 0; c < xhat.channels(); ++c) {
    double sum_dy = 0.0;
    double sum_dy_xhat = 0.0;
    for (std::size_t b = 0; b < xhat.batch(); ++b)
      for (std::size_t f = 0; f < xhat.features(); ++f) {
        sum_dy += grad_out(b, c, f);
        sum_dy_xhat += grad_out(b, c, f) * xhat(b, c, f);
      }
    g.gamma[c] = sum_dy_xhat;
    g.beta[c] = sum_dy;
    const double scale = params.gamma[c] * cache.inv_std[c];
    for (std::size_t b = 0; b < xhat.batch(); ++b)
      for (std::size_t f = 0; f < xhat.features(); ++f) {
        if (cache.mode == NormMode::kTraining) {
          g.input(b, c, f) =
              scale / n * (n * grad_out(b, c, f) - sum_dy - xhat(b, c, f) * sum_dy_xhat);
        } else {
          g.input(b, c, f) = scale * grad_out(b, c, f);
        }
      }
  }
  return g;
}

void ConvParams::validate() const {
  if (out_channels == 0 || in_channels == 0 || width == 0) {
    throw ShapeError("convolution dimensions must be positive");
  }
  if (kernels.size() != out_channels * in_channels * width || bias.size() != out_channels) {
    throw ShapeError("convolution parameter storage does not match its dimensions");
  }
}

Tensor3 conv1d_forward(const Tensor3& x, const ConvParams& params) {
  params.validate();
  if (x.channels() != params.in_channels || x.features() != params.width) {
    throw ShapeError("convolution expects input (batch, " + std::to_string(params.in_channels) +
                     ", " + std::to_string(params.width) + ")");
  }
  Tensor3 out(x.batch(), params.out_channels, 1);
  for (std::size_t b = 0; b < x.batch(); ++b)
    for (std::size_t o = 0; o < params.out_channels; ++o) {
      double acc = params.bias[o];
      for (std::size_t c = 0; c < params.in_channels; ++c)
        for (std::size_t m = 0; m < params.width; ++m) acc += x(b, c, m) * params.kernel(o, c, m);
      out(b, o, 0) = acc;
    }
  return out;
}

ConvGrads conv1d_backward(const Tensor3& grad_out, const Tensor3& input, const ConvParams& params) {
  params.validate();
  if (grad_out.batch() != input.batch() || grad_out.channels() != params.out_channels ||
      grad_out.features() != 1 || input.channels() != params.in_channels ||
      input.features() != params.width) {
    throw ShapeError("convolution backward shape mismatch");
  }
  ConvGrads g{Tensor3(input.batch(), input.channels(), input.features()),
              std::vector<double>(params.kernels.size(), 0.0),
              std::vector<double>(params.out_channels, 0.0)};
  for (std::size_t b = 0; b < input.batch(); ++b)
    for (std::size_t o = 0; o < params.out_channels; ++o) {
      const double go = grad_out(b, o, 0);
      g.bias[o] += go;
      for (std::size_t c = 0; c < params.in_channels; ++c)
        for (std::size_t m = 0; m < params.width; ++m) {
          g.kernels[(o * params.in_channels + c) * params.width + m] += go * input(b, c, m);
          g.input(b, c, m) += go * params.kernel(o, c, m);
        }
    }
  return g;
}

std::vector<double> linear_forward(const Tensor3& x, const LinearParams& params) {
  if (x.channels() != params.weights.size() || x.features() != 1) {
    throw ShapeError("linear layer expects input (batch, " +
                     std::to_string(params.weights.size()) + ", 1)");
  }
  std::vector<double> y(x.batch(), params.bias);
  for (std::size_t b = 0; b < x.batch(); ++b)
    for (std::size_t o = 0; o < x.channels(); ++o) {
      double s = 0.0;
      for (std::size_t f = 0; f < x.features(); ++f) s += x(b, o, f);
      y[b] += params.weights[o] * s;
    }
  return y;
}

LinearGrads linear_backward(std::span<const double> grad_out, const Tensor3& input,
                            const LinearParams& params) {
  if (grad_out.size() != input.batch() || input.channels() != params.weights.size()) {
    throw ShapeError("linear backward shape mismatch");
  }
  LinearGrads g{Tensor3(input.batch(), input.channels(), input.features()),
                std::vector<double>(params.weights.size(), 0.0), 0.0};
  for (std::size_t b = 0; b < input.batch(); ++b) {
    g.bias += grad_out[b];
    for (std::size_t o = 0; o < input.channels(); ++o) {
      double s = 0.0;
      for (std::size_t f = 0; f < input.features(); ++f) {
        s += input(b, o, f);
        g.input(b, o, f) = grad_out[b] * params.weights[o];
      }
      g.weights[o] += grad_out[b] * s;
    }
  }
  return g;
}

LossResult mse_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw ShapeError("mse: prediction and target lengths differ (" + std::to_string(pred.size()) +
                     " vs " + std::to_string(target.size()) + ")");
  }
  if (pred.empty()) throw ShapeError("mse: empty input");
  LossResult r{0.0, std::vector<double>(pred.size())};
  const double n = static_cast<double>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    r.value += d * d;
    r.grad[i] = 2.0 * d / n;
  }
  r.value /= n;
  return r;
}

}  // namespace dfcnn
