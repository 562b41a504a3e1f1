#include "dfcnn/model.hpp"

#include <cmath>
#include <string>

#include "dfcnn/error.hpp"

namespace dfcnn {

void ModelConfig::validate() const {
  if (lookback == 0) throw UsageError("lookback must be at least 1");
  if (out == 0) throw UsageError("out must be at least 1");
  if (epochs == 0) throw UsageError("epochs must be at least 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw UsageError("learning rate must be a positive finite number");
  }
}

FittedModel::FittedModel(BoundaryGrid grid, NetworkParams params, ModelConfig config,
                         std::vector<double> last_values, std::vector<double> loss_history)
    : grid_(std::move(grid)),
      params_(std::move(params)),
      config_(config),
      last_values_(std::move(last_values)),
      loss_history_(std::move(loss_history)) {
  config_.validate();
  if (params_.lookback() != config_.lookback || params_.out_channels() != config_.out) {
    throw ShapeError("model parameters do not match the model configuration");
  }
  if (last_values_.size() < config_.lookback + 1) {
    throw DataError("model must retain at least lookback + 1 trailing values");
  }
}

FittedModel fit(const TimeSeries& series, const ModelConfig& config) {
  config.validate();
  if (series.size() < config.lookback + 3) {
    throw DataError("fit needs at least lookback + 3 = " + std::to_string(config.lookback + 3) +
                    " values, got " + std::to_string(series.size()));
  }
  const DifferencedSeries d = difference(series);
  BoundaryGrid grid = build_grid(d.diffs);
  const WindowBatch windows = sliding_windows(d.diffs, config.lookback);
  const Tensor3 tokens = tokenize_batch(windows, grid);

  const TrainingConstants constants;
  NetworkParams init = init_params(config.lookback, config.out, config.seed);
  init.norm.epsilon = constants.norm_epsilon;
  init.norm.momentum = constants.norm_momentum;
  init.norm.mode = NormMode::kTraining;
  Network net(std::move(init));

  const auto views = net.params().trainable();
  OptimizerState opt =
      make_optimizer_state(views, config.learning_rate, constants.nadam, constants.plateau);

  std::vector<double> history;
  history.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const std::vector<double> pred = net.forward(tokens);
    const LossResult loss = mse_loss(pred, windows.targets());
    if (!std::isfinite(loss.value)) {
      throw NumericError("training diverged: loss is not finite at epoch " +
                         std::to_string(epoch + 1) + " (lr " +
                         std::to_string(opt.learning_rate) + ")");
    }
    const Gradients grads = net.backward(loss.grad);
    nadam_step(views, grads.trainable(), opt);
    plateau_scheduler_step(opt, loss.value);
    history.push_back(loss.value);
  }

  NetworkParams trained = net.params();
  trained.norm.mode = NormMode::kInference;
  const auto values = series.values();
  std::vector<double> tail(values.end() - static_cast<std::ptrdiff_t>(config.lookback + 1),
                           values.end());
  return FittedModel(std::move(grid), std::move(trained), config, std::move(tail),
                     std::move(history));
}

double predict_next(const FittedModel& model, std::span<const double> context) {
  const std::size_t need = model.config().lookback + 1;
  if (context.size() < need) {
    throw DataError("prediction needs at least lookback + 1 = " + std::to_string(need) +
                    " context values, got " + std::to_string(context.size()));
  }
  const DifferencedSeries d = difference(context.subspan(context.size() - need));
  const Tensor3 tokens = tokenize_window(d.diffs, model.grid());
  const double diff = infer(model.params(), tokens).front();
  if (!std::isfinite(diff)) throw NumericError("network produced a non-finite prediction");
  return recover(diff, context.back());
}

double predict_next(const FittedModel& model, const TimeSeries& context) {
  return predict_next(model, context.values());
}

std::vector<double> forecast(const FittedModel& model, std::span<const double> context,
                             std::size_t horizon) {
  const std::size_t need = model.config().lookback + 1;
  if (context.size() < need) {
    throw DataError("forecast needs at least lookback + 1 = " + std::to_string(need) +
                    " context values, got " + std::to_string(context.size()));
  }
  std::vector<double> rolling(context.end() - static_cast<std::ptrdiff_t>(need), context.end());
  std::vector<double> out;
  out.reserve(horizon);
  for (std::size_t h = 0; h < horizon; ++h) {
    const double next = predict_next(model, rolling);
    out.push_back(next);
    rolling.erase(rolling.begin());
    rolling.push_back(next);
  }
  return out;
}

std::vector<double> forecast(const FittedModel& model, const TimeSeries& context,
                             std::size_t horizon) {
  return forecast(model, context.values(), horizon);
}

}  // namespace dfcnn
