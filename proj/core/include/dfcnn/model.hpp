#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfcnn/network.hpp"
#include "dfcnn/optimizer.hpp"
#include "dfcnn/partition.hpp"
#include "dfcnn/series.hpp"

namespace dfcnn {

inline constexpr std::uint64_t kDefaultSeed = 3407;

struct ModelConfig {
  std::size_t lookback = 2;
  std::size_t out = 2;  ///< convolution kernels (output channels)
  std::size_t epochs = 100;
  double learning_rate = 1e-2;
  std::uint64_t seed = kDefaultSeed;

  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Fixed training constants that are not user configuration.
struct TrainingConstants {
  NadamConstants nadam;
  PlateauConstants plateau;
  double norm_epsilon = 1e-5;
  double norm_momentum = 0.1;

  friend bool operator==(const TrainingConstants&, const TrainingConstants&) = default;
};

/**
 * @brief A trained forecaster: frozen grid, inference-mode parameters, and the
 * trailing original values needed to forecast past the training data.
 */
class FittedModel {
 public:
  FittedModel(BoundaryGrid grid, NetworkParams params, ModelConfig config,
              std::vector<double> last_values, std::vector<double> loss_history);

  [[nodiscard]] const BoundaryGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] const NetworkParams& params() const noexcept { return params_; }
  [[nodiscard]] const ModelConfig& config() const noexcept { return config_; }
  [[nodiscard]] std::span<const double> last_values() const noexcept { return last_values_; }
  [[nodiscard]] std::span<const double> loss_history() const noexcept { return loss_history_; }

  friend bool operator==(const FittedModel&, const FittedModel&) = default;

 private:
  BoundaryGrid grid_;
  NetworkParams params_;
  ModelConfig config_;
  std::vector<double> last_values_;
  std::vector<double> loss_history_;
};

/**
 * Difference, window, tokenize on a grid built from the training diffs, then
 * run `epochs` full-batch NAdam steps on the MSE of the next diff, stepping the
 * plateau scheduler on each epoch's loss. Needs lookback + 3 values; throws
 * NumericError if the loss stops being finite.
 */
FittedModel fit(const TimeSeries& series, const ModelConfig& config);

/// Diff of the trailing lookback + 1 context values -> tokens -> network -> recovery.
double predict_next(const FittedModel& model, std::span<const double> context);
double predict_next(const FittedModel& model, const TimeSeries& context);

/// Iterated predict_next, appending each prediction to the context.
std::vector<double> forecast(const FittedModel& model, std::span<const double> context,
                             std::size_t horizon);
std::vector<double> forecast(const FittedModel& model, const TimeSeries& context,
                             std::size_t horizon);

inline constexpr int kModelSchemaVersion = 1;

/// Versioned JSON document: config, grid, parameter shapes and row-major arrays.
std::string model_to_json(const FittedModel& model);
FittedModel model_from_json(std::string_view text);

void save_model(const FittedModel& model, const std::filesystem::path& path);
FittedModel load_model(const std::filesystem::path& path);

}  // namespace dfcnn
