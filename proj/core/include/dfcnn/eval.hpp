#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfcnn/chen.hpp"
#include "dfcnn/dataset.hpp"
#include "dfcnn/model.hpp"
#include "dfcnn/series.hpp"

namespace dfcnn {

enum class Method { kDfcnn, kChen, kChenDiff, kNaive };

inline constexpr Method kAllMethods[] = {Method::kDfcnn, Method::kChen, Method::kChenDiff,
                                         Method::kNaive};

std::string_view method_name(Method m) noexcept;
/// Throws UsageError naming the valid methods.
Method parse_method(std::string_view name);
/// Comma-separated list; duplicates are dropped, order is kept.
std::vector<Method> parse_method_list(std::string_view list);

/// Mean absolute error. Throws ShapeError on length mismatch or empty input.
double mae(std::span<const double> pred, std::span<const double> actual);

/// Repeats the last training value `horizon` times.
std::vector<double> naive_baseline(const TimeSeries& train, std::size_t horizon);

/// Indices strictly outside (mu - 3 sigma, mu + 3 sigma), population sigma.
std::vector<std::size_t> zscore_outliers(std::span<const double> errors);

/// Pearson correlation; nullopt when either side has zero variance or n < 2.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct BenchConfig {
  ModelConfig model;
  ChenConfig chen;
  /// Overrides the dataset horizon; when both are unset an 8:2 ratio split applies.
  std::optional<SplitSpec> split;
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  unsigned parallel = 1;
  bool stamp_time = true;
};

/// Inclusive hyperparameter ranges for sweep().
struct SweepRanges {
  std::size_t lookback_min = 1;
  std::size_t lookback_max = 10;
  std::size_t out_min = 1;
  std::size_t out_max = 10;

  void validate() const;
};

// ---- report ---------------------------------------------------------------

inline constexpr int kReportSchemaVersion = 1;

struct SeriesScore {
  std::string id;
  std::optional<double> mae;  ///< unset when the method failed on this series
  bool flagged = false;
  std::string error;

  friend bool operator==(const SeriesScore&, const SeriesScore&) = default;
};

struct MethodReport {
  std::string name;
  std::vector<SeriesScore> per_series;
  std::optional<double> mean_mae;

  friend bool operator==(const MethodReport&, const MethodReport&) = default;
};

/// Everything needed to reproduce a run, echoed into the report.
struct ConfigEcho {
  ModelConfig model;
  TrainingConstants training;
  std::optional<double> chen_sigma;               ///< unset: population std
  std::optional<std::size_t> chen_interval_count;  ///< unset: m + 1
  std::string split_mode = "ratio";               ///< ratio | horizon
  double split_ratio = 0.8;
  std::size_t split_horizon = 0;
  std::vector<std::string> methods;

  friend bool operator==(const ConfigEcho&, const ConfigEcho&) = default;
};

struct SweepGrid {
  std::vector<std::size_t> lookbacks;
  std::vector<std::size_t> outs;
  /// grid[i][j]: mean DFCNN MAE for lookbacks[i], outs[j]; unset if the cell failed.
  std::vector<std::vector<std::optional<double>>> grid;
  double corr_lookback = 0.0;
  double corr_out = 0.0;
  bool corr_lookback_defined = false;
  bool corr_out_defined = false;
  std::string dominant;  ///< lookback | out | undetermined

  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

struct EvalReport {
  int schema_version = kReportSchemaVersion;
  std::string dataset;
  ConfigEcho config;
  std::vector<MethodReport> methods;
  std::optional<SweepGrid> sweep;
  std::string generated_at;  ///< UTC ISO-8601; empty when not stamped

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/**
 * Per series: split, fit each method on the training part, forecast the whole
 * test part (fit once, iterated one-step forecasts) and score MAE. Failures
 * are recorded per (series, method). Z-test flags are computed per method
 * over that method's per-series MAEs.
 */
EvalReport run_benchmark(const Dataset& dataset, const BenchConfig& config);

/// DFCNN over every (lookback, out) cell, each an independent fit with the
/// configured base seed; reports the mean-MAE grid and Pearson correlations.
EvalReport sweep(const Dataset& dataset, const SweepRanges& ranges, const BenchConfig& config);

}  // namespace dfcnn
