#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dfcnn {

/// How the integer time labels of a series should be rendered.
enum class TimeKind {
  kIndex,     ///< plain integer index
  kDate,      ///< seconds since epoch, always at midnight UTC (YYYY-MM-DD)
  kDateTime,  ///< seconds since epoch (YYYY-MM-DDTHH:MM:SSZ)
};

/**
 * @brief Ordered (time, value) observations.
 *
 * Times are labels only: they must be strictly increasing but are never used
 * in any numeric computation. Values are finite doubles. A series always
 * holds at least one point.
 */
class TimeSeries {
 public:
  /// Validates length, ordering and finiteness; throws DataError / NumericError.
  TimeSeries(std::vector<std::int64_t> times, std::vector<double> values,
             TimeKind kind = TimeKind::kIndex);

  /// Series with times 0, 1, ..., n-1.
  static TimeSeries from_values(std::vector<double> values);

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<const std::int64_t> times() const noexcept { return times_; }
  [[nodiscard]] TimeKind time_kind() const noexcept { return kind_; }
  [[nodiscard]] double back() const noexcept { return values_.back(); }

  /// Contiguous sub-series [first, first + count).
  [[nodiscard]] TimeSeries slice(std::size_t first, std::size_t count) const;

  /// The label following the last one: last + (last - previous), or last + 1.
  [[nodiscard]] std::int64_t next_time(std::int64_t after) const noexcept;

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  std::vector<std::int64_t> times_;
  std::vector<double> values_;
  TimeKind kind_;
};

/// Renders a time label according to its kind.
std::string format_time(std::int64_t t, TimeKind kind);

/// First original value plus the n-1 successive differences.
struct DifferencedSeries {
  double head = 0.0;
  std::vector<double> diffs;
};

/// Supervised (window, next diff) pairs, windows stored row-major.
class WindowBatch {
 public:
  WindowBatch(std::size_t lookback, std::vector<double> windows, std::vector<double> targets);

  [[nodiscard]] std::size_t count() const noexcept { return targets_.size(); }
  [[nodiscard]] std::size_t lookback() const noexcept { return lookback_; }
  [[nodiscard]] std::span<const double> window(std::size_t i) const;
  [[nodiscard]] std::span<const double> targets() const noexcept { return targets_; }
  [[nodiscard]] std::span<const double> flat_windows() const noexcept { return windows_; }

 private:
  std::size_t lookback_;
  std::vector<double> windows_;
  std::vector<double> targets_;
};

/// Train/test split request: a training ratio in (0, 1) or a reserved horizon.
class SplitSpec {
 public:
  enum class Mode { kRatio, kHorizon };

  static SplitSpec ratio(double r);
  static SplitSpec horizon(std::size_t h);

  [[nodiscard]] Mode mode() const noexcept { return mode_; }
  [[nodiscard]] double train_ratio() const noexcept { return ratio_; }
  [[nodiscard]] std::size_t test_horizon() const noexcept { return horizon_; }

 private:
  SplitSpec(Mode mode, double ratio, std::size_t horizon)
      : mode_(mode), ratio_(ratio), horizon_(horizon) {}

  Mode mode_;
  double ratio_;
  std::size_t horizon_;
};

DifferencedSeries difference(const TimeSeries& series);
DifferencedSeries difference(std::span<const double> values);

/// Adds a predicted difference back onto the last observed value.
double recover(double predicted_diff, double last_original);

/// Cumulative recovery of every original value from head and diffs.
std::vector<double> integrate(const DifferencedSeries& differenced);

WindowBatch sliding_windows(std::span<const double> diffs, std::size_t lookback);

/**
 * Contiguous prefix/suffix split. Ratio mode keeps floor(r * n) points for
 * training; horizon mode reserves the last h points. The training part must
 * keep at least lookback + 2 differences (lookback + 3 values) and the test
 * part at least one value.
 */
std::pair<TimeSeries, TimeSeries> split_train_test(const TimeSeries& series,
                                                   const SplitSpec& spec,
                                                   std::size_t lookback);

}  // namespace dfcnn
