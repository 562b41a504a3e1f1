#include "dfcnn/series.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "dfcnn/error.hpp"

namespace dfcnn {
namespace {

// Howard Hinnant's civil_from_days.
struct Civil {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

Civil civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2 ? 1 : 0), m, d};
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

TimeSeries::TimeSeries(std::vector<std::int64_t> times, std::vector<double> values, TimeKind kind)
    : times_(std::move(times)), values_(std::move(values)), kind_(kind) {
  if (values_.empty()) throw DataError("time series must contain at least one point");
  if (times_.size() != values_.size()) {
    throw DataError("time series has " + std::to_string(times_.size()) + " time labels but " +
                    std::to_string(values_.size()) + " values");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw NumericError("time series value at position " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && times_[i] <= times_[i - 1]) {
      throw DataError("time labels must be strictly increasing (position " + std::to_string(i) +
                      ")");
    }
  }
}

TimeSeries TimeSeries::from_values(std::vector<double> values) {
  std::vector<std::int64_t> times(values.size());
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<std::int64_t>(i);
  return TimeSeries(std::move(times), std::move(values));
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > size()) throw DataError("slice out of range");
  const auto f = static_cast<std::ptrdiff_t>(first);
  const auto c = static_cast<std::ptrdiff_t>(count);
  return TimeSeries({times_.begin() + f, times_.begin() + f + c},
                    {values_.begin() + f, values_.begin() + f + c}, kind_);
}

std::int64_t TimeSeries::next_time(std::int64_t after) const noexcept {
  if (times_.size() < 2) return after + 1;
  return after + (times_[times_.size() - 1] - times_[times_.size() - 2]);
}

std::string format_time(std::int64_t t, TimeKind kind) {
  if (kind == TimeKind::kIndex) return std::to_string(t);
  const std::int64_t days = floor_div(t, 86400);
  const std::int64_t secs = t - days * 86400;
  const Civil c = civil_from_days(days);
  char buf[64];
  if (kind == TimeKind::kDate) {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u", static_cast<long long>(c.year), c.month,
                  c.day);
  } else {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(c.year), c.month, c.day,
                  static_cast<long long>(secs / 3600), static_cast<long long>(secs / 60 % 60),
                  static_cast<long long>(secs % 60));
  }
  return buf;
}

WindowBatch::WindowBatch(std::size_t lookback, std::vector<double> windows,
                         std::vector<double> targets)
    : lookback_(lookback), windows_(std::move(windows)), targets_(std::move(targets)) {
  if (lookback_ == 0) throw UsageError("lookback must be positive");
  if (windows_.size() != targets_.size() * lookback_) {
    throw ShapeError("window storage does not match count * lookback");
  }
}

std::span<const double> WindowBatch::window(std::size_t i) const {
  if (i >= count()) throw ShapeError("window index out of range");
  return std::span<const double>(windows_).subspan(i * lookback_, lookback_);
}

SplitSpec SplitSpec::ratio(double r) {
  if (!(r > 0.0 && r < 1.0)) throw UsageError("split ratio must lie strictly between 0 and 1");
  return SplitSpec(Mode::kRatio, r, 0);
}

SplitSpec SplitSpec::horizon(std::size_t h) {
  if (h == 0) throw UsageError("split horizon must be at least 1");
  return SplitSpec(Mode::kHorizon, 0.0, h);
}

DifferencedSeries difference(std::span<const double> values) {
  if (values.size() < 2) {
    throw DataError("differencing needs at least 2 values, got " + std::to_string(values.size()));
  }
  DifferencedSeries out;
  out.head = values.front();
  out.diffs.reserve(values.size() - 1);
  for (std::size_t i = 1; i < values.size(); ++i) out.diffs.push_back(values[i] - values[i - 1]);
  return out;
}

DifferencedSeries difference(const TimeSeries& series) { return difference(series.values()); }

double recover(double predicted_diff, double last_original) {
  if (!std::isfinite(predicted_diff) || !std::isfinite(last_original)) {
    throw NumericError("recover: inputs must be finite");
  }
  return predicted_diff + last_original;
}

std::vector<double> integrate(const DifferencedSeries& differenced) {
  std::vector<double> values;
  values.reserve(differenced.diffs.size() + 1);
  values.push_back(differenced.head);
  for (double d : differenced.diffs) values.push_back(recover(d, values.back()));
  return values;
}

WindowBatch sliding_windows(std::span<const double> diffs, std::size_t lookback) {
  if (lookback == 0) throw UsageError("lookback must be positive");
  if (diffs.size() < lookback + 1) {
    throw DataError("sliding windows need at least lookback + 1 = " +
                    std::to_string(lookback + 1) + " differences, got " +
                    std::to_string(diffs.size()));
  }
  const std::size_t count = diffs.size() - lookback;
  std::vector<double> windows;
  windows.reserve(count * lookback);
  std::vector<double> targets;
  targets.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    windows.insert(windows.end(), diffs.begin() + static_cast<std::ptrdiff_t>(i),
                   diffs.begin() + static_cast<std::ptrdiff_t>(i + lookback));
    targets.push_back(diffs[i + lookback]);
  }
  return WindowBatch(lookback, std::move(windows), std::move(targets));
}

std::pair<TimeSeries, TimeSeries> split_train_test(const TimeSeries& series,
                                                   const SplitSpec& spec,
                                                   std::size_t lookback) {
  const std::size_t n = series.size();
  std::size_t train = 0;
  if (spec.mode() == SplitSpec::Mode::kRatio) {
    // The nudge keeps products such as 0.29 * 100 from flooring one short.
    train = static_cast<std::size_t>(std::floor(spec.train_ratio() * static_cast<double>(n) + 1e-9));
  } else {
    train = spec.test_horizon() < n ? n - spec.test_horizon() : 0;
  }
  const std::size_t min_train = lookback + 3;
  if (train < min_train || train >= n) {
    throw DataError("series of length " + std::to_string(n) + " is too short to split: training part has " +
                    std::to_string(train) + " values, need at least " + std::to_string(min_train) +
                    " plus a non-empty test part");
  }
  return {series.slice(0, train), series.slice(train, n - train)};
}

}  // namespace dfcnn
