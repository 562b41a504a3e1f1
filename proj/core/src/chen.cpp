#include "dfcnn/chen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dfcnn/error.hpp"
#include "dfcnn/partition.hpp"

namespace dfcnn {

void ChenConfig::validate() const {
  if (sigma && !(std::isfinite(*sigma) && *sigma >= 0.0)) {
    throw UsageError("chen sigma must be a finite non-negative number");
  }
  if (interval_count && *interval_count < 2) {
    throw UsageError("chen interval count must be at least 2");
  }
}

ChenModel::ChenModel(double lower, double upper, std::size_t k,
                     std::vector<std::vector<std::size_t>> rules)
    : lower_(lower), upper_(upper), rules_(std::move(rules)) {
  if (!(lower < upper)) throw UsageError("chen universe requires lower < upper");
  if (k < 2 || rules_.size() != k) throw UsageError("chen model needs k >= 2 rule slots");
  width_ = (upper - lower) / static_cast<double>(k);
}

double ChenModel::midpoint(std::size_t interval) const {
  if (interval >= interval_count()) throw UsageError("interval index out of range");
  return lower_ + (static_cast<double>(interval) + 0.5) * width_;
}

std::size_t ChenModel::interval_of(double v) const noexcept {
  if (!(v > lower_)) return 0;
  const double pos = std::floor((v - lower_) / width_);
  const auto last = static_cast<double>(interval_count() - 1);
  return static_cast<std::size_t>(std::min(pos, last));
}

ChenModel chen_fit(std::span<const double> values, const ChenConfig& config) {
  config.validate();
  if (values.size() < 2) {
    throw DataError("chen needs at least 2 values, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericError("chen cannot fit non-finite values");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double sigma = config.sigma.value_or(population_std(values));
  double lower = *lo - sigma;
  double upper = *hi + sigma;
  if (!(lower < upper)) {
    lower = *lo - kDegenerateHalfWidth;
    upper = *lo + kDegenerateHalfWidth;
  }
  const std::size_t k =
      config.interval_count.value_or(encoding_interval_count(values.size()) + 1);

  // Build with empty rules first so interval_of() is available.
  ChenModel model(lower, upper, k, std::vector<std::vector<std::size_t>>(k));
  std::vector<std::vector<std::size_t>> rules(k);
  for (std::size_t i = 1; i < values.size(); ++i) {
    rules[model.interval_of(values[i - 1])].push_back(model.interval_of(values[i]));
  }
  for (auto& consequents : rules) {
    std::sort(consequents.begin(), consequents.end());
    consequents.erase(std::unique(consequents.begin(), consequents.end()), consequents.end());
  }
  return ChenModel(lower, upper, k, std::move(rules));
}

ChenModel chen_fit(const TimeSeries& series, const ChenConfig& config) {
  return chen_fit(series.values(), config);
}

double chen_forecast_next(const ChenModel& model, double current_value) {
  if (!std::isfinite(current_value)) throw NumericError("chen forecast input is not finite");
  const std::size_t antecedent = model.interval_of(current_value);
  const auto& consequents = model.rules()[antecedent];
  if (consequents.empty()) return model.midpoint(antecedent);
  double sum = 0.0;
  for (std::size_t c : consequents) sum += model.midpoint(c);
  return sum / static_cast<double>(consequents.size());
}

std::vector<double> chen_forecast(const ChenModel& model, double last_value, std::size_t horizon) {
  std::vector<double> out;
  out.reserve(horizon);
  double current = last_value;
  for (std::size_t h = 0; h < horizon; ++h) {
    current = chen_forecast_next(model, current);
    out.push_back(current);
  }
  return out;
}

std::vector<double> chen_with_difference(const TimeSeries& series, const ChenConfig& config,
                                         std::size_t horizon) {
  const DifferencedSeries d = difference(series);
  const ChenModel model = chen_fit(d.diffs, config);
  std::vector<double> out;
  out.reserve(horizon);
  double level = series.back();
  double diff = d.diffs.back();
  for (std::size_t h = 0; h < horizon; ++h) {
    diff = chen_forecast_next(model, diff);
    level = recover(diff, level);
    out.push_back(level);
  }
  return out;
}

FuzzyFailureReport detect_fuzzy_failure(const ChenModel& model, const TimeSeries& test) {
  FuzzyFailureReport report;
  std::optional<double> above_forecast;
  std::optional<double> below_forecast;
  bool collapsed = true;
  for (double v : test.values()) {
    if (model.in_domain(v)) continue;
    const double f = chen_forecast_next(model, v);
    auto& seen = v > model.upper() ? above_forecast : below_forecast;
    (v > model.upper() ? report.above : report.below) += 1;
    if (seen && *seen != f) collapsed = false;
    seen = f;
  }
  const std::size_t outside = report.above + report.below;
  report.out_of_domain_fraction =
      static_cast<double>(outside) / static_cast<double>(test.size());
  report.flagged = outside > 0 && collapsed;
  return report;
}

}  // namespace dfcnn
