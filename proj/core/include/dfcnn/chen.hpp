#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dfcnn/series.hpp"

namespace dfcnn {

/**
 * Chen first-order model settings. Unset fields take data-driven defaults:
 * sigma is the population standard deviation of the fitted values and the
 * interval count is m + 1 with m from encoding_interval_count().
 */
struct ChenConfig {
  std::optional<double> sigma;
  std::optional<std::size_t> interval_count;

  /// Throws UsageError for sigma < 0 or an interval count below 2.
  void validate() const;
};

/**
 * @brief Fitted Chen first-order model over U = [min - sigma, max + sigma].
 *
 * U is cut into k equal intervals (right-open, the last one right-closed).
 * Membership is crisp. Rules map each antecedent interval to the sorted set
 * of consequent intervals observed in consecutive training pairs.
 */
class ChenModel {
 public:
  ChenModel(double lower, double upper, std::size_t k,
            std::vector<std::vector<std::size_t>> rules);

  [[nodiscard]] double lower() const noexcept { return lower_; }
  [[nodiscard]] double upper() const noexcept { return upper_; }
  [[nodiscard]] std::size_t interval_count() const noexcept { return rules_.size(); }
  [[nodiscard]] double interval_width() const noexcept { return width_; }
  [[nodiscard]] double midpoint(std::size_t interval) const;
  [[nodiscard]] bool in_domain(double v) const noexcept { return v >= lower_ && v <= upper_; }

  /// Interval holding v; values outside U clamp to the first or last interval.
  [[nodiscard]] std::size_t interval_of(double v) const noexcept;

  [[nodiscard]] const std::vector<std::vector<std::size_t>>& rules() const noexcept {
    return rules_;
  }

  friend bool operator==(const ChenModel&, const ChenModel&) = default;

 private:
  double lower_;
  double upper_;
  double width_;
  std::vector<std::vector<std::size_t>> rules_;
};

ChenModel chen_fit(std::span<const double> values, const ChenConfig& config);
ChenModel chen_fit(const TimeSeries& series, const ChenConfig& config);

/**
 * One-step forecast: midpoint of the single consequent, mean of midpoints
 * for several, or the antecedent's own midpoint when it never fired.
 */
double chen_forecast_next(const ChenModel& model, double current_value);

/// Iterated undifferenced forecast, each output fed back as the next input.
std::vector<double> chen_forecast(const ChenModel& model, double last_value, std::size_t horizon);

/// Chen on the differenced series, recovering each predicted diff onto the
/// running level and feeding the predicted diff back in.
std::vector<double> chen_with_difference(const TimeSeries& series, const ChenConfig& config,
                                         std::size_t horizon);

struct FuzzyFailureReport {
  bool flagged = false;
  double out_of_domain_fraction = 0.0;
  std::size_t above = 0;
  std::size_t below = 0;
};

/// Flags test data that leaves U and collapses onto a single edge forecast.
FuzzyFailureReport detect_fuzzy_failure(const ChenModel& model, const TimeSeries& test);

}  // namespace dfcnn
