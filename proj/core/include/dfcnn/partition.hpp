#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dfcnn/series.hpp"
#include "dfcnn/tensor.hpp"

namespace dfcnn {

/// Half-width used when every difference is identical (zero spread).
inline constexpr double kDegenerateHalfWidth = 1.0;

/// Number of partial-coincident intervals for a series of `length` values:
/// the smallest m with 2^m >= length, and at least 1.
std::size_t encoding_interval_count(std::size_t length);

/// Population standard deviation (divides by the length).
double population_std(std::span<const double> values);

/**
 * @brief Frozen, uniformly spaced boundaries over the domain [L, R].
 *
 * Holds m + 2 boundaries, i.e. m + 1 equal segments. Boundaries outside the
 * stored range are defined virtually as L + k * segment_width for any
 * integer k < 0 or k > m + 1; tokenization uses them for values outside
 * [L, R] instead of clamping.
 */
class BoundaryGrid {
 public:
  /// Explicit grid; throws UsageError unless left < right and m >= 1.
  BoundaryGrid(double left, double right, std::size_t m);

  [[nodiscard]] double left() const noexcept { return left_; }
  [[nodiscard]] double right() const noexcept { return right_; }
  [[nodiscard]] std::size_t m() const noexcept { return m_; }
  [[nodiscard]] double segment_width() const noexcept { return width_; }
  [[nodiscard]] std::span<const double> boundaries() const noexcept { return boundaries_; }

  /// Boundary k on the extended grid (k may be negative or past m + 1).
  [[nodiscard]] double boundary(std::int64_t k) const noexcept;

  friend bool operator==(const BoundaryGrid&, const BoundaryGrid&) = default;

 private:
  double left_;
  double right_;
  std::size_t m_;
  double width_;
  std::vector<double> boundaries_;
};

/// (l, v, r): a value with the nearest boundary strictly below and above it.
struct FuzzyToken {
  double l;
  double v;
  double r;

  friend bool operator==(const FuzzyToken&, const FuzzyToken&) = default;
};

/**
 * Builds the encoding partition of a differenced series: L = min - std,
 * R = max + std, m = encoding_interval_count(len). A constant input falls
 * back to [v - 1, v + 1].
 */
BoundaryGrid build_grid(std::span<const double> diffs);

/// A boundary equal to v is skipped, so l < v < r always holds.
FuzzyToken tokenize(double v, const BoundaryGrid& grid);

/// Shape (count, lookback, 3); element (i, j, :) is tokenize(window i, slot j).
Tensor3 tokenize_batch(const WindowBatch& windows, const BoundaryGrid& grid);

/// Single window version used at prediction time, shape (1, lookback, 3).
Tensor3 tokenize_window(std::span<const double> window, const BoundaryGrid& grid);

}  // namespace dfcnn
