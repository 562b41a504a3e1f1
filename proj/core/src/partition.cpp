#include "dfcnn/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dfcnn/error.hpp"

namespace dfcnn {
namespace {

// Beyond this many segments from L, adjacent extended boundaries stop being
// distinct doubles.
constexpr double kMaxSegmentOffset = 4503599627370496.0;  // 2^52

}  // namespace

std::size_t encoding_interval_count(std::size_t length) {
  if (length == 0) throw DataError("encoding partition needs a non-empty series");
  std::size_t m = 0;
  while ((std::size_t{1} << m) < length) ++m;
  return std::max<std::size_t>(m, 1);
}

double population_std(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

BoundaryGrid::BoundaryGrid(double left, double right, std::size_t m)
    : left_(left), right_(right), m_(m) {
  if (!std::isfinite(left) || !std::isfinite(right)) {
    throw NumericError("grid bounds must be finite");
  }
  if (!(left < right)) throw UsageError("grid requires left < right");
  if (m == 0) throw UsageError("grid requires at least one interval");
  width_ = (right - left) / static_cast<double>(m + 1);
  boundaries_.resize(m + 2);
  for (std::size_t k = 0; k <= m; ++k) boundaries_[k] = left + static_cast<double>(k) * width_;
  boundaries_[m + 1] = right;
}

double BoundaryGrid::boundary(std::int64_t k) const noexcept {
  if (k >= 0 && k < static_cast<std::int64_t>(boundaries_.size())) {
    return boundaries_[static_cast<std::size_t>(k)];
  }
  return left_ + static_cast<double>(k) * width_;
}

BoundaryGrid build_grid(std::span<const double> diffs) {
  if (diffs.empty()) throw DataError("cannot build a grid from an empty series");
  for (double d : diffs) {
    if (!std::isfinite(d)) throw NumericError("cannot build a grid from non-finite values");
  }
  const auto [lo, hi] = std::minmax_element(diffs.begin(), diffs.end());
  const double spread = population_std(diffs);
  double left = *lo - spread;
  double right = *hi + spread;
  if (!(left < right)) {
    left = *lo - kDegenerateHalfWidth;
    right = *lo + kDegenerateHalfWidth;
  }
  return BoundaryGrid(left, right, encoding_interval_count(diffs.size()));
}

FuzzyToken tokenize(double v, const BoundaryGrid& grid) {
  if (!std::isfinite(v)) throw NumericError("cannot tokenize a non-finite value");
  const double offset = (v - grid.left()) / grid.segment_width();
  if (!(std::abs(offset) < kMaxSegmentOffset)) {
    throw NumericError("value " + std::to_string(v) + " lies too far outside the grid");
  }
  // Start from the arithmetic guess, then settle on exact comparisons so
  // rounding in the division cannot pick the wrong neighbour.
  auto k = static_cast<std::int64_t>(std::floor(offset));
  while (grid.boundary(k) >= v) --k;
  while (grid.boundary(k + 1) < v) ++k;
  std::int64_t j = k + 1;
  while (grid.boundary(j) <= v) ++j;
  return {grid.boundary(k), v, grid.boundary(j)};
}

Tensor3 tokenize_window(std::span<const double> window, const BoundaryGrid& grid) {
  if (window.empty()) throw ShapeError("cannot tokenize an empty window");
  Tensor3 out(1, window.size(), 3);
  for (std::size_t j = 0; j < window.size(); ++j) {
    const FuzzyToken t = tokenize(window[j], grid);
    out(0, j, 0) = t.l;
    out(0, j, 1) = t.v;
    out(0, j, 2) = t.r;
  }
  return out;
}

Tensor3 tokenize_batch(const WindowBatch& windows, const BoundaryGrid& grid) {
  Tensor3 out(windows.count(), windows.lookback(), 3);
  for (std::size_t i = 0; i < windows.count(); ++i) {
    const auto w = windows.window(i);
    for (std::size_t j = 0; j < w.size(); ++j) {
      const FuzzyToken t = tokenize(w[j], grid);
      out(i, j, 0) = t.l;
      out(i, j, 1) = t.v;
      out(i, j, 2) = t.r;
    }
  }
  return out;
}

}  // namespace dfcnn
