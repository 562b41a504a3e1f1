#include "dfcnn/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "dfcnn/error.hpp"

namespace dfcnn {

Tensor3::Tensor3(std::size_t batch, std::size_t channels, std::size_t features, double fill)
    : batch_(batch), channels_(channels), features_(features) {
  if (channels == 0 || features == 0) throw ShapeError("tensor channels and features must be >= 1");
  data_.assign(batch * channels * features, fill);
}

bool Tensor3::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace dfcnn
