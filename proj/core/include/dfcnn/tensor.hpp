#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dfcnn {

/// Dense row-major (batch, channels, features) array of doubles.
class Tensor3 {
 public:
  Tensor3() = default;
  /// channels and features must be >= 1; batch may be 0.
  Tensor3(std::size_t batch, std::size_t channels, std::size_t features, double fill = 0.0);

  [[nodiscard]] std::size_t batch() const noexcept { return batch_; }
  [[nodiscard]] std::size_t channels() const noexcept { return channels_; }
  [[nodiscard]] std::size_t features() const noexcept { return features_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t b, std::size_t c, std::size_t f) noexcept {
    return data_[(b * channels_ + c) * features_ + f];
  }
  double operator()(std::size_t b, std::size_t c, std::size_t f) const noexcept {
    return data_[(b * channels_ + c) * features_ + f];
  }

  [[nodiscard]] std::span<double> data() noexcept { return data_; }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  [[nodiscard]] bool all_finite() const noexcept;
  [[nodiscard]] bool same_shape(const Tensor3& other) const noexcept {
    return batch_ == other.batch_ && channels_ == other.channels_ && features_ == other.features_;
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t batch_ = 0;
  std::size_t channels_ = 1;
  std::size_t features_ = 1;
  std::vector<double> data_;
};

}  // namespace dfcnn
