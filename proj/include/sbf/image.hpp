#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbf {

// Error taxonomy shared by all modules.
struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedOrder : std::domain_error {
  using std::domain_error::domain_error;
};
struct ConfigurationError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Single-channel image of double samples, stored row-major.
class Image {
 public:
  Image() = default;
  Image(int width, int height, double fill = 0.0);
  Image(int width, int height, std::vector<double> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  double& operator()(int x, int y) { return samples_[index(x, y)]; }
  double operator()(int x, int y) const { return samples_[index(x, y)]; }

  // Replicate-edge access: coordinates are clamped into the image.
  double clamped(int x, int y) const;

  std::span<double> row(int y) {
    return {samples_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<const double> row(int y) const {
    return {samples_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }

  std::span<double> samples() { return samples_; }
  std::span<const double> samples() const { return samples_; }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool all_finite() const;
  double min_value() const;
  double max_value() const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> samples_;
};

/// Board of alternating low/high squares of side `square` pixels.
Image make_checker(int width, int height, int square, double low = 0.0,
                   double high = 255.0);

}  // namespace sbf
