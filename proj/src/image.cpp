#include "sbf/image.hpp"

#include <algorithm>
#include <cmath>

namespace sbf {

Image::Image(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0)
    throw InvalidParameter("image dimensions must be positive");
  samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

Image::Image(int width, int height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  if (width <= 0 || height <= 0)
    throw InvalidParameter("image dimensions must be positive");
  if (samples_.size() != static_cast<std::size_t>(width) * height)
    throw InvalidParameter("sample count does not match width*height");
}

double Image::clamped(int x, int y) const {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return samples_[index(x, y)];
}

bool Image::all_finite() const {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](double v) { return std::isfinite(v); });
}

double Image::min_value() const {
  return *std::min_element(samples_.begin(), samples_.end());
}

double Image::max_value() const {
  return *std::max_element(samples_.begin(), samples_.end());
}

Image make_checker(int width, int height, int square, double low,
                   double high) {
  if (square <= 0) throw InvalidParameter("checker square must be positive");
  Image img(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      img(x, y) = ((x / square + y / square) % 2 == 0) ? low : high;
  return img;
}

}  // namespace sbf
