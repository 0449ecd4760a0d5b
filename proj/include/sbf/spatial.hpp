#pragma once

#include <variant>
#include <vector>

#include "sbf/image.hpp"

namespace sbf {

struct Box {
  int radius = 1;
};

// Gaussian approximated by `passes` identical boxes.
struct IteratedBox {
  double sigma_s = 1.0;
  int passes = 3;
};

// Sampled Gaussian truncated at `radius`.
struct FirGaussian {
  double sigma_s = 1.0;
  int radius = 3;
};

using SpatialMode = std::variant<Box, IteratedBox, FirGaussian>;

/// One stage of an iterated box: weight 1 on |k| <= radius and `tail` in
/// [0, 1) on |k| = radius + 1. The fractional tail lets each stage carry
/// exactly sigma_s^2 / passes of variance.
struct BoxStage {
  int radius = 0;
  double tail = 0.0;
};

BoxStage iterated_box_stage(double sigma_s, int passes);

void validate(const SpatialMode& mode);

// Half-width of the filter footprint: output at x depends only on the
// (2R+1)^2 square around x.
int support_radius(const SpatialMode& mode);

/// Normalized box mean over the clamped (2r+1)^2 window, O(1) per pixel.
Image box_filter(const Image& img, int radius);
Image iterated_box_gaussian(const Image& img, double sigma_s, int passes = 3);
Image fir_gaussian(const Image& img, double sigma_s, int radius);

// Every mode is separable; spatial_filter(img) == filter_cols(filter_rows(img)).
Image filter_rows(const Image& img, const SpatialMode& mode);
Image filter_cols(const Image& img, const SpatialMode& mode);
Image spatial_filter(const Image& img, const SpatialMode& mode);

/// Dense weight matrix of the 1D filter a mode applies along a line of
/// `length` samples: out[i] = sum_j weight(i, j) in[j], rows summing to one
/// (clamped-window renormalization included). Built from the kernel
/// definitions, not from the running-sum code, so the direct oracles can use
/// it as an independent reference.
class LineWeights {
 public:
  LineWeights(int length, std::vector<double> dense)
      : length_(length), dense_(std::move(dense)) {}
  int length() const { return length_; }
  double operator()(int i, int j) const {
    return dense_[static_cast<std::size_t>(i) * length_ + j];
  }

 private:
  int length_;
  std::vector<double> dense_;
};

LineWeights line_weights(const SpatialMode& mode, int length);

}  // namespace sbf
