#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "sbf/image.hpp"
#include "sbf/kernels.hpp"
#include "sbf/spatial.hpp"

namespace sbf {

struct FilterParams {
  double sigma_r = 30.0;
  double epsilon = 0.0;
  SpatialMode spatial = IteratedBox{3.0, 3};
  KernelFamily family = KernelFamily::RaisedCosine;
  // Window used to compute T; defaults to the spatial footprint.
  std::optional<int> window_radius;
  // Skip the T computation, e.g. to reproduce worst-case T = 255 runs.
  std::optional<double> fixed_T;
  // Pin the kernel order instead of deriving it from T.
  std::optional<int> order;
  TruncationRule rule = TruncationRule::Auto;
};

struct FilterResult {
  Image image;
  KernelPlan plan;
  int window_radius = 0;
  // Pixels whose normalizer came out non-positive and kept their input value.
  std::size_t fallback_pixels = 0;
};

/// Running numerator/denominator sums over expansion terms. Partial
/// accumulators over disjoint term sets merge by addition.
class TermAccumulator {
 public:
  TermAccumulator(int width, int height);

  void merge(const TermAccumulator& other);
  Image& numerator() { return numerator_; }
  Image& denominator() { return denominator_; }

  // numerator / denominator, falling back to `input` where the denominator
  // is not positive.
  Image resolve(const Image& input, std::size_t* fallbacks) const;

 private:
  Image numerator_;
  Image denominator_;
};

int default_window_radius(const FilterParams& params);

/// Constant-time bilateral filter with a shiftable range kernel.
///
/// T is measured with the max filter (or taken from `fixed_T`), the kernel
/// plan is chosen from T, sigma_r and epsilon, and the image is filtered one
/// cos/sin term at a time. Only a fixed number of auxiliary images is live
/// at once, whatever the order.
FilterResult shiftable_bf(const Image& img, const FilterParams& params);

// Polynomial-family variant over the monomial basis; expects samples in [0, 1].
FilterResult shiftable_bf_poly(const Image& img, const FilterParams& params);

using RangeKernel = std::function<double(double)>;

/// Brute-force bilateral filter: per pixel, a weighted sum over the spatial
/// footprint with weights spatial(x, y) * range(f(y) - f(x)). Spatial weights
/// come from line_weights(), so every SpatialMode is reproduced exactly,
/// borders included.
Image direct_bf(const Image& img, const SpatialMode& spatial,
                const RangeKernel& range, std::size_t* fallbacks = nullptr);

}  // namespace sbf
