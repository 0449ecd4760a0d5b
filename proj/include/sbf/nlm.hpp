#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sbf/bilateral.hpp"
#include "sbf/image.hpp"
#include "sbf/kernels.hpp"
#include "sbf/spatial.hpp"

namespace sbf {

struct Offset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

/// Small patch neighborhood: offsets u_1..u_p (u_1 at the origin) with a range
/// sigma per component. At most three components.
struct PatchSpec {
  std::vector<Offset> offsets{Offset{}};
  std::vector<double> sigmas{30.0};
};

void validate(const PatchSpec& patch);

struct NlmParams {
  PatchSpec patch;
  SpatialMode spatial = Box{2};
  std::optional<int> window_radius;
  double epsilon = 0.0;
  std::optional<double> fixed_T;
  TruncationRule rule = TruncationRule::Auto;
  // Upper bound on the number of multi-index terms (product of per-component
  // retained counts).
  std::size_t max_terms = 10000;
};

struct NlmResult {
  Image image;
  std::vector<KernelPlan> plans;
  std::size_t terms = 0;
  std::size_t fallback_pixels = 0;
};

/// Coarse non-local means with a separable Gaussian range kernel over the
/// patch components, expanded as a tensor product of raised-cosine series.
/// Each multi-index costs one set of spatial filterings.
NlmResult coarse_nlm_shiftable(const Image& img, const NlmParams& params);

/// Literal evaluation: weight spatial(x, z) * prod_j range_j(f(x+u_j) - f(z+u_j)).
/// Shifted samples use replicate padding. Oracle for small images.
Image direct_nlm(const Image& img, const PatchSpec& patch,
                 const SpatialMode& spatial,
                 const std::vector<RangeKernel>& ranges,
                 std::size_t* fallbacks = nullptr);

}  // namespace sbf
