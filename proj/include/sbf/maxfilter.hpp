#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sbf/image.hpp"

namespace sbf {

// Counts max() evaluations performed by the 1D engine.
struct MaxFilterStats {
  std::uint64_t comparisons = 0;
};

/// Running maximum over the window [i-R, i+R] clamped to the sequence.
///
/// van Herk / Gil-Werman: the replicate-padded sequence is cut into blocks of
/// W = 2R+1 samples, prefix and suffix maxima are built inside each block, and
/// every window is the max of one suffix and one prefix. About 3 max
/// operations per sample regardless of R.
std::vector<double> max_filter_1d(std::span<const double> seq, int radius,
                                  MaxFilterStats* stats = nullptr);

/// Square-window dilation: row pass, then column pass.
Image max_filter_2d(const Image& img, int radius);

// Erosion, via negation of the dilation.
Image min_filter_2d(const Image& img, int radius);

/// Largest |f(x-y) - f(x)| over all pixels x and clamped square windows of
/// radius R, computed as max(M - f) with M the dilated image.
double compute_T(const Image& img, int radius);

// Direct O(n R^2) evaluation of the same quantity.
double brute_force_T(const Image& img, int radius);

}  // namespace sbf
