#pragma once

#include "sbf/image.hpp"

namespace sbf {

struct Metrics {
  double mse = 0.0;
  double mse_db = 0.0;  // 10 log10(mse); -inf when the images agree exactly
  double max_abs = 0.0;
};

Metrics compute_metrics(const Image& a, const Image& b);

}  // namespace sbf
