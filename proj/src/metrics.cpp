#include "sbf/metrics.hpp"

#include <cmath>
#include <limits>

namespace sbf {

Metrics compute_metrics(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw InvalidParameter("metrics need images of equal size");
  if (a.empty()) throw InvalidParameter("metrics need non-empty images");
  const auto x = a.samples();
  const auto y = b.samples();
  double sum = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
    worst = std::max(worst, std::abs(d));
  }
  Metrics m;
  m.mse = sum / static_cast<double>(x.size());
  m.mse_db = m.mse > 0.0 ? 10.0 * std::log10(m.mse)
                         : -std::numeric_limits<double>::infinity();
  m.max_abs = worst;
  return m;
}

}  // namespace sbf
