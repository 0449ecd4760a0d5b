#include "sbf/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

namespace sbf {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

Image transpose(const Image& img) {
  Image out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) out(y, x) = img(x, y);
  return out;
}

// Extended box along one line with clamped-window renormalization.
void box_line(std::span<const double> in, std::span<double> out, BoxStage stage) {
  const int n = static_cast<int>(in.size());
  const int r = stage.radius;
  if (r == 0 && stage.tail == 0.0) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  double sum = 0.0;
  for (int j = 0; j <= std::min(r, n - 1); ++j) sum += in[j];
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - r);
    const int hi = std::min(n - 1, i + r);
    double total = sum;
    double mass = hi - lo + 1;
    if (stage.tail > 0.0) {
      if (i - r - 1 >= 0) {
        total += stage.tail * in[i - r - 1];
        mass += stage.tail;
      }
      if (i + r + 1 < n) {
        total += stage.tail * in[i + r + 1];
        mass += stage.tail;
      }
    }
    out[i] = total / mass;
    if (i + r + 1 < n) sum += in[i + r + 1];
    if (i - r >= 0) sum -= in[i - r];
  }
}

void gaussian_line(std::span<const double> in, std::span<double> out,
                   std::span<const double> taps) {
  const int n = static_cast<int>(in.size());
  const int r = static_cast<int>(taps.size()) / 2;
  for (int i = 0; i < n; ++i) {
    double total = 0.0, mass = 0.0;
    for (int k = std::max(-r, -i); k <= std::min(r, n - 1 - i); ++k) {
      total += taps[k + r] * in[i + k];
      mass += taps[k + r];
    }
    out[i] = total / mass;
  }
}

std::vector<double> gaussian_taps(double sigma_s, int radius) {
  std::vector<double> taps(2 * static_cast<std::size_t>(radius) + 1);
  for (int k = -radius; k <= radius; ++k)
    taps[k + radius] = std::exp(-0.5 * k * k / (sigma_s * sigma_s));
  return taps;
}

Image box_rows(const Image& img, BoxStage stage, int passes) {
  Image cur = img;
  Image next(img.width(), img.height());
  for (int p = 0; p < passes; ++p) {
    for (int y = 0; y < img.height(); ++y) box_line(cur.row(y), next.row(y), stage);
    std::swap(cur, next);
  }
  return cur;
}

Image gaussian_rows(const Image& img, double sigma_s, int radius) {
  const auto taps = gaussian_taps(sigma_s, radius);
  Image out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) gaussian_line(img.row(y), out.row(y), taps);
  return out;
}

// Dense matrix of one extended-box stage on a line of n samples.
std::vector<double> box_matrix(int n, BoxStage stage) {
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double mass = 0.0;
    for (int j = 0; j < n; ++j) {
      const int d = std::abs(i - j);
      double v = 0.0;
      if (d <= stage.radius)
        v = 1.0;
      else if (d == stage.radius + 1)
        v = stage.tail;
      m[static_cast<std::size_t>(i) * n + j] = v;
      mass += v;
    }
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i) * n + j] /= mass;
  }
  return m;
}

std::vector<double> multiply(const std::vector<double>& a,
                             const std::vector<double>& b, int n) {
  std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a[static_cast<std::size_t>(i) * n + k];
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j)
        c[static_cast<std::size_t>(i) * n + j] +=
            aik * b[static_cast<std::size_t>(k) * n + j];
    }
  return c;
}

}  // namespace

BoxStage iterated_box_stage(double sigma_s, int passes) {
  if (!(sigma_s > 0.0)) throw InvalidParameter("sigma_s must be positive");
  if (passes < 1) throw InvalidParameter("passes must be at least 1");
  // A plain box of radius r has variance r(r+1)/3. Take the largest r not
  // exceeding the per-stage target, then solve for the tail weight that makes
  // up the remainder.
  const double v = sigma_s * sigma_s / passes;
  int r = static_cast<int>(std::floor(std::sqrt(0.25 + 3.0 * v) - 0.5));
  r = std::max(r, 0);
  while (r > 0 && r * (r + 1) / 3.0 > v) --r;
  while ((r + 1) * (r + 2) / 3.0 <= v) ++r;
  const double width = 2.0 * r + 1.0;
  const double inner = r * (r + 1.0) * width / 3.0;  // sum of k^2 over |k|<=r
  const double edge = (r + 1.0) * (r + 1.0);
  const double tail = (v * width - inner) / (2.0 * edge - 2.0 * v);
  return {r, std::clamp(tail, 0.0, 1.0)};
}

void validate(const SpatialMode& mode) {
  std::visit(Overloaded{
                 [](const Box& b) {
                   if (b.radius < 0)
                     throw InvalidParameter("box radius must be non-negative");
                 },
                 [](const IteratedBox& b) {
                   if (!(b.sigma_s > 0.0))
                     throw InvalidParameter("sigma_s must be positive");
                   if (b.passes < 1)
                     throw InvalidParameter("passes must be at least 1");
                 },
                 [](const FirGaussian& g) {
                   if (!(g.sigma_s > 0.0))
                     throw InvalidParameter("sigma_s must be positive");
                   if (g.radius < 1)
                     throw InvalidParameter("FIR radius must be at least 1");
                 },
             },
             mode);
}

int support_radius(const SpatialMode& mode) {
  validate(mode);
  return std::visit(Overloaded{
                        [](const Box& b) { return b.radius; },
                        [](const IteratedBox& b) {
                          const auto s = iterated_box_stage(b.sigma_s, b.passes);
                          return b.passes * (s.radius + (s.tail > 0.0 ? 1 : 0));
                        },
                        [](const FirGaussian& g) { return g.radius; },
                    },
                    mode);
}

Image filter_rows(const Image& img, const SpatialMode& mode) {
  validate(mode);
  return std::visit(
      Overloaded{
          [&](const Box& b) { return box_rows(img, {b.radius, 0.0}, 1); },
          [&](const IteratedBox& b) {
            return box_rows(img, iterated_box_stage(b.sigma_s, b.passes),
                            b.passes);
          },
          [&](const FirGaussian& g) {
            return gaussian_rows(img, g.sigma_s, g.radius);
          },
      },
      mode);
}

Image filter_cols(const Image& img, const SpatialMode& mode) {
  return transpose(filter_rows(transpose(img), mode));
}

Image spatial_filter(const Image& img, const SpatialMode& mode) {
  return filter_cols(filter_rows(img, mode), mode);
}

Image box_filter(const Image& img, int radius) {
  return spatial_filter(img, Box{radius});
}

Image iterated_box_gaussian(const Image& img, double sigma_s, int passes) {
  return spatial_filter(img, IteratedBox{sigma_s, passes});
}

Image fir_gaussian(const Image& img, double sigma_s, int radius) {
  return spatial_filter(img, FirGaussian{sigma_s, radius});
}

LineWeights line_weights(const SpatialMode& mode, int length) {
  validate(mode);
  if (length < 1) throw InvalidParameter("line length must be positive");
  const int n = length;
  auto dense = std::visit(
      Overloaded{
          [&](const Box& b) { return box_matrix(n, {b.radius, 0.0}); },
          [&](const IteratedBox& b) {
            const auto stage = iterated_box_stage(b.sigma_s, b.passes);
            const auto one = box_matrix(n, stage);
            auto m = one;
            for (int p = 1; p < b.passes; ++p) m = multiply(one, m, n);
            return m;
          },
          [&](const FirGaussian& g) {
            std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
            for (int i = 0; i < n; ++i) {
              double mass = 0.0;
              for (int j = std::max(0, i - g.radius);
                   j <= std::min(n - 1, i + g.radius); ++j) {
                const double d = i - j;
                const double v = std::exp(-0.5 * d * d / (g.sigma_s * g.sigma_s));
                m[static_cast<std::size_t>(i) * n + j] = v;
                mass += v;
              }
              for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(i) * n + j] /= mass;
            }
            return m;
          },
      },
      mode);
  return LineWeights(n, std::move(dense));
}

}  // namespace sbf
