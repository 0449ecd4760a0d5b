#include "sbf/maxfilter.hpp"

#include <algorithm>
#include <cmath>

namespace sbf {
namespace {

struct NoCount {
  void operator()() const {}
};

struct Count {
  std::uint64_t* n;
  void operator()() const { ++*n; }
};

// Filters `line` (length n) into `out`, using `padded`, `prefix` and
// `suffix` as scratch so that 2D passes reuse allocations.
template <typename Tick>
void vhgw_line(std::span<const double> line, int radius, std::span<double> out,
               std::vector<double>& padded, std::vector<double>& prefix,
               std::vector<double>& suffix, Tick tick) {
  const std::size_t n = line.size();
  if (radius == 0) {
    std::copy(line.begin(), line.end(), out.begin());
    return;
  }
  const std::size_t r = static_cast<std::size_t>(radius);
  const std::size_t w = 2 * r + 1;
  // R copies of the first sample on the left, right side filled with the
  // last sample up to a multiple of W. Replicated samples already belong to
  // every clamped window that reaches them, so the result is unchanged.
  const std::size_t needed = n + 2 * r;
  const std::size_t len = (needed + w - 1) / w * w;
  padded.assign(len, line[n - 1]);
  std::fill_n(padded.begin(), r, line[0]);
  std::copy(line.begin(), line.end(), padded.begin() + r);

  prefix.resize(len);
  suffix.resize(len);
  for (std::size_t start = 0; start < len; start += w) {
    prefix[start] = padded[start];
    for (std::size_t i = start + 1; i < start + w; ++i) {
      tick();
      prefix[i] = std::max(prefix[i - 1], padded[i]);
    }
    const std::size_t last = start + w - 1;
    suffix[last] = padded[last];
    for (std::size_t i = last; i > start; --i) {
      tick();
      suffix[i - 1] = std::max(suffix[i], padded[i - 1]);
    }
  }
  // Output i covers padded[i .. i + 2R].
  for (std::size_t i = 0; i < n; ++i) {
    tick();
    out[i] = std::max(suffix[i], prefix[i + 2 * r]);
  }
}

}  // namespace

std::vector<double> max_filter_1d(std::span<const double> seq, int radius,
                                  MaxFilterStats* stats) {
  if (seq.empty()) throw InvalidParameter("max filter input is empty");
  if (radius < 0) throw InvalidParameter("window radius must be non-negative");
  std::vector<double> out(seq.size());
  std::vector<double> padded, prefix, suffix;
  if (stats)
    vhgw_line(seq, radius, out, padded, prefix, suffix,
              Count{&stats->comparisons});
  else
    vhgw_line(seq, radius, out, padded, prefix, suffix, NoCount{});
  return out;
}

Image max_filter_2d(const Image& img, int radius) {
  if (img.empty()) throw InvalidParameter("max filter input is empty");
  if (radius < 0) throw InvalidParameter("window radius must be non-negative");
  const int w = img.width();
  const int h = img.height();
  std::vector<double> padded, prefix, suffix;

  Image rows(w, h);
  for (int y = 0; y < h; ++y)
    vhgw_line(img.row(y), radius, rows.row(y), padded, prefix, suffix,
              NoCount{});

  Image out(w, h);
  std::vector<double> column(h), filtered(h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) column[y] = rows(x, y);
    vhgw_line(column, radius, filtered, padded, prefix, suffix, NoCount{});
    for (int y = 0; y < h; ++y) out(x, y) = filtered[y];
  }
  return out;
}

Image min_filter_2d(const Image& img, int radius) {
  Image negated = img;
  for (double& v : negated.samples()) v = -v;
  Image out = max_filter_2d(negated, radius);
  for (double& v : out.samples()) v = -v;
  return out;
}

double compute_T(const Image& img, int radius) {
  const Image dilated = max_filter_2d(img, radius);
  double t = 0.0;
  const auto f = img.samples();
  const auto m = dilated.samples();
  for (std::size_t i = 0; i < f.size(); ++i) t = std::max(t, m[i] - f[i]);
  return t;
}

double brute_force_T(const Image& img, int radius) {
  if (img.empty()) throw InvalidParameter("image is empty");
  if (radius < 0) throw InvalidParameter("window radius must be non-negative");
  const int w = img.width();
  const int h = img.height();
  double t = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double center = img(x, y);
      for (int v = std::max(0, y - radius); v <= std::min(h - 1, y + radius); ++v)
        for (int u = std::max(0, x - radius); u <= std::min(w - 1, x + radius); ++u)
          t = std::max(t, std::abs(img(u, v) - center));
    }
  }
  return t;
}

}  // namespace sbf
