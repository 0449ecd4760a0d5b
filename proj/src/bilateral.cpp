#include "sbf/bilateral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbf/maxfilter.hpp"

namespace sbf {
namespace {

void check_input(const Image& img) {
  if (img.empty()) throw InvalidParameter("input image is empty");
  if (!img.all_finite()) throw InvalidParameter("input image has non-finite samples");
}

KernelPlan plan_for(const Image& img, const FilterParams& params, int radius) {
  const double T = params.fixed_T ? *params.fixed_T : compute_T(img, radius);
  return make_plan(T, params.sigma_r, params.epsilon, params.family,
                   params.rule, params.order);
}

}  // namespace

TermAccumulator::TermAccumulator(int width, int height)
    : numerator_(width, height), denominator_(width, height) {}

void TermAccumulator::merge(const TermAccumulator& other) {
  if (!numerator_.same_shape(other.numerator_))
    throw InvalidParameter("accumulator shapes differ");
  auto n = numerator_.samples();
  auto d = denominator_.samples();
  const auto on = other.numerator_.samples();
  const auto od = other.denominator_.samples();
  for (std::size_t i = 0; i < n.size(); ++i) {
    n[i] += on[i];
    d[i] += od[i];
  }
}

Image TermAccumulator::resolve(const Image& input, std::size_t* fallbacks) const {
  Image out(input.width(), input.height());
  const auto n = numerator_.samples();
  const auto d = denominator_.samples();
  const auto f = input.samples();
  auto o = out.samples();
  std::size_t bad = 0;
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (d[i] > 0.0) {
      o[i] = n[i] / d[i];
    } else {
      o[i] = f[i];
      ++bad;
    }
  }
  if (fallbacks) *fallbacks += bad;
  return out;
}

int default_window_radius(const FilterParams& params) {
  if (params.window_radius) {
    if (*params.window_radius < 0)
      throw InvalidParameter("window radius must be non-negative");
    return *params.window_radius;
  }
  return support_radius(params.spatial);
}

FilterResult shiftable_bf(const Image& img, const FilterParams& params) {
  if (params.family == KernelFamily::Polynomial)
    return shiftable_bf_poly(img, params);
  check_input(img);
  validate(params.spatial);

  FilterResult result;
  result.window_radius = default_window_radius(params);
  result.plan = plan_for(img, params, result.window_radius);
  const Expansion expansion = raised_cosine_expansion(result.plan);
  const int N = result.plan.order;

  const int w = img.width();
  const int h = img.height();
  const auto f = img.samples();
  TermAccumulator acc(w, h);
  auto num = acc.numerator().samples();
  auto den = acc.denominator().samples();
  Image gc(w, h), gs(w, h), fc(w, h), fs(w, h);

  // Terms n and N-n have opposite frequencies and equal weights, so their
  // contributions coincide; each pair is evaluated once with doubled weight.
  for (const auto& term : expansion.terms()) {
    if (2 * term.index > N) break;
    const double weight = 2 * term.index == N ? term.weight : 2.0 * term.weight;
    if (weight == 0.0) continue;
    const double omega = term.frequency;
    if (omega == 0.0) {
      const Image fbar = spatial_filter(img, params.spatial);
      const Image ones = spatial_filter(Image(w, h, 1.0), params.spatial);
      const auto a = fbar.samples();
      const auto b = ones.samples();
      for (std::size_t i = 0; i < f.size(); ++i) {
        num[i] += weight * a[i];
        den[i] += weight * b[i];
      }
      continue;
    }
    auto pc = gc.samples(), ps = gs.samples(), qc = fc.samples(), qs = fs.samples();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double phase = omega * f[i];
      pc[i] = std::cos(phase);
      ps[i] = std::sin(phase);
      qc[i] = f[i] * pc[i];
      qs[i] = f[i] * ps[i];
    }
    const Image gc_bar = spatial_filter(gc, params.spatial);
    const Image gs_bar = spatial_filter(gs, params.spatial);
    const Image fc_bar = spatial_filter(fc, params.spatial);
    const Image fs_bar = spatial_filter(fs, params.spatial);
    const auto gcb = gc_bar.samples(), gsb = gs_bar.samples();
    const auto fcb = fc_bar.samples(), fsb = fs_bar.samples();
    for (std::size_t i = 0; i < f.size(); ++i) {
      num[i] += weight * (pc[i] * fcb[i] + ps[i] * fsb[i]);
      den[i] += weight * (pc[i] * gcb[i] + ps[i] * gsb[i]);
    }
  }

  result.image = acc.resolve(img, &result.fallback_pixels);
  return result;
}

FilterResult shiftable_bf_poly(const Image& img, const FilterParams& params) {
  check_input(img);
  validate(params.spatial);
  if (img.min_value() < 0.0 || img.max_value() > 1.0)
    throw InvalidParameter("polynomial kernel expects samples normalized to [0, 1]");

  FilterParams p = params;
  p.family = KernelFamily::Polynomial;
  FilterResult result;
  result.window_radius = default_window_radius(p);
  result.plan = plan_for(img, p, result.window_radius);
  const int N = result.plan.order;
  if (N > kMaxPolynomialOrder)
    throw UnsupportedOrder("polynomial order " + std::to_string(N) +
                           " exceeds the cap of " +
                           std::to_string(kMaxPolynomialOrder));

  const int w = img.width();
  const int h = img.height();
  const auto f = img.samples();
  // Filtered monomials f^k, k = 0..2N+1; the numerator needs one extra degree.
  std::vector<Image> powers;
  powers.reserve(2 * N + 2);
  Image mono(w, h, 1.0);
  for (int k = 0; k <= 2 * N + 1; ++k) {
    powers.push_back(spatial_filter(mono, p.spatial));
    auto m = mono.samples();
    for (std::size_t i = 0; i < m.size(); ++i) m[i] *= f[i];
  }

  TermAccumulator acc(w, h);
  auto num = acc.numerator().samples();
  auto den = acc.denominator().samples();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto c = polynomial_shift_coefficients(result.plan, f[i]);
    double n = 0.0, d = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      n += c[k] * powers[k + 1].samples()[i];
      d += c[k] * powers[k].samples()[i];
    }
    num[i] = n;
    den[i] = d;
  }
  result.image = acc.resolve(img, &result.fallback_pixels);
  return result;
}

Image direct_bf(const Image& img, const SpatialMode& spatial,
                const RangeKernel& range, std::size_t* fallbacks) {
  check_input(img);
  const int R = support_radius(spatial);
  const int w = img.width();
  const int h = img.height();
  const LineWeights wx = line_weights(spatial, w);
  const LineWeights wy = line_weights(spatial, h);

  Image out(w, h);
  std::size_t bad = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double center = img(x, y);
      double num = 0.0, den = 0.0;
      for (int v = std::max(0, y - R); v <= std::min(h - 1, y + R); ++v) {
        const double sy = wy(y, v);
        if (sy == 0.0) continue;
        for (int u = std::max(0, x - R); u <= std::min(w - 1, x + R); ++u) {
          const double s = sy * wx(x, u);
          if (s == 0.0) continue;
          const double sample = img(u, v);
          const double weight = s * range(sample - center);
          num += weight * sample;
          den += weight;
        }
      }
      if (den > 0.0) {
        out(x, y) = num / den;
      } else {
        out(x, y) = center;
        ++bad;
      }
    }
  }
  if (fallbacks) *fallbacks += bad;
  return out;
}

}  // namespace sbf
