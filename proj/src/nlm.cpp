#include "sbf/nlm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "sbf/maxfilter.hpp"

namespace sbf {
namespace {

Image shifted(const Image& img, Offset u) {
  Image out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) out(x, y) = img.clamped(x + u.dx, y + u.dy);
  return out;
}

int max_offset_norm(const PatchSpec& patch) {
  int m = 0;
  for (const auto& u : patch.offsets) m = std::max({m, std::abs(u.dx), std::abs(u.dy)});
  return m;
}

}  // namespace

void validate(const PatchSpec& patch) {
  if (patch.offsets.empty() || patch.offsets.size() > 3)
    throw InvalidParameter("patch must have between 1 and 3 offsets");
  if (patch.sigmas.size() != patch.offsets.size())
    throw InvalidParameter("patch needs one range sigma per offset");
  if (patch.offsets.front() != Offset{})
    throw InvalidParameter("first patch offset must be the origin");
  for (std::size_t i = 0; i < patch.offsets.size(); ++i)
    for (std::size_t j = i + 1; j < patch.offsets.size(); ++j)
      if (patch.offsets[i] == patch.offsets[j])
        throw InvalidParameter("patch offsets must be distinct");
  for (double s : patch.sigmas)
    if (!(s > 0.0)) throw InvalidParameter("patch range sigmas must be positive");
}

NlmResult coarse_nlm_shiftable(const Image& img, const NlmParams& params) {
  if (img.empty()) throw InvalidParameter("input image is empty");
  if (!img.all_finite()) throw InvalidParameter("input image has non-finite samples");
  validate(params.patch);
  validate(params.spatial);

  const int R = params.window_radius ? *params.window_radius
                                     : support_radius(params.spatial);
  if (R < 0) throw InvalidParameter("window radius must be non-negative");
  const double T = params.fixed_T
                       ? *params.fixed_T
                       : compute_T(img, R + max_offset_norm(params.patch));

  NlmResult result;
  std::vector<Expansion> expansions;
  std::size_t total = 1;
  for (double sigma : params.patch.sigmas) {
    const KernelPlan plan = make_plan(T, sigma, params.epsilon,
                                      KernelFamily::RaisedCosine, params.rule);
    result.plans.push_back(plan);
    expansions.push_back(raised_cosine_expansion(plan));
    total *= expansions.back().size();
    if (total > params.max_terms)
      throw ConfigurationError("multi-index expansion exceeds the term budget of " +
                               std::to_string(params.max_terms));
  }
  result.terms = total;

  const int w = img.width();
  const int h = img.height();
  const std::size_t p = params.patch.offsets.size();
  std::vector<Image> shifts;
  for (const auto& u : params.patch.offsets) shifts.push_back(shifted(img, u));

  const auto f = img.samples();
  TermAccumulator acc(w, h);
  auto num = acc.numerator().samples();
  auto den = acc.denominator().samples();
  Image gc(w, h), gs(w, h), fc(w, h), fs(w, h);
  std::vector<double> phase(f.size());

  // Flipping every component index mirrors the linear index L -> total-1-L
  // and conjugates the term, so only L <= (total-1)/2 is visited.
  std::vector<std::size_t> digit(p);
  for (std::size_t L = 0; 2 * L <= total - 1; ++L) {
    std::size_t rest = L;
    for (std::size_t j = p; j-- > 0;) {
      digit[j] = rest % expansions[j].size();
      rest /= expansions[j].size();
    }
    double weight = 2 * L == total - 1 ? 1.0 : 2.0;
    bool zero_phase = true;
    std::fill(phase.begin(), phase.end(), 0.0);
    for (std::size_t j = 0; j < p; ++j) {
      const auto& term = expansions[j].terms()[digit[j]];
      weight *= term.weight;
      if (term.frequency == 0.0) continue;
      zero_phase = false;
      const auto s = shifts[j].samples();
      for (std::size_t i = 0; i < f.size(); ++i) phase[i] += term.frequency * s[i];
    }
    if (weight == 0.0) continue;

    auto pc = gc.samples(), ps = gs.samples(), qc = fc.samples(), qs = fs.samples();
    for (std::size_t i = 0; i < f.size(); ++i) {
      pc[i] = zero_phase ? 1.0 : std::cos(phase[i]);
      ps[i] = zero_phase ? 0.0 : std::sin(phase[i]);
      qc[i] = f[i] * pc[i];
      qs[i] = f[i] * ps[i];
    }
    const Image gc_bar = spatial_filter(gc, params.spatial);
    const Image fc_bar = spatial_filter(fc, params.spatial);
    const auto gcb = gc_bar.samples(), fcb = fc_bar.samples();
    if (zero_phase) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        num[i] += weight * fcb[i];
        den[i] += weight * gcb[i];
      }
      continue;
    }
    const Image gs_bar = spatial_filter(gs, params.spatial);
    const Image fs_bar = spatial_filter(fs, params.spatial);
    const auto gsb = gs_bar.samples(), fsb = fs_bar.samples();
    for (std::size_t i = 0; i < f.size(); ++i) {
      num[i] += weight * (pc[i] * fcb[i] + ps[i] * fsb[i]);
      den[i] += weight * (pc[i] * gcb[i] + ps[i] * gsb[i]);
    }
  }

  result.image = acc.resolve(img, &result.fallback_pixels);
  return result;
}

Image direct_nlm(const Image& img, const PatchSpec& patch,
                 const SpatialMode& spatial,
                 const std::vector<RangeKernel>& ranges,
                 std::size_t* fallbacks) {
  if (img.empty()) throw InvalidParameter("input image is empty");
  validate(patch);
  if (ranges.size() != patch.offsets.size())
    throw InvalidParameter("need one range kernel per patch component");
  const int R = support_radius(spatial);
  const int w = img.width();
  const int h = img.height();
  const LineWeights wx = line_weights(spatial, w);
  const LineWeights wy = line_weights(spatial, h);
  const std::size_t p = patch.offsets.size();

  Image out(w, h);
  std::size_t bad = 0;
  std::vector<double> anchor(p);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (std::size_t j = 0; j < p; ++j)
        anchor[j] = img.clamped(x + patch.offsets[j].dx, y + patch.offsets[j].dy);
      double num = 0.0, den = 0.0;
      for (int v = std::max(0, y - R); v <= std::min(h - 1, y + R); ++v) {
        for (int u = std::max(0, x - R); u <= std::min(w - 1, x + R); ++u) {
          double weight = wy(y, v) * wx(x, u);
          if (weight == 0.0) continue;
          for (std::size_t j = 0; j < p; ++j) {
            const double other =
                img.clamped(u + patch.offsets[j].dx, v + patch.offsets[j].dy);
            weight *= ranges[j](anchor[j] - other);
          }
          num += weight * img(u, v);
          den += weight;
        }
      }
      if (den > 0.0) {
        out(x, y) = num / den;
      } else {
        out(x, y) = img(x, y);
        ++bad;
      }
    }
  }
  if (fallbacks) *fallbacks += bad;
  return out;
}

}  // namespace sbf
