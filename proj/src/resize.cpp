#include "resize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fc2n {

namespace {

// Keys cubic, a = -0.5.
double cubic(double x) {
  x = std::abs(x);
  if (x < 1.0) return 1.5 * x * x * x - 2.5 * x * x + 1.0;
  if (x < 2.0) return -0.5 * x * x * x + 2.5 * x * x - 4.0 * x + 2.0;
  return 0.0;
}

struct AxisTaps {
  int taps = 0;
  std::vector<int> index;      // out_len * taps, clamped source indices
  std::vector<double> weight;  // out_len * taps, rows normalized to 1
};

AxisTaps plan_axis(int in_len, int out_len, bool antialias) {
  const double scale = static_cast<double>(out_len) / in_len;
  const bool stretch = antialias && scale < 1.0;
  const double kscale = stretch ? scale : 1.0;
  const double support = 2.0 / kscale;  // cubic half-width is 2

  AxisTaps plan;
  plan.taps = static_cast<int>(std::ceil(support)) * 2 + 2;
  plan.index.resize(static_cast<std::size_t>(out_len) * plan.taps);
  plan.weight.resize(static_cast<std::size_t>(out_len) * plan.taps);

  for (int o = 0; o < out_len; ++o) {
    const double u = (o + 0.5) / scale - 0.5;
    const int left = static_cast<int>(std::floor(u - support)) + 1;
    double sum = 0.0;
    double* wrow = plan.weight.data() + static_cast<std::size_t>(o) * plan.taps;
    int* irow = plan.index.data() + static_cast<std::size_t>(o) * plan.taps;
    for (int t = 0; t < plan.taps; ++t) {
      const int src = left + t;
      const double w = kscale * cubic(kscale * (u - src));
      wrow[t] = w;
      irow[t] = std::clamp(src, 0, in_len - 1);
      sum += w;
    }
    for (int t = 0; t < plan.taps; ++t) wrow[t] /= sum;
  }
  return plan;
}

}  // namespace

ImageRGB bicubic_resize(const ImageRGB& img, int out_h, int out_w, bool antialias) {
  if (out_h < 1 || out_w < 1)
    throw ArgError("bicubic_resize: target dims must be positive, got " + std::to_string(out_h) +
                   "x" + std::to_string(out_w));

  const AxisTaps rows = plan_axis(img.h(), out_h, antialias);
  const AxisTaps cols = plan_axis(img.w(), out_w, antialias);

  // Vertical pass then horizontal; per-channel, identical treatment.
  ImageRGB mid(out_h, img.w());
  for (int c = 0; c < 3; ++c) {
    const real* src = img.plane(c);
    for (int y = 0; y < out_h; ++y) {
      const int* idx = rows.index.data() + static_cast<std::size_t>(y) * rows.taps;
      const double* wt = rows.weight.data() + static_cast<std::size_t>(y) * rows.taps;
      for (int x = 0; x < img.w(); ++x) {
        double acc = 0.0;
        for (int t = 0; t < rows.taps; ++t)
          acc += wt[t] * static_cast<double>(src[static_cast<std::size_t>(idx[t]) * img.w() + x]);
        mid.at(c, y, x) = static_cast<real>(acc);
      }
    }
  }

  ImageRGB out(out_h, out_w);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < out_h; ++y) {
      for (int x = 0; x < out_w; ++x) {
        const int* idx = cols.index.data() + static_cast<std::size_t>(x) * cols.taps;
        const double* wt = cols.weight.data() + static_cast<std::size_t>(x) * cols.taps;
        double acc = 0.0;
        for (int t = 0; t < cols.taps; ++t) acc += wt[t] * static_cast<double>(mid.at(c, y, idx[t]));
        out.at(c, y, x) = static_cast<real>(acc);
      }
    }
  }
  return out;
}

ImageRGB bicubic_scale(const ImageRGB& img, double scale, bool antialias) {
  if (!(scale > 0.0)) throw ArgError("bicubic_scale: scale must be positive");
  const int oh = std::max(1, static_cast<int>(std::llround(img.h() * scale)));
  const int ow = std::max(1, static_cast<int>(std::llround(img.w() * scale)));
  return bicubic_resize(img, oh, ow, antialias);
}

}  // namespace fc2n
