#pragma once

#include "image.hpp"

namespace fc2n {

// Separable cubic resampler, a = -0.5. When downscaling with antialias the
// kernel is stretched by the scale factor (reference-resizer convention);
// source coordinates are clamped at the edges. Channels are processed
// identically and independently.
ImageRGB bicubic_resize(const ImageRGB& img, int out_h, int out_w, bool antialias);

// Target dims derived as round(dim * scale), min 1.
ImageRGB bicubic_scale(const ImageRGB& img, double scale, bool antialias);

}  // namespace fc2n
