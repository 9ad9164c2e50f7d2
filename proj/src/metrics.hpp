#pragma once

#include "image.hpp"

namespace fc2n {

// BT.601 studio-swing luma from [0,255] RGB:
// Y = 16 + (65.738 R + 129.057 G + 25.064 B) / 256.
ImageY rgb_to_y(const ImageRGB& img);

// 10*log10(255^2 / MSE) on the Y channel after shaving `shave` pixels off
// each border; identical images are capped at 99 dB.
real psnr_y(const ImageRGB& pred, const ImageRGB& gt, int shave);

// Mean local SSIM on the Y channel over valid positions of an 11x11 Gaussian
// window (sigma 1.5), K1 = 0.01, K2 = 0.03, L = 255.
real ssim_y(const ImageRGB& pred, const ImageRGB& gt, int shave);

inline constexpr real kPsnrCap = real(99);

}  // namespace fc2n
