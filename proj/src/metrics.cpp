#include "metrics.hpp"

#include <cmath>
#include <vector>

namespace fc2n {

ImageY rgb_to_y(const ImageRGB& img) {
  ImageY y(img.h(), img.w());
  for (int iy = 0; iy < img.h(); ++iy)
    for (int ix = 0; ix < img.w(); ++ix)
      y.at(iy, ix) = real(16) + (real(65.738) * img.at(0, iy, ix) +
                                 real(129.057) * img.at(1, iy, ix) +
                                 real(25.064) * img.at(2, iy, ix)) /
                                    real(256);
  return y;
}

namespace {

void check_pair(const ImageRGB& a, const ImageRGB& b, int shave, const char* what) {
  if (a.h() != b.h() || a.w() != b.w())
    throw ShapeError(std::string(what) + ": image dims differ, " + std::to_string(a.h()) + "x" +
                     std::to_string(a.w()) + " vs " + std::to_string(b.h()) + "x" +
                     std::to_string(b.w()));
  if (shave < 0) throw ArgError(std::string(what) + ": negative shave");
  if (a.h() - 2 * shave < 1 || a.w() - 2 * shave < 1)
    throw ArgError(std::string(what) + ": shave " + std::to_string(shave) +
                   " leaves no pixels in " + std::to_string(a.h()) + "x" + std::to_string(a.w()));
}

}  // namespace

real psnr_y(const ImageRGB& pred, const ImageRGB& gt, int shave) {
  check_pair(pred, gt, shave, "psnr_y");
  const ImageY yp = rgb_to_y(pred), yg = rgb_to_y(gt);
  double mse = 0.0;
  std::size_t count = 0;
  for (int y = shave; y < yp.h() - shave; ++y)
    for (int x = shave; x < yp.w() - shave; ++x) {
      const double d = static_cast<double>(yp.at(y, x)) - static_cast<double>(yg.at(y, x));
      mse += d * d;
      ++count;
    }
  mse /= static_cast<double>(count);
  if (mse <= 0.0) return kPsnrCap;
  const double db = 10.0 * std::log10(255.0 * 255.0 / mse);
  return std::min<real>(static_cast<real>(db), kPsnrCap);
}

real ssim_y(const ImageRGB& pred, const ImageRGB& gt, int shave) {
  check_pair(pred, gt, shave, "ssim_y");
  const int win = 11;
  const double sigma = 1.5;
  const int h = pred.h() - 2 * shave, w = pred.w() - 2 * shave;
  if (h < win || w < win)
    throw ArgError("ssim_y: shaved image " + std::to_string(h) + "x" + std::to_string(w) +
                   " smaller than the 11x11 window");

  // Normalized Gaussian window.
  double kernel[win][win];
  double ksum = 0.0;
  for (int y = 0; y < win; ++y)
    for (int x = 0; x < win; ++x) {
      const double dy = y - (win - 1) / 2.0, dx = x - (win - 1) / 2.0;
      kernel[y][x] = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      ksum += kernel[y][x];
    }
  for (int y = 0; y < win; ++y)
    for (int x = 0; x < win; ++x) kernel[y][x] /= ksum;

  const ImageY yp = rgb_to_y(pred), yg = rgb_to_y(gt);
  const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  const double c2 = (0.03 * 255.0) * (0.03 * 255.0);

  double total = 0.0;
  std::size_t count = 0;
  for (int oy = shave; oy + win <= shave + h; ++oy) {
    for (int ox = shave; ox + win <= shave + w; ++ox) {
      double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
      for (int ky = 0; ky < win; ++ky)
        for (int kx = 0; kx < win; ++kx) {
          const double kw = kernel[ky][kx];
          const double a = yp.at(oy + ky, ox + kx);
          const double b = yg.at(oy + ky, ox + kx);
          mx += kw * a;
          my += kw * b;
          sxx += kw * a * a;
          syy += kw * b * b;
          sxy += kw * a * b;
        }
      const double vx = sxx - mx * mx;
      const double vy = syy - my * my;
      const double cov = sxy - mx * my;
      total += ((2 * mx * my + c1) * (2 * cov + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return static_cast<real>(total / static_cast<double>(count));
}

}  // namespace fc2n
