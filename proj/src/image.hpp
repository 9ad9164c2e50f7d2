#pragma once

#include <string>
#include <vector>

#include "tensor.hpp"

namespace fc2n {

// 8-bit-range RGB image in planar float form, values nominally [0, 255].
// Intermediate computation is unclamped; clamping happens at I/O boundaries.
class ImageRGB {
 public:
  ImageRGB() = default;
  ImageRGB(int h, int w);

  int h() const { return h_; }
  int w() const { return w_; }
  bool empty() const { return data_.empty(); }

  real* plane(int ch) { return data_.data() + static_cast<std::size_t>(ch) * h_ * w_; }
  const real* plane(int ch) const { return data_.data() + static_cast<std::size_t>(ch) * h_ * w_; }

  real& at(int ch, int y, int x) { return data_[(static_cast<std::size_t>(ch) * h_ + y) * w_ + x]; }
  real at(int ch, int y, int x) const {
    return data_[(static_cast<std::size_t>(ch) * h_ + y) * w_ + x];
  }

  std::size_t size() const { return data_.size(); }
  real* data() { return data_.data(); }
  const real* data() const { return data_.data(); }

 private:
  int h_ = 0, w_ = 0;
  std::vector<real> data_;  // plane-major: R plane, G plane, B plane
};

// Single luma plane, same value range conventions as ImageRGB.
class ImageY {
 public:
  ImageY() = default;
  ImageY(int h, int w);

  int h() const { return h_; }
  int w() const { return w_; }
  real& at(int y, int x) { return data_[static_cast<std::size_t>(y) * w_ + x]; }
  real at(int y, int x) const { return data_[static_cast<std::size_t>(y) * w_ + x]; }
  std::size_t size() const { return data_.size(); }

 private:
  int h_ = 0, w_ = 0;
  std::vector<real> data_;
};

// PNG (8-bit, gray/RGB/RGBA accepted, output RGB) or binary PPM (P6, 8-bit).
// 16-bit files are rejected with FormatError; round trips of 8-bit data are
// lossless.
ImageRGB load_image(const std::string& path);
void save_image(const ImageRGB& img, const std::string& path);

ImageRGB crop(const ImageRGB& img, int y0, int x0, int h, int w);
// Crop to the largest top-left region whose dims are multiples of `modulo`.
ImageRGB crop_modulo(const ImageRGB& img, int modulo);

// Normalized tensor view, (1, H, W, 3) in [0,1].
Tensor4 image_to_tensor(const ImageRGB& img);
// Back to [0,255]; clamps when clamp = true (the I/O boundary case).
ImageRGB tensor_to_image(const Tensor4& t, bool clamp = true);

}  // namespace fc2n
