#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "common.hpp"

namespace fc2n {

// Dense rank-4 array in (batch, height, width, channels) order, row-major
// with channels innermost. The only value type the engine deals in; scalars
// are stored as 1x1x1x1.
class Tensor4 {
 public:
  Tensor4() = default;
  Tensor4(int n, int h, int w, int c);

  static Tensor4 zeros(int n, int h, int w, int c) { return Tensor4(n, h, w, c); }
  static Tensor4 full(int n, int h, int w, int c, real v);
  static Tensor4 scalar(real v);

  int n() const { return n_; }
  int h() const { return h_; }
  int w() const { return w_; }
  int c() const { return c_; }

  bool empty() const { return data_.empty(); }
  std::size_t size() const { return data_.size(); }

  real* data() { return data_.data(); }
  const real* data() const { return data_.data(); }

  real& operator[](std::size_t i) { return data_[i]; }
  real operator[](std::size_t i) const { return data_[i]; }

  std::size_t index(int in, int iy, int ix, int ic) const {
    return ((static_cast<std::size_t>(in) * h_ + iy) * w_ + ix) * c_ + ic;
  }
  real& at(int in, int iy, int ix, int ic) { return data_[index(in, iy, ix, ic)]; }
  real at(int in, int iy, int ix, int ic) const { return data_[index(in, iy, ix, ic)]; }

  bool same_dims(const Tensor4& o) const {
    return n_ == o.n_ && h_ == o.h_ && w_ == o.w_ && c_ == o.c_;
  }
  std::string dims_str() const;

  void fill(real v);
  void zero() { fill(real(0)); }

  // Elementwise accumulate, dims must match.
  void add_inplace(const Tensor4& o);

 private:
  int n_ = 0, h_ = 0, w_ = 0, c_ = 0;
  std::vector<real> data_;
};

}  // namespace fc2n
