#include "tensor.hpp"

#include <algorithm>

namespace fc2n {

Tensor4::Tensor4(int n, int h, int w, int c) : n_(n), h_(h), w_(w), c_(c) {
  if (n < 1 || h < 1 || w < 1 || c < 1)
    throw ShapeError("Tensor4: all dims must be >= 1, got (" + std::to_string(n) + "," +
                     std::to_string(h) + "," + std::to_string(w) + "," + std::to_string(c) + ")");
  data_.assign(static_cast<std::size_t>(n) * h * w * c, real(0));
}

Tensor4 Tensor4::full(int n, int h, int w, int c, real v) {
  Tensor4 t(n, h, w, c);
  t.fill(v);
  return t;
}

Tensor4 Tensor4::scalar(real v) { return full(1, 1, 1, 1, v); }

std::string Tensor4::dims_str() const {
  return "(" + std::to_string(n_) + "," + std::to_string(h_) + "," + std::to_string(w_) + "," +
         std::to_string(c_) + ")";
}

void Tensor4::fill(real v) { std::fill(data_.begin(), data_.end(), v); }

void Tensor4::add_inplace(const Tensor4& o) {
  if (!same_dims(o)) throw ShapeError("add_inplace: dims " + dims_str() + " vs " + o.dims_str());
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
}

}  // namespace fc2n
