#include "ensemble.hpp"

#include <algorithm>

namespace fc2n {

ImageRGB geometric_self_ensemble(const Predictor& f, const ImageRGB& lr) {
  ImageRGB acc;
  for (int k = 0; k < 8; ++k) {
    ImageRGB branch = dihedral_apply(f(dihedral_apply(lr, k)), dihedral_inverse(k));
    if (acc.empty()) {
      acc = std::move(branch);
    } else {
      if (acc.h() != branch.h() || acc.w() != branch.w())
        throw ShapeError("geometric_self_ensemble: branch dims disagree");
      for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] += branch.data()[i];
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] /= real(8);
  return acc;
}

ImageRGB data_range_ensemble(const Predictor& f, const ImageRGB& lr) {
  const ImageRGB y = f(lr);
  const ImageRGB ybar = f(complement(lr));
  if (y.h() != ybar.h() || y.w() != ybar.w())
    throw ShapeError("data_range_ensemble: branch dims disagree");
  ImageRGB out(y.h(), y.w());
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = (y.data()[i] + (real(255) - ybar.data()[i])) / real(2);
  return out;
}

ImageRGB predict_with_ensemble(const Predictor& f, const ImageRGB& lr, EnsembleMode mode) {
  switch (mode) {
    case EnsembleMode::none:
      return f(lr);
    case EnsembleMode::geo:
      return geometric_self_ensemble(f, lr);
    case EnsembleMode::geo_range: {
      Predictor geo = [&f](const ImageRGB& x) { return geometric_self_ensemble(f, x); };
      return data_range_ensemble(geo, lr);
    }
  }
  throw ArgError("predict_with_ensemble: bad mode");
}

ImageRGB clamp_image(const ImageRGB& img) {
  ImageRGB out = img;
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = std::clamp<real>(out.data()[i], 0, 255);
  return out;
}

}  // namespace fc2n
