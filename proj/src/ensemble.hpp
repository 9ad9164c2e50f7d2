#pragma once

#include <functional>

#include "dataset.hpp"

namespace fc2n {

// Any LR -> HR predictor (a model, or the bicubic baseline). Predictors used
// inside ensembles must not clamp: averaging happens in floating point and
// the caller clamps once at the end.
using Predictor = std::function<ImageRGB(const ImageRGB&)>;

enum class EnsembleMode { none, geo, geo_range };

// Average of the 8 dihedral branches, each inverted back before averaging.
ImageRGB geometric_self_ensemble(const Predictor& f, const ImageRGB& lr);

// [f(x) + (255 - f(255 - x))] / 2.
ImageRGB data_range_ensemble(const Predictor& f, const ImageRGB& lr);

// Dispatch on mode; geo_range applies the range ensemble to the
// geometric-ensemble predictor.
ImageRGB predict_with_ensemble(const Predictor& f, const ImageRGB& lr, EnsembleMode mode);

ImageRGB clamp_image(const ImageRGB& img);

}  // namespace fc2n
