#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "image.hpp"

namespace fc2n {

// Spatially aligned LR/HR training pair: hr dims = scale * lr dims and the
// hr origin is scale * the lr origin.
struct PatchPair {
  ImageRGB lr;
  ImageRGB hr;
};

// Unbiased uniform draw in [0, n).
std::uint32_t uniform_below(std::mt19937_64& rng, std::uint32_t n);

// Uniformly random aligned pair of p x p (LR) and rp x rp (HR) patches.
// Returns nullopt when the LR image is smaller than the patch (skip-image
// signal).
std::optional<PatchPair> extract_patch_pair(const ImageRGB& hr, const ImageRGB& lr, int p,
                                            int scale, std::mt19937_64& rng);

ImageRGB flip_h(const ImageRGB& img);
ImageRGB flip_v(const ImageRGB& img);
// 90 degrees counterclockwise; output dims are transposed.
ImageRGB rot90(const ImageRGB& img);
// Data range complementarity: v -> 255 - v.
ImageRGB complement(const ImageRGB& img);

// Same geometric transform applied to both patches; flags compose in the
// order hflip, vflip, rot90, complement.
PatchPair augment(const PatchPair& pair, bool hflip, bool vflip, bool do_rot90, bool do_complement);

// The dihedral group of order 8 as rot90^r then optional horizontal flip,
// k = r + 4*f for r in [0,4), f in {0,1}.
ImageRGB dihedral_apply(const ImageRGB& img, int k);
int dihedral_inverse(int k);

// Sorted *.png / *.ppm paths under dir.
std::vector<std::string> list_images(const std::string& dir);

struct SrSample {
  std::string name;
  ImageRGB hr;  // pre-cropped to a multiple of the scale
  ImageRGB lr;
};

// Loads every image under hr_dir (cropped to a multiple of scale). If lr_dir
// is non-empty, the paired LR file "<stem>x<scale><ext>" (or "<stem><ext>")
// is used; otherwise LR is synthesized with the antialiased bicubic
// downsampler. limit 0 means no limit.
std::vector<SrSample> load_sr_dataset(const std::string& hr_dir, const std::string& lr_dir,
                                      int scale, int limit = 0);

}  // namespace fc2n
