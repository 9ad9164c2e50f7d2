#include "dataset.hpp"

#include <algorithm>
#include <filesystem>

#include "resize.hpp"

namespace fs = std::filesystem;

namespace fc2n {

std::uint32_t uniform_below(std::mt19937_64& rng, std::uint32_t n) {
  if (n == 0) throw ArgError("uniform_below: empty range");
  // Rejection sampling over the smallest covering power of two.
  std::uint32_t mask = n - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  for (;;) {
    const std::uint32_t v = static_cast<std::uint32_t>(rng()) & mask;
    if (v < n) return v;
  }
}

std::optional<PatchPair> extract_patch_pair(const ImageRGB& hr, const ImageRGB& lr, int p,
                                            int scale, std::mt19937_64& rng) {
  if (p < 1 || scale < 1) throw ArgError("extract_patch_pair: p and scale must be >= 1");
  if (hr.h() != lr.h() * scale || hr.w() != lr.w() * scale)
    throw ShapeError("extract_patch_pair: hr " + std::to_string(hr.h()) + "x" +
                     std::to_string(hr.w()) + " is not " + std::to_string(scale) + "x lr " +
                     std::to_string(lr.h()) + "x" + std::to_string(lr.w()));
  if (lr.h() < p || lr.w() < p) return std::nullopt;

  const int oy = static_cast<int>(uniform_below(rng, static_cast<std::uint32_t>(lr.h() - p + 1)));
  const int ox = static_cast<int>(uniform_below(rng, static_cast<std::uint32_t>(lr.w() - p + 1)));
  PatchPair pair;
  pair.lr = crop(lr, oy, ox, p, p);
  pair.hr = crop(hr, oy * scale, ox * scale, p * scale, p * scale);
  return pair;
}

ImageRGB flip_h(const ImageRGB& img) {
  ImageRGB out(img.h(), img.w());
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < img.h(); ++y)
      for (int x = 0; x < img.w(); ++x) out.at(c, y, x) = img.at(c, y, img.w() - 1 - x);
  return out;
}

ImageRGB flip_v(const ImageRGB& img) {
  ImageRGB out(img.h(), img.w());
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < img.h(); ++y)
      for (int x = 0; x < img.w(); ++x) out.at(c, y, x) = img.at(c, img.h() - 1 - y, x);
  return out;
}

ImageRGB rot90(const ImageRGB& img) {
  ImageRGB out(img.w(), img.h());
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < out.h(); ++y)
      for (int x = 0; x < out.w(); ++x) out.at(c, y, x) = img.at(c, x, img.w() - 1 - y);
  return out;
}

ImageRGB complement(const ImageRGB& img) {
  ImageRGB out(img.h(), img.w());
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < img.h(); ++y)
      for (int x = 0; x < img.w(); ++x) out.at(c, y, x) = real(255) - img.at(c, y, x);
  return out;
}

PatchPair augment(const PatchPair& pair, bool hflip, bool vflip, bool do_rot90,
                  bool do_complement) {
  auto apply = [&](const ImageRGB& img) {
    ImageRGB out = img;
    if (hflip) out = flip_h(out);
    if (vflip) out = flip_v(out);
    if (do_rot90) out = rot90(out);
    if (do_complement) out = complement(out);
    return out;
  };
  return PatchPair{apply(pair.lr), apply(pair.hr)};
}

ImageRGB dihedral_apply(const ImageRGB& img, int k) {
  if (k < 0 || k > 7) throw ArgError("dihedral_apply: k must be in [0,8), got " + std::to_string(k));
  ImageRGB out = img;
  for (int i = 0; i < k % 4; ++i) out = rot90(out);
  if (k >= 4) out = flip_h(out);
  return out;
}

int dihedral_inverse(int k) {
  if (k < 0 || k > 7) throw ArgError("dihedral_inverse: k must be in [0,8)");
  // Flips are involutions; a pure rotation inverts to the complementary one.
  if (k >= 4) return k;
  return (4 - k) % 4;
}

std::vector<std::string> list_images(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".ppm") out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SrSample> load_sr_dataset(const std::string& hr_dir, const std::string& lr_dir,
                                      int scale, int limit) {
  if (scale < 1) throw ArgError("load_sr_dataset: scale must be >= 1");
  std::vector<SrSample> out;
  for (const std::string& path : list_images(hr_dir)) {
    if (limit > 0 && static_cast<int>(out.size()) >= limit) break;
    SrSample s;
    s.name = fs::path(path).stem().string();
    s.hr = crop_modulo(load_image(path), scale);
    if (!lr_dir.empty()) {
      const std::string ext = fs::path(path).extension().string();
      const fs::path suffixed = fs::path(lr_dir) / (s.name + "x" + std::to_string(scale) + ext);
      const fs::path plain = fs::path(lr_dir) / (s.name + ext);
      const fs::path lr_path = fs::exists(suffixed) ? suffixed : plain;
      if (!fs::exists(lr_path))
        throw IoError("no paired LR image for " + s.name + " under " + lr_dir);
      s.lr = load_image(lr_path.string());
      if (s.lr.h() * scale != s.hr.h() || s.lr.w() * scale != s.hr.w())
        throw ShapeError("paired LR " + lr_path.string() + " does not match HR dims / scale");
    } else {
      s.lr = bicubic_resize(s.hr, s.hr.h() / scale, s.hr.w() / scale, true);
    }
    out.push_back(std::move(s));
  }
  if (out.empty()) throw IoError("no images found under " + hr_dir);
  return out;
}

}  // namespace fc2n
