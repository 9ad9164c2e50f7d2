#include "image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace fc2n {

ImageRGB::ImageRGB(int h, int w) : h_(h), w_(w) {
  if (h < 1 || w < 1)
    throw ShapeError("ImageRGB: dims must be >= 1, got " + std::to_string(h) + "x" +
                     std::to_string(w));
  data_.assign(static_cast<std::size_t>(3) * h * w, real(0));
}

ImageY::ImageY(int h, int w) : h_(h), w_(w) {
  if (h < 1 || w < 1)
    throw ShapeError("ImageY: dims must be >= 1, got " + std::to_string(h) + "x" +
                     std::to_string(w));
  data_.assign(static_cast<std::size_t>(h) * w, real(0));
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool has_suffix(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

std::uint8_t to_byte(real v) {
  const real r = std::round(v);
  return static_cast<std::uint8_t>(std::clamp<real>(r, 0, 255));
}

ImageRGB load_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path);

  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8))
    throw FormatError(path + ": not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng init failed");
  }
  std::vector<png_bytep> row_ptrs;
  std::vector<png_byte> pixels;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path + ": truncated or corrupt PNG");
  }

  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int bit_depth = png_get_bit_depth(png, info);
  if (bit_depth == 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path + ": unsupported depth, 16-bit PNG is not handled");
  }
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  if (bit_depth < 8) png_set_expand(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  const std::size_t stride = png_get_rowbytes(png, info);
  pixels.resize(stride * h);
  row_ptrs.resize(h);
  for (int y = 0; y < h; ++y) row_ptrs[y] = pixels.data() + y * stride;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  ImageRGB img(h, w);
  for (int y = 0; y < h; ++y) {
    const png_byte* row = pixels.data() + y * stride;
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) img.at(c, y, x) = static_cast<real>(row[x * 3 + c]);
  }
  return img;
}

void save_png(const ImageRGB& img, const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot write " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG write failed for " + path);
  }

  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.w(), img.h(), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<png_byte> row(static_cast<std::size_t>(img.w()) * 3);
  for (int y = 0; y < img.h(); ++y) {
    for (int x = 0; x < img.w(); ++x)
      for (int c = 0; c < 3; ++c) row[x * 3 + c] = to_byte(img.at(c, y, x));
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// P6 header tokens separated by whitespace, '#' comments allowed.
int ppm_token(std::istream& in, const std::string& path) {
  for (;;) {
    int ch = in.peek();
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (std::isspace(ch)) {
      in.get();
      continue;
    }
    break;
  }
  int v;
  if (!(in >> v)) throw FormatError(path + ": bad PPM header");
  return v;
}

ImageRGB load_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[2];
  if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '6')
    throw FormatError(path + ": unsupported format, expected binary PPM (P6)");
  const int w = ppm_token(in, path);
  const int h = ppm_token(in, path);
  const int maxval = ppm_token(in, path);
  if (maxval != 255) throw FormatError(path + ": unsupported depth, PPM maxval " +
                                       std::to_string(maxval) + " (only 255 handled)");
  in.get();  // single whitespace after maxval
  std::vector<unsigned char> buf(static_cast<std::size_t>(w) * h * 3);
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
    throw FormatError(path + ": truncated PPM payload");
  ImageRGB img(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        img.at(c, y, x) = static_cast<real>(buf[(static_cast<std::size_t>(y) * w + x) * 3 + c]);
  return img;
}

void save_ppm(const ImageRGB& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P6\n" << img.w() << " " << img.h() << "\n255\n";
  std::vector<unsigned char> buf(static_cast<std::size_t>(img.w()) * img.h() * 3);
  for (int y = 0; y < img.h(); ++y)
    for (int x = 0; x < img.w(); ++x)
      for (int c = 0; c < 3; ++c)
        buf[(static_cast<std::size_t>(y) * img.w() + x) * 3 + c] = to_byte(img.at(c, y, x));
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("short write to " + path);
}

}  // namespace

ImageRGB load_image(const std::string& path) {
  if (has_suffix(path, ".ppm") || has_suffix(path, ".PPM")) return load_ppm(path);
  return load_png(path);
}

void save_image(const ImageRGB& img, const std::string& path) {
  if (has_suffix(path, ".ppm") || has_suffix(path, ".PPM"))
    save_ppm(img, path);
  else
    save_png(img, path);
}

ImageRGB crop(const ImageRGB& img, int y0, int x0, int h, int w) {
  if (y0 < 0 || x0 < 0 || h < 1 || w < 1 || y0 + h > img.h() || x0 + w > img.w())
    throw ArgError("crop: region out of bounds");
  ImageRGB out(h, w);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) out.at(c, y, x) = img.at(c, y0 + y, x0 + x);
  return out;
}

ImageRGB crop_modulo(const ImageRGB& img, int modulo) {
  if (modulo < 1) throw ArgError("crop_modulo: modulo must be >= 1");
  const int h = img.h() - img.h() % modulo;
  const int w = img.w() - img.w() % modulo;
  if (h < 1 || w < 1)
    throw ArgError("crop_modulo: image " + std::to_string(img.h()) + "x" + std::to_string(img.w()) +
                   " smaller than modulo " + std::to_string(modulo));
  if (h == img.h() && w == img.w()) return img;
  return crop(img, 0, 0, h, w);
}

Tensor4 image_to_tensor(const ImageRGB& img) {
  Tensor4 t(1, img.h(), img.w(), 3);
  for (int y = 0; y < img.h(); ++y)
    for (int x = 0; x < img.w(); ++x)
      for (int c = 0; c < 3; ++c) t.at(0, y, x, c) = img.at(c, y, x) / real(255);
  return t;
}

ImageRGB tensor_to_image(const Tensor4& t, bool clamp) {
  if (t.n() != 1 || t.c() != 3)
    throw ShapeError("tensor_to_image: expected (1,H,W,3), got " + t.dims_str());
  ImageRGB img(t.h(), t.w());
  for (int y = 0; y < t.h(); ++y)
    for (int x = 0; x < t.w(); ++x)
      for (int c = 0; c < 3; ++c) {
        real v = t.at(0, y, x, c) * real(255);
        if (clamp) v = std::clamp<real>(v, 0, 255);
        img.at(c, y, x) = v;
      }
  return img;
}

}  // namespace fc2n
