#pragma once

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tsr/tensor.hpp"

namespace tsr {

/// 8-bit RGB image, interleaved rows (the PNG-facing representation).
struct ImageU8 {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> pixels;  // height*width*3

  uint8_t* row(int y) { return pixels.data() + static_cast<size_t>(y) * width * 3; }
  const uint8_t* row(int y) const { return pixels.data() + static_cast<size_t>(y) * width * 3; }
};

inline Tensor to_chw_float(const ImageU8& img) {
  Tensor t({3, img.height, img.width});
  const int64_t plane = static_cast<int64_t>(img.height) * img.width;
  for (int y = 0; y < img.height; ++y) {
    const uint8_t* r = img.row(y);
    for (int x = 0; x < img.width; ++x) {
      const int64_t p = static_cast<int64_t>(y) * img.width + x;
      t[0 * plane + p] = r[x * 3 + 0] / 255.0f;
      t[1 * plane + p] = r[x * 3 + 1] / 255.0f;
      t[2 * plane + p] = r[x * 3 + 2] / 255.0f;
    }
  }
  return t;
}

inline ImageU8 to_u8(const Tensor& chw) {
  check(chw.ndim() == 3 && chw.dim(0) == 3, "expected 3xHxW tensor");
  ImageU8 img;
  img.height = static_cast<int>(chw.dim(1));
  img.width = static_cast<int>(chw.dim(2));
  img.pixels.resize(static_cast<size_t>(img.height) * img.width * 3);
  const int64_t plane = static_cast<int64_t>(img.height) * img.width;
  for (int y = 0; y < img.height; ++y) {
    uint8_t* r = img.row(y);
    for (int x = 0; x < img.width; ++x) {
      const int64_t p = static_cast<int64_t>(y) * img.width + x;
      for (int c = 0; c < 3; ++c) {
        float v = std::clamp(chw[c * plane + p], 0.0f, 1.0f);
        r[x * 3 + c] = static_cast<uint8_t>(std::lround(v * 255.0f));
      }
    }
  }
  return img;
}

inline ImageU8 read_png(const std::string& path) {
  FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) fail("cannot open image: " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    fail("png decode failed: " + path);
  }
  png_init_io(png, fp);
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  ImageU8 img;
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.width = static_cast<int>(png_get_image_width(png, info));
  img.pixels.resize(static_cast<size_t>(img.height) * img.width * 3);
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) rows[y] = img.row(y);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  return img;
}

inline void write_png(const std::string& path, const ImageU8& img) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) fail("cannot write image: " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    fail("png encode failed: " + path);
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) rows[y] = const_cast<png_bytep>(img.row(y));
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

/// Bilinear resize of a CHW float image (align-corners off, like common
/// vision stacks).
inline Tensor resize_bilinear(const Tensor& src, int out_h, int out_w) {
  check(src.ndim() == 3, "expected CHW tensor");
  const int c = static_cast<int>(src.dim(0));
  const int h = static_cast<int>(src.dim(1));
  const int w = static_cast<int>(src.dim(2));
  check(h > 0 && w > 0 && out_h > 0 && out_w > 0, "zero-area image");
  Tensor dst({c, out_h, out_w});
  const float sy = static_cast<float>(h) / out_h;
  const float sx = static_cast<float>(w) / out_w;
  for (int oy = 0; oy < out_h; ++oy) {
    float fy = (oy + 0.5f) * sy - 0.5f;
    fy = std::clamp(fy, 0.0f, static_cast<float>(h - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, h - 1);
    const float wy = fy - y0;
    for (int ox = 0; ox < out_w; ++ox) {
      float fx = (ox + 0.5f) * sx - 0.5f;
      fx = std::clamp(fx, 0.0f, static_cast<float>(w - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, w - 1);
      const float wx = fx - x0;
      for (int ch = 0; ch < c; ++ch) {
        const float v00 = src.at(ch, y0, x0);
        const float v01 = src.at(ch, y0, x1);
        const float v10 = src.at(ch, y1, x0);
        const float v11 = src.at(ch, y1, x1);
        dst.at(ch, oy, ox) = v00 * (1 - wy) * (1 - wx) + v01 * (1 - wy) * wx +
                             v10 * wy * (1 - wx) + v11 * wy * wx;
      }
    }
  }
  return dst;
}

}  // namespace tsr
