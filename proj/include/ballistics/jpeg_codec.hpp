// Copyright 2026 The Image Ballistics Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BALLISTICS_JPEG_CODEC_HPP_
#define BALLISTICS_JPEG_CODEC_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <jpeglib.h>

#include "ballistics/errors.hpp"

namespace ballistics {

// Zigzag scan: kZigzagToNatural[k] is the natural (raster) index of the k-th
// coefficient in file storage order.
inline constexpr std::array<int, 64> kZigzagToNatural = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
};

struct RgbImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;  // interleaved RGB, row-major

  std::uint8_t* row(std::uint32_t y) { return pixels.data() + 3ull * width * y; }
  const std::uint8_t* row(std::uint32_t y) const {
    return pixels.data() + 3ull * width * y;
  }
};

struct EncodeOptions {
  int quality = 75;
  // Custom tables in zigzag (file storage) order; values must be 1..255 so the
  // emitted stream stays baseline and reads back bit-exactly.
  std::optional<std::array<std::uint16_t, 64>> luminance_dqt;
  std::optional<std::array<std::uint16_t, 64>> chrominance_dqt;
  bool grayscale = false;
  std::optional<std::vector<std::uint8_t>> app1_payload;
  int restart_interval = 0;
  bool progressive = false;
};

namespace detail {

struct JpegErrorTrap {
  jpeg_error_mgr mgr;
  std::jmp_buf env;
  char message[JMSG_LENGTH_MAX] = {0};

  static void on_error(j_common_ptr cinfo) {
    auto* trap = reinterpret_cast<JpegErrorTrap*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, trap->message);
    std::longjmp(trap->env, 1);
  }
};

struct MemBuffer {
  unsigned char* data = nullptr;
  unsigned long size = 0;
  ~MemBuffer() {
    if (data != nullptr) std::free(data);
  }
};

}  // namespace detail

// Decodes a baseline or progressive JPEG to 8-bit RGB.
inline RgbImage decode_jpeg(std::span<const std::uint8_t> bytes) {
  jpeg_decompress_struct cinfo{};
  detail::JpegErrorTrap trap;
  cinfo.err = jpeg_std_error(&trap.mgr);
  trap.mgr.error_exit = detail::JpegErrorTrap::on_error;

  jpeg_create_decompress(&cinfo);
  if (setjmp(trap.env)) {
    jpeg_destroy_decompress(&cinfo);
    throw DecodeError(trap.message);
  }
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  RgbImage image;
  image.width = cinfo.output_width;
  image.height = cinfo.output_height;
  image.pixels.resize(3ull * image.width * image.height);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = image.row(cinfo.output_scanline);
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return image;
}

// Reports just the frame size, without decoding pixel data.
inline std::pair<std::uint32_t, std::uint32_t> decode_dimensions(
    std::span<const std::uint8_t> bytes) {
  jpeg_decompress_struct cinfo{};
  detail::JpegErrorTrap trap;
  cinfo.err = jpeg_std_error(&trap.mgr);
  trap.mgr.error_exit = detail::JpegErrorTrap::on_error;

  jpeg_create_decompress(&cinfo);
  if (setjmp(trap.env)) {
    jpeg_destroy_decompress(&cinfo);
    throw DecodeError(trap.message);
  }
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  const std::pair<std::uint32_t, std::uint32_t> dims{cinfo.image_width,
                                                     cinfo.image_height};
  jpeg_destroy_decompress(&cinfo);
  return dims;
}

inline std::vector<std::uint8_t> encode_jpeg(const RgbImage& image,
                                             const EncodeOptions& options) {
  if (image.width == 0 || image.height == 0 ||
      image.pixels.size() != 3ull * image.width * image.height) {
    throw BadParams("encode_jpeg: inconsistent image buffer");
  }

  jpeg_compress_struct cinfo{};
  detail::JpegErrorTrap trap;
  detail::MemBuffer out;
  cinfo.err = jpeg_std_error(&trap.mgr);
  trap.mgr.error_exit = detail::JpegErrorTrap::on_error;

  jpeg_create_compress(&cinfo);
  if (setjmp(trap.env)) {
    jpeg_destroy_compress(&cinfo);
    throw DecodeError(trap.message);
  }
  jpeg_mem_dest(&cinfo, &out.data, &out.size);

  cinfo.image_width = image.width;
  cinfo.image_height = image.height;
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  if (options.grayscale) {
    jpeg_set_colorspace(&cinfo, JCS_GRAYSCALE);
  }
  jpeg_set_quality(&cinfo, options.quality, TRUE);

  // libjpeg takes quantization tables in natural order and stores them in
  // zigzag order in the file; undo the permutation so the file bytes equal
  // the caller's zigzag sequence.
  const auto install_table = [&cinfo](int slot,
                                      const std::array<std::uint16_t, 64>& zz) {
    unsigned int natural[64];
    for (int k = 0; k < 64; ++k) {
      natural[kZigzagToNatural[static_cast<std::size_t>(k)]] =
          zz[static_cast<std::size_t>(k)];
    }
    jpeg_add_quant_table(&cinfo, slot, natural, 100, TRUE);
  };
  if (options.luminance_dqt) install_table(0, *options.luminance_dqt);
  if (options.chrominance_dqt && !options.grayscale) {
    install_table(1, *options.chrominance_dqt);
  }

  if (options.restart_interval > 0) {
    cinfo.restart_interval =
        static_cast<unsigned int>(options.restart_interval);
  }
  if (options.progressive) {
    jpeg_simple_progression(&cinfo);
  }

  jpeg_start_compress(&cinfo, TRUE);
  if (options.app1_payload) {
    jpeg_write_marker(
        &cinfo, JPEG_APP0 + 1, options.app1_payload->data(),
        static_cast<unsigned int>(options.app1_payload->size()));
  }
  std::vector<std::uint8_t> rgb_row(3ull * image.width);
  while (cinfo.next_scanline < cinfo.image_height) {
    std::copy_n(image.row(cinfo.next_scanline), rgb_row.size(),
                rgb_row.data());
    JSAMPROW row = rgb_row.data();
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);

  return std::vector<std::uint8_t>(out.data, out.data + out.size);
}

// Bilinear resampling. Only the output geometry matters to the features, so a
// simple separable implementation is enough.
inline RgbImage resize_bilinear(const RgbImage& src, std::uint32_t new_width,
                                std::uint32_t new_height) {
  if (new_width == 0 || new_height == 0) {
    throw BadParams("resize_bilinear: zero target dimension");
  }
  RgbImage dst;
  dst.width = new_width;
  dst.height = new_height;
  dst.pixels.resize(3ull * new_width * new_height);

  const double x_scale =
      new_width > 1 ? static_cast<double>(src.width - 1) / (new_width - 1) : 0;
  const double y_scale =
      new_height > 1 ? static_cast<double>(src.height - 1) / (new_height - 1)
                     : 0;

  for (std::uint32_t y = 0; y < new_height; ++y) {
    const double sy = y * y_scale;
    const auto y0 = static_cast<std::uint32_t>(sy);
    const std::uint32_t y1 = std::min(y0 + 1, src.height - 1);
    const double fy = sy - y0;
    for (std::uint32_t x = 0; x < new_width; ++x) {
      const double sx = x * x_scale;
      const auto x0 = static_cast<std::uint32_t>(sx);
      const std::uint32_t x1 = std::min(x0 + 1, src.width - 1);
      const double fx = sx - x0;
      for (int c = 0; c < 3; ++c) {
        const double top = src.row(y0)[3 * x0 + c] * (1 - fx) +
                           src.row(y0)[3 * x1 + c] * fx;
        const double bottom = src.row(y1)[3 * x0 + c] * (1 - fx) +
                              src.row(y1)[3 * x1 + c] * fx;
        const double value = top * (1 - fy) + bottom * fy;
        dst.row(y)[3 * x + c] =
            static_cast<std::uint8_t>(std::lround(std::clamp(value, 0.0, 255.0)));
      }
    }
  }
  return dst;
}

}  // namespace ballistics

#endif  // BALLISTICS_JPEG_CODEC_HPP_
