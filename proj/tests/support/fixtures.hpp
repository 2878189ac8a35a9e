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

#ifndef BALLISTICS_TESTS_SUPPORT_FIXTURES_HPP_
#define BALLISTICS_TESTS_SUPPORT_FIXTURES_HPP_

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ballistics/jpeg_codec.hpp"
#include "ballistics/random.hpp"

namespace ballistics::testing {

inline RgbImage solid_image(std::uint32_t width, std::uint32_t height,
                            std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage image;
  image.width = width;
  image.height = height;
  image.pixels.resize(3ull * width * height);
  for (std::size_t i = 0; i < image.pixels.size(); i += 3) {
    image.pixels[i] = r;
    image.pixels[i + 1] = g;
    image.pixels[i + 2] = b;
  }
  return image;
}

inline RgbImage noise_image(std::uint32_t width, std::uint32_t height,
                            std::uint64_t seed) {
  RgbImage image;
  image.width = width;
  image.height = height;
  image.pixels.resize(3ull * width * height);
  SeededRng rng(seed);
  for (std::uint8_t& byte : image.pixels) {
    byte = static_cast<std::uint8_t>(rng.below(256));
  }
  return image;
}

inline std::filesystem::path unique_temp_dir(const std::string& prefix) {
  static int counter = 0;
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      (prefix + "_" + std::to_string(::getpid()) + "_" +
       std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return dir;
}

// Constructs valid little-endian Exif APP1 payloads for parser tests. The
// builder tracks how many 12-byte entries it wrote, which is the count oracle
// the parser is checked against. Pointer entries (Exif/GPS/Interop IFD
// pointers) are added automatically when the corresponding IFD is non-empty
// and are included in the count.
class ExifFixtureBuilder {
 public:
  class Ifd {
   public:
    void ascii(std::uint16_t tag, const std::string& text) {
      std::vector<std::uint8_t> data(text.begin(), text.end());
      data.push_back(0);
      const auto count = static_cast<std::uint32_t>(data.size());
      add(tag, 2, count, std::move(data));
    }

    void u16(std::uint16_t tag, std::uint16_t value) {
      add(tag, 3, 1, {static_cast<std::uint8_t>(value & 0xFF),
                      static_cast<std::uint8_t>(value >> 8)});
    }

    void u32(std::uint16_t tag, std::uint32_t value) {
      add(tag, 4, 1,
          {static_cast<std::uint8_t>(value & 0xFF),
           static_cast<std::uint8_t>((value >> 8) & 0xFF),
           static_cast<std::uint8_t>((value >> 16) & 0xFF),
           static_cast<std::uint8_t>((value >> 24) & 0xFF)});
    }

    void rational(std::uint16_t tag, std::uint32_t numerator,
                  std::uint32_t denominator) {
      std::vector<std::uint8_t> data;
      for (std::uint32_t v : {numerator, denominator}) {
        data.push_back(static_cast<std::uint8_t>(v & 0xFF));
        data.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
        data.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
        data.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
      }
      add(tag, 5, 1, std::move(data));
    }

    void undefined(std::uint16_t tag, std::vector<std::uint8_t> bytes) {
      const auto count = static_cast<std::uint32_t>(bytes.size());
      add(tag, 7, count, std::move(bytes));
    }

    int entry_count() const { return static_cast<int>(entries_.size()); }
    bool empty() const { return entries_.empty(); }

   private:
    friend class ExifFixtureBuilder;
    struct Entry {
      std::uint16_t tag;
      std::uint16_t type;
      std::uint32_t count;
      std::vector<std::uint8_t> data;  // value bytes, inline when <= 4
    };

    void add(std::uint16_t tag, std::uint16_t type, std::uint32_t count,
             std::vector<std::uint8_t> data) {
      entries_.push_back({tag, type, count, std::move(data)});
    }

    std::vector<Entry> entries_;
  };

  Ifd& ifd0() { return ifd0_; }
  Ifd& exif_ifd() { return exif_; }
  Ifd& gps_ifd() { return gps_; }
  Ifd& interop_ifd() { return interop_; }
  Ifd& ifd1() { return ifd1_; }

  // Total tag entries across all IFDs, including auto-added pointer entries.
  int total_entries() const {
    int total = ifd0_.entry_count() + exif_.entry_count() + gps_.entry_count() +
                interop_.entry_count() + ifd1_.entry_count();
    if (!exif_.empty()) ++total;     // Exif IFD pointer in IFD0
    if (!gps_.empty()) ++total;      // GPS IFD pointer in IFD0
    if (!interop_.empty()) ++total;  // Interop pointer in the Exif IFD
    return total;
  }

  int ifd_count() const {
    int count = 1;  // IFD0 always present
    if (!exif_.empty()) ++count;
    if (!gps_.empty()) ++count;
    if (!interop_.empty()) ++count;
    if (!ifd1_.empty()) ++count;
    return count;
  }

  std::vector<std::uint8_t> build() const {
    // Layout, offsets relative to the TIFF header:
    //   8: IFD0 | Exif IFD | GPS IFD | Interop IFD | IFD1 | data area
    Ifd ifd0 = ifd0_;
    Ifd exif = exif_;
    const std::uint32_t pointer_entries_ifd0 =
        (exif_.empty() ? 0u : 1u) + (gps_.empty() ? 0u : 1u);

    const auto block_size = [](const Ifd& ifd, std::uint32_t extra_entries) {
      return 2 + 12 * (static_cast<std::uint32_t>(ifd.entries_.size()) +
                       extra_entries) +
             4;
    };

    const std::uint32_t ifd0_offset = 8;
    const std::uint32_t exif_offset =
        ifd0_offset + block_size(ifd0_, pointer_entries_ifd0);
    const std::uint32_t gps_offset =
        exif_offset +
        (exif_.empty() ? 0
                       : block_size(exif_, interop_.empty() ? 0u : 1u));
    const std::uint32_t interop_offset =
        gps_offset + (gps_.empty() ? 0 : block_size(gps_, 0));
    const std::uint32_t ifd1_offset =
        interop_offset + (interop_.empty() ? 0 : block_size(interop_, 0));
    const std::uint32_t data_offset =
        ifd1_offset + (ifd1_.empty() ? 0 : block_size(ifd1_, 0));

    if (!exif_.empty()) ifd0.u32(0x8769, exif_offset);
    if (!gps_.empty()) ifd0.u32(0x8825, gps_offset);
    if (!interop_.empty()) exif.u32(0xA005, interop_offset);

    std::vector<std::uint8_t> tiff;
    std::vector<std::uint8_t> data_area;
    const auto push16 = [&tiff](std::uint16_t v) {
      tiff.push_back(static_cast<std::uint8_t>(v & 0xFF));
      tiff.push_back(static_cast<std::uint8_t>(v >> 8));
    };
    const auto push32 = [&tiff](std::uint32_t v) {
      tiff.push_back(static_cast<std::uint8_t>(v & 0xFF));
      tiff.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
      tiff.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
      tiff.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
    };

    tiff.push_back('I');
    tiff.push_back('I');
    push16(42);
    push32(ifd0_offset);

    const auto emit_ifd = [&](const Ifd& ifd, std::uint32_t next_offset) {
      push16(static_cast<std::uint16_t>(ifd.entries_.size()));
      for (const Ifd::Entry& entry : ifd.entries_) {
        push16(entry.tag);
        push16(entry.type);
        push32(entry.count);
        if (entry.data.size() <= 4) {
          std::size_t i = 0;
          for (; i < entry.data.size(); ++i) tiff.push_back(entry.data[i]);
          for (; i < 4; ++i) tiff.push_back(0);
        } else {
          push32(data_offset + static_cast<std::uint32_t>(data_area.size()));
          data_area.insert(data_area.end(), entry.data.begin(),
                           entry.data.end());
          if (data_area.size() % 2 != 0) data_area.push_back(0);  // word align
        }
      }
      push32(next_offset);
    };

    emit_ifd(ifd0, ifd1_.empty() ? 0 : ifd1_offset);
    if (!exif_.empty()) emit_ifd(exif, 0);
    if (!gps_.empty()) emit_ifd(gps_, 0);
    if (!interop_.empty()) emit_ifd(interop_, 0);
    if (!ifd1_.empty()) emit_ifd(ifd1_, 0);
    tiff.insert(tiff.end(), data_area.begin(), data_area.end());

    std::vector<std::uint8_t> payload = {'E', 'x', 'i', 'f', 0, 0};
    payload.insert(payload.end(), tiff.begin(), tiff.end());
    return payload;
  }

 private:
  Ifd ifd0_, exif_, gps_, interop_, ifd1_;
};

// A representative phone-camera style EXIF payload; entry count available
// from the builder.
inline ExifFixtureBuilder camera_exif_fixture() {
  ExifFixtureBuilder b;
  b.ifd0().ascii(0x010F, "Canon");
  b.ifd0().ascii(0x0110, "Canon Eos 650D");
  b.ifd0().u16(0x0112, 1);
  b.ifd0().rational(0x011A, 72, 1);
  b.ifd0().rational(0x011B, 72, 1);
  b.ifd0().u16(0x0128, 2);
  b.ifd0().ascii(0x0131, "fw 1.0.1");
  b.ifd0().ascii(0x0132, "2016:03:14 10:00:00");
  b.exif_ifd().rational(0x829A, 1, 60);
  b.exif_ifd().rational(0x829D, 28, 10);
  b.exif_ifd().u16(0x8822, 2);
  b.exif_ifd().u16(0x8827, 400);
  b.exif_ifd().ascii(0x9003, "2016:03:14 10:00:00");
  b.exif_ifd().ascii(0x9004, "2016:03:14 10:00:00");
  b.exif_ifd().u16(0x9209, 16);
  b.exif_ifd().rational(0x920A, 50, 10);
  b.exif_ifd().rational(0x9201, 6643856, 1000000);
  b.exif_ifd().rational(0x9202, 2970854, 1000000);
  b.exif_ifd().u32(0xA002, 3264);
  b.exif_ifd().u32(0xA003, 2448);
  b.gps_ifd().ascii(0x0001, "N");
  b.gps_ifd().ascii(0x0003, "E");
  b.gps_ifd().ascii(0x0010, "T");
  b.interop_ifd().ascii(0x0001, "R98");
  b.ifd1().u16(0x0103, 6);
  b.ifd1().u32(0x0201, 0);
  b.ifd1().u32(0x0202, 0);
  return b;
}

}  // namespace ballistics::testing

#endif  // BALLISTICS_TESTS_SUPPORT_FIXTURES_HPP_
