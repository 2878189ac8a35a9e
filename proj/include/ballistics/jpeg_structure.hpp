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

#ifndef BALLISTICS_JPEG_STRUCTURE_HPP_
#define BALLISTICS_JPEG_STRUCTURE_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ballistics/errors.hpp"

namespace ballistics {

namespace markers {

inline constexpr std::uint8_t kTem = 0x01;
inline constexpr std::uint8_t kSof0 = 0xC0;
inline constexpr std::uint8_t kSof2 = 0xC2;
inline constexpr std::uint8_t kDht = 0xC4;
inline constexpr std::uint8_t kJpg = 0xC8;
inline constexpr std::uint8_t kDac = 0xCC;
inline constexpr std::uint8_t kRst0 = 0xD0;
inline constexpr std::uint8_t kRst7 = 0xD7;
inline constexpr std::uint8_t kSoi = 0xD8;
inline constexpr std::uint8_t kEoi = 0xD9;
inline constexpr std::uint8_t kSos = 0xDA;
inline constexpr std::uint8_t kDqt = 0xDB;
inline constexpr std::uint8_t kDnl = 0xDC;
inline constexpr std::uint8_t kDri = 0xDD;
inline constexpr std::uint8_t kApp0 = 0xE0;
inline constexpr std::uint8_t kApp1 = 0xE1;
inline constexpr std::uint8_t kAppF = 0xEF;
inline constexpr std::uint8_t kCom = 0xFE;

inline bool is_rst(std::uint8_t code) { return code >= kRst0 && code <= kRst7; }

inline bool is_app(std::uint8_t code) { return code >= kApp0 && code <= kAppF; }

// SOFn frame headers: 0xC0-0xCF except DHT (0xC4), JPG (0xC8), DAC (0xCC).
inline bool is_sof(std::uint8_t code) {
  return code >= kSof0 && code <= 0xCF && code != kDht && code != kJpg &&
         code != kDac;
}

// Markers with no length field and no payload.
inline bool is_standalone(std::uint8_t code) {
  return code == kSoi || code == kEoi || code == kTem || is_rst(code);
}

// Markers counted as structure by the feature extractor. Restart markers are
// excluded: their number scales with image content, not file structure.
inline bool is_structural(std::uint8_t code) {
  return code == kSoi || code == kEoi || is_app(code) || code == kCom ||
         code == kDqt || code == kDht || is_sof(code) || code == kSos ||
         code == kDri;
}

inline std::string name(std::uint8_t code) {
  if (is_rst(code)) return "RST" + std::to_string(code - kRst0);
  if (is_app(code)) return "APP" + std::to_string(code - kApp0);
  if (is_sof(code)) return "SOF" + std::to_string(code - kSof0);
  switch (code) {
    case kTem: return "TEM";
    case kDht: return "DHT";
    case kSoi: return "SOI";
    case kEoi: return "EOI";
    case kSos: return "SOS";
    case kDqt: return "DQT";
    case kDnl: return "DNL";
    case kDri: return "DRI";
    case kCom: return "COM";
    default: break;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "FF%02X", code);
  return buf;
}

}  // namespace markers

// One 0xFF-prefixed segment of a JPEG stream. `length` is the raw 16-bit
// length field as declared in the file (it includes its own two bytes), zero
// for standalone markers; `payload` holds the `length - 2` bytes that follow.
struct MarkerSegment {
  std::uint8_t marker_code = 0;
  std::size_t offset = 0;
  std::uint16_t length = 0;
  std::vector<std::uint8_t> payload;

  bool standalone() const { return markers::is_standalone(marker_code); }
};

// The `coefficients` are kept in file storage (zigzag) order.
struct QuantizationTable {
  int table_id = 0;
  int precision_bits = 8;
  std::array<std::uint16_t, 64> coefficients{};

  bool operator==(const QuantizationTable&) const = default;
};

struct JpegStructure {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<MarkerSegment> segments;
  QuantizationTable luminance_table;
  std::optional<QuantizationTable> chrominance_table;
  std::optional<std::vector<std::uint8_t>> exif_payload;
};

inline constexpr std::array<std::uint8_t, 6> kExifPreamble = {'E', 'x', 'i',
                                                              'f', 0,   0};

namespace detail {

inline std::uint16_t read_be16(std::span<const std::uint8_t> bytes,
                               std::size_t pos) {
  return static_cast<std::uint16_t>((bytes[pos] << 8) | bytes[pos + 1]);
}

}  // namespace detail

// Scans a JPEG byte stream into its marker segments, SOI through EOI.
// Byte-stuffed 0xFF00 pairs and 0xFF fill bytes inside entropy-coded data are
// not markers; restart markers found there are reported as standalone
// segments. Bytes after EOI are ignored.
inline std::vector<MarkerSegment> scan_markers(
    std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 0xFF || bytes[1] != markers::kSoi) {
    throw MalformedJpeg("stream does not begin with SOI");
  }

  std::vector<MarkerSegment> segments;
  segments.push_back({markers::kSoi, 0, 0, {}});

  std::size_t pos = 2;
  bool in_entropy = false;
  while (true) {
    if (in_entropy) {
      // Skip entropy-coded data up to the next true marker.
      bool found = false;
      while (pos + 1 < bytes.size()) {
        if (bytes[pos] != 0xFF) {
          ++pos;
          continue;
        }
        const std::uint8_t code = bytes[pos + 1];
        if (code == 0x00) {  // stuffed data byte
          pos += 2;
          continue;
        }
        if (code == 0xFF) {  // fill byte
          ++pos;
          continue;
        }
        if (markers::is_rst(code)) {
          segments.push_back({code, pos, 0, {}});
          pos += 2;
          continue;
        }
        found = true;
        break;
      }
      if (!found) {
        throw MalformedJpeg("entropy-coded data ends without a marker");
      }
      in_entropy = false;
    }

    if (pos + 1 >= bytes.size()) {
      throw MalformedJpeg("truncated stream: no EOI");
    }
    if (bytes[pos] != 0xFF) {
      throw MalformedJpeg("expected marker at offset " + std::to_string(pos));
    }
    // Any number of 0xFF fill bytes may precede the marker code.
    while (pos + 1 < bytes.size() && bytes[pos + 1] == 0xFF) ++pos;
    if (pos + 1 >= bytes.size()) {
      throw MalformedJpeg("truncated stream: no EOI");
    }
    const std::uint8_t code = bytes[pos + 1];
    if (code == 0x00) {
      throw MalformedJpeg("stuffed byte outside entropy-coded data at offset " +
                          std::to_string(pos));
    }

    if (markers::is_standalone(code)) {
      segments.push_back({code, pos, 0, {}});
      pos += 2;
      if (code == markers::kEoi) break;
      continue;
    }

    if (pos + 4 > bytes.size()) {
      throw MalformedJpeg("truncated segment header at offset " +
                          std::to_string(pos));
    }
    const std::uint16_t length = detail::read_be16(bytes, pos + 2);
    if (length < 2) {
      throw MalformedJpeg("segment length < 2 at offset " +
                          std::to_string(pos));
    }
    if (pos + 2 + length > bytes.size()) {
      throw MalformedJpeg("segment overruns file at offset " +
                          std::to_string(pos));
    }
    MarkerSegment seg;
    seg.marker_code = code;
    seg.offset = pos;
    seg.length = length;
    seg.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos + 4),
                       bytes.begin() +
                           static_cast<std::ptrdiff_t>(pos + 2 + length));
    segments.push_back(std::move(seg));
    pos += 2 + static_cast<std::size_t>(length);
    if (code == markers::kSos) in_entropy = true;
  }
  return segments;
}

// Frame width and height from the first SOF segment.
inline std::pair<std::uint32_t, std::uint32_t> extract_dimensions(
    const std::vector<MarkerSegment>& segments) {
  for (const MarkerSegment& seg : segments) {
    if (!markers::is_sof(seg.marker_code)) continue;
    if (seg.payload.size() < 5) {
      throw MalformedJpeg("SOF payload too short");
    }
    const std::uint32_t height =
        static_cast<std::uint32_t>((seg.payload[1] << 8) | seg.payload[2]);
    const std::uint32_t width =
        static_cast<std::uint32_t>((seg.payload[3] << 8) | seg.payload[4]);
    if (width == 0 || height == 0) {
      throw MalformedJpeg("SOF declares a zero dimension");
    }
    return {width, height};
  }
  throw NoFrameHeader("no SOF marker in segment list");
}

// Quantization tables in definition order; when a table id is defined more
// than once the first definition wins. Coefficients stay in zigzag order.
inline std::pair<QuantizationTable, std::optional<QuantizationTable>>
extract_quant_tables(const std::vector<MarkerSegment>& segments) {
  std::array<std::optional<QuantizationTable>, 4> tables;
  for (const MarkerSegment& seg : segments) {
    if (seg.marker_code != markers::kDqt) continue;
    std::size_t pos = 0;
    while (pos < seg.payload.size()) {
      const std::uint8_t pq_tq = seg.payload[pos++];
      const int precision = pq_tq >> 4;
      const int id = pq_tq & 0x0F;
      if (precision > 1) {
        throw MalformedJpeg("DQT precision field out of range");
      }
      if (id > 3) {
        throw MalformedJpeg("DQT table id out of range");
      }
      const std::size_t entry_bytes = precision == 0 ? 1 : 2;
      if (pos + 64 * entry_bytes > seg.payload.size()) {
        throw MalformedJpeg("DQT payload truncated");
      }
      QuantizationTable table;
      table.table_id = id;
      table.precision_bits = precision == 0 ? 8 : 16;
      for (int k = 0; k < 64; ++k) {
        std::uint16_t value;
        if (precision == 0) {
          value = seg.payload[pos++];
        } else {
          value = static_cast<std::uint16_t>((seg.payload[pos] << 8) |
                                             seg.payload[pos + 1]);
          pos += 2;
        }
        if (value == 0) {
          throw MalformedJpeg("zero quantizer coefficient");
        }
        table.coefficients[static_cast<std::size_t>(k)] = value;
      }
      if (!tables[static_cast<std::size_t>(id)]) {
        tables[static_cast<std::size_t>(id)] = table;
      }
    }
  }
  if (!tables[0]) {
    throw NoQuantTable("no quantization table with id 0");
  }
  return {*tables[0], tables[1]};
}

// Count of structural markers: SOI, EOI, APPn, COM, DQT, DHT, SOF*, SOS, DRI.
inline int count_structural_markers(
    const std::vector<MarkerSegment>& segments) {
  int count = 0;
  for (const MarkerSegment& seg : segments) {
    if (markers::is_structural(seg.marker_code)) ++count;
  }
  return count;
}

// Full structural parse of one JPEG byte stream.
inline JpegStructure parse_jpeg(std::span<const std::uint8_t> bytes) {
  JpegStructure structure;
  structure.segments = scan_markers(bytes);
  auto [width, height] = extract_dimensions(structure.segments);
  structure.width = width;
  structure.height = height;
  auto [lum, chroma] = extract_quant_tables(structure.segments);
  structure.luminance_table = lum;
  structure.chrominance_table = chroma;
  for (const MarkerSegment& seg : structure.segments) {
    if (seg.marker_code != markers::kApp1) continue;
    if (seg.payload.size() < kExifPreamble.size()) continue;
    if (!std::equal(kExifPreamble.begin(), kExifPreamble.end(),
                    seg.payload.begin())) {
      continue;
    }
    structure.exif_payload = seg.payload;
    break;
  }
  return structure;
}

}  // namespace ballistics

#endif  // BALLISTICS_JPEG_STRUCTURE_HPP_
