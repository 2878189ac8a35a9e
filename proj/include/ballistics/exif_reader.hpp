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

#ifndef BALLISTICS_EXIF_READER_HPP_
#define BALLISTICS_EXIF_READER_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ballistics/errors.hpp"
#include "ballistics/jpeg_structure.hpp"

namespace ballistics {

using ExifValue = std::variant<std::int64_t, double, std::string>;

struct ExifEntry {
  std::string path;  // e.g. "IFD0.Make", "Exif.Tag0x9999"
  std::uint16_t tag = 0;
  ExifValue value;
};

// Flat view of every tag entry reachable from IFD0. An absent APP1 payload is
// represented by a default-constructed map with zero entries.
struct ExifMap {
  std::vector<ExifEntry> entries;
  int ifd_count = 0;

  const ExifEntry* find(std::uint16_t tag) const {
    for (const ExifEntry& e : entries) {
      if (e.tag == tag) return &e;
    }
    return nullptr;
  }

  const ExifEntry* find(const std::string& path) const {
    for (const ExifEntry& e : entries) {
      if (e.path == path) return &e;
    }
    return nullptr;
  }
};

inline std::string to_display_string(const ExifValue& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) {
    return std::to_string(*i);
  }
  if (const auto* d = std::get_if<double>(&value)) {
    std::ostringstream out;
    out << *d;
    return out.str();
  }
  return std::get<std::string>(value);
}

namespace exif_tags {

inline constexpr std::uint16_t kExifIfdPointer = 0x8769;
inline constexpr std::uint16_t kGpsIfdPointer = 0x8825;
inline constexpr std::uint16_t kInteropIfdPointer = 0xA005;
inline constexpr std::uint16_t kMakerNote = 0x927C;
inline constexpr std::uint16_t kUniqueCameraModel = 0xC614;

// Low-numbered tags are namespaced per IFD family: the GPS and
// Interoperability IFDs reuse the same small tag numbers with different
// meanings.
enum class IfdFamily { kTiff, kGps, kInterop };

inline std::string name(std::uint16_t tag, IfdFamily family = IfdFamily::kTiff) {
  if (family == IfdFamily::kGps) {
    switch (tag) {
      case 0x0000: return "GPSVersionID";
      case 0x0001: return "GPSLatitudeRef";
      case 0x0002: return "GPSLatitude";
      case 0x0003: return "GPSLongitudeRef";
      case 0x0004: return "GPSLongitude";
      case 0x0005: return "GPSAltitudeRef";
      case 0x0006: return "GPSAltitude";
      case 0x0010: return "GPSImgDirectionRef";
      default: break;
    }
  } else if (family == IfdFamily::kInterop) {
    switch (tag) {
      case 0x0001: return "InteropIndex";
      case 0x0002: return "InteropVersion";
      default: break;
    }
  } else {
    switch (tag) {
      case 0x0100: return "ImageWidth";
      case 0x0101: return "ImageLength";
      case 0x0103: return "Compression";
      case 0x010F: return "Make";
      case 0x0110: return "Model";
      case 0x0112: return "Orientation";
      case 0x011A: return "XResolution";
      case 0x011B: return "YResolution";
      case 0x0128: return "ResolutionUnit";
      case 0x0131: return "Software";
      case 0x0132: return "DateTime";
      case 0x0201: return "JPEGInterchangeFormat";
      case 0x0202: return "JPEGInterchangeFormatLength";
      case 0x829A: return "ExposureTime";
      case 0x829D: return "FNumber";
      case 0x8822: return "ExposureProgram";
      case 0x8827: return "ISOSpeedRatings";
      case 0x9003: return "DateTimeOriginal";
      case 0x9004: return "DateTimeDigitized";
      case 0x9201: return "ShutterSpeedValue";
      case 0x9202: return "ApertureValue";
      case 0x9209: return "Flash";
      case 0x920A: return "FocalLength";
      case 0xA002: return "PixelXDimension";
      case 0xA003: return "PixelYDimension";
      case kExifIfdPointer: return "ExifIFDPointer";
      case kGpsIfdPointer: return "GPSIFDPointer";
      case kInteropIfdPointer: return "InteropIFDPointer";
      case kMakerNote: return "MakerNote";
      case kUniqueCameraModel: return "UniqueCameraModel";
      default: break;
    }
  }
  char buf[12];
  std::snprintf(buf, sizeof buf, "Tag0x%04X", tag);
  return buf;
}

}  // namespace exif_tags

namespace detail {

class TiffReader {
 public:
  TiffReader(std::span<const std::uint8_t> tiff, bool little_endian)
      : tiff_(tiff), little_endian_(little_endian) {}

  std::size_t size() const { return tiff_.size(); }

  bool in_bounds(std::size_t pos, std::size_t count) const {
    return pos + count <= tiff_.size() && pos + count >= pos;
  }

  std::uint8_t u8(std::size_t pos) const { return tiff_[pos]; }

  std::uint16_t u16(std::size_t pos) const {
    if (little_endian_) {
      return static_cast<std::uint16_t>(tiff_[pos] | (tiff_[pos + 1] << 8));
    }
    return static_cast<std::uint16_t>((tiff_[pos] << 8) | tiff_[pos + 1]);
  }

  std::uint32_t u32(std::size_t pos) const {
    if (little_endian_) {
      return static_cast<std::uint32_t>(tiff_[pos]) |
             (static_cast<std::uint32_t>(tiff_[pos + 1]) << 8) |
             (static_cast<std::uint32_t>(tiff_[pos + 2]) << 16) |
             (static_cast<std::uint32_t>(tiff_[pos + 3]) << 24);
    }
    return (static_cast<std::uint32_t>(tiff_[pos]) << 24) |
           (static_cast<std::uint32_t>(tiff_[pos + 1]) << 16) |
           (static_cast<std::uint32_t>(tiff_[pos + 2]) << 8) |
           static_cast<std::uint32_t>(tiff_[pos + 3]);
  }

 private:
  std::span<const std::uint8_t> tiff_;
  bool little_endian_;
};

inline std::size_t exif_type_size(std::uint16_t type) {
  switch (type) {
    case 1: case 2: case 6: case 7: return 1;  // BYTE, ASCII, SBYTE, UNDEFINED
    case 3: case 8: return 2;                  // SHORT, SSHORT
    case 4: case 9: case 11: return 4;         // LONG, SLONG, FLOAT
    case 5: case 10: case 12: return 8;        // RATIONAL, SRATIONAL, DOUBLE
    default: return 0;                         // unknown type
  }
}

// Decodes one entry's value. Unreadable data keeps the entry with a
// placeholder so the entry count stays faithful to the structure.
inline ExifValue decode_entry_value(const TiffReader& r, std::uint16_t tag,
                                    std::uint16_t type, std::uint32_t count,
                                    std::size_t value_field_pos) {
  const std::size_t unit = exif_type_size(type);
  if (unit == 0) return std::string("(unknown type)");
  if (tag == exif_tags::kMakerNote) {
    return "(maker note, " + std::to_string(count) + " bytes)";
  }
  const std::uint64_t total = static_cast<std::uint64_t>(unit) * count;
  std::size_t pos = value_field_pos;
  if (total > 4) {
    if (!r.in_bounds(value_field_pos, 4)) return std::string("(unreadable)");
    pos = r.u32(value_field_pos);
  }
  if (total > r.size() || !r.in_bounds(pos, static_cast<std::size_t>(total))) {
    return std::string("(unreadable)");
  }

  if (type == 2) {  // ASCII
    std::string text;
    for (std::uint32_t i = 0; i < count; ++i) {
      const char c = static_cast<char>(r.u8(pos + i));
      if (c == '\0') break;
      text.push_back(c);
    }
    return text;
  }
  if (type == 7 || type == 1 || type == 6) {  // byte-ish
    if (count == 1) {
      return static_cast<std::int64_t>(type == 6
                                           ? static_cast<std::int8_t>(r.u8(pos))
                                           : r.u8(pos));
    }
    return "(" + std::to_string(count) + " bytes)";
  }

  const auto scalar = [&](std::uint32_t i) -> ExifValue {
    const std::size_t p = pos + i * unit;
    switch (type) {
      case 3: return static_cast<std::int64_t>(r.u16(p));
      case 8: return static_cast<std::int64_t>(static_cast<std::int16_t>(r.u16(p)));
      case 4: return static_cast<std::int64_t>(r.u32(p));
      case 9: return static_cast<std::int64_t>(static_cast<std::int32_t>(r.u32(p)));
      case 5: {
        const double den = r.u32(p + 4);
        return den == 0 ? ExifValue(std::string("inf")) : ExifValue(r.u32(p) / den);
      }
      case 10: {
        const double den = static_cast<std::int32_t>(r.u32(p + 4));
        return den == 0 ? ExifValue(std::string("inf"))
                        : ExifValue(static_cast<std::int32_t>(r.u32(p)) / den);
      }
      case 11: {
        const std::uint32_t bits = r.u32(p);
        float f;
        std::memcpy(&f, &bits, sizeof f);
        return static_cast<double>(f);
      }
      case 12: {
        std::uint64_t bits = (static_cast<std::uint64_t>(r.u32(p)) << 32) |
                             r.u32(p + 4);
        double d;
        std::memcpy(&d, &bits, sizeof d);
        return d;
      }
      default: return std::string("(unknown type)");
    }
  };

  if (count == 1) return scalar(0);
  std::ostringstream joined;
  const std::uint32_t shown = std::min<std::uint32_t>(count, 8);
  for (std::uint32_t i = 0; i < shown; ++i) {
    if (i > 0) joined << ' ';
    joined << to_display_string(scalar(i));
  }
  if (shown < count) joined << " ...";
  return joined.str();
}

}  // namespace detail

// Parses an APP1 Exif payload (including the "Exif\0\0" preamble) into a flat
// entry list. Walks IFD0, the Exif/GPS/Interoperability sub-IFDs and the
// thumbnail IFD chain. Malformed sub-IFD offsets terminate that branch only;
// an offset seen twice aborts the chain (cycle guard).
inline ExifMap parse_exif(std::span<const std::uint8_t> payload) {
  if (payload.size() < kExifPreamble.size() ||
      !std::equal(kExifPreamble.begin(), kExifPreamble.end(),
                  payload.begin())) {
    throw NotExif("payload does not start with the Exif preamble");
  }
  const std::span<const std::uint8_t> tiff =
      payload.subspan(kExifPreamble.size());
  if (tiff.size() < 8) throw MalformedTiff("TIFF header truncated");
  bool little_endian;
  if (tiff[0] == 'I' && tiff[1] == 'I') {
    little_endian = true;
  } else if (tiff[0] == 'M' && tiff[1] == 'M') {
    little_endian = false;
  } else {
    throw MalformedTiff("invalid byte-order mark");
  }
  const detail::TiffReader reader(tiff, little_endian);
  if (reader.u16(2) != 42) throw MalformedTiff("missing TIFF magic 42");
  const std::uint32_t ifd0_offset = reader.u32(4);
  if (!reader.in_bounds(ifd0_offset, 2)) {
    throw MalformedTiff("IFD0 offset outside payload");
  }

  ExifMap map;
  std::set<std::uint32_t> visited;

  // Walks one IFD table; returns the next-IFD offset (0 when absent).
  const auto walk_ifd = [&](std::uint32_t offset, const std::string& ifd_name,
                            auto&& self) -> std::uint32_t {
    if (!reader.in_bounds(offset, 2)) return 0;
    if (!visited.insert(offset).second) return 0;
    ++map.ifd_count;
    const std::uint16_t entry_count = reader.u16(offset);
    std::size_t pos = offset + 2;
    for (std::uint16_t i = 0; i < entry_count; ++i, pos += 12) {
      if (!reader.in_bounds(pos, 12)) break;
      const std::uint16_t tag = reader.u16(pos);
      const std::uint16_t type = reader.u16(pos + 2);
      const std::uint32_t count = reader.u32(pos + 4);
      const exif_tags::IfdFamily family =
          ifd_name == "GPS"       ? exif_tags::IfdFamily::kGps
          : ifd_name == "Interop" ? exif_tags::IfdFamily::kInterop
                                  : exif_tags::IfdFamily::kTiff;
      ExifEntry entry;
      entry.tag = tag;
      entry.path = ifd_name + "." + exif_tags::name(tag, family);
      entry.value = detail::decode_entry_value(reader, tag, type, count, pos + 8);
      map.entries.push_back(std::move(entry));

      const bool pointer_tag = tag == exif_tags::kExifIfdPointer ||
                               tag == exif_tags::kGpsIfdPointer ||
                               tag == exif_tags::kInteropIfdPointer;
      if (pointer_tag && reader.in_bounds(pos + 8, 4)) {
        const std::uint32_t sub_offset = reader.u32(pos + 8);
        const std::string sub_name =
            tag == exif_tags::kExifIfdPointer  ? "Exif"
            : tag == exif_tags::kGpsIfdPointer ? "GPS"
                                               : "Interop";
        self(sub_offset, sub_name, self);
      }
    }
    if (!reader.in_bounds(pos, 4)) return 0;
    return reader.u32(pos);
  };

  std::uint32_t next = walk_ifd(ifd0_offset, "IFD0", walk_ifd);
  int chain_index = 1;
  while (next != 0) {
    next = walk_ifd(next, "IFD" + std::to_string(chain_index), walk_ifd);
    ++chain_index;
  }
  return map;
}

inline int count_entries(const ExifMap& exif) {
  return static_cast<int>(exif.entries.size());
}

// Value of the UniqueCameraModel tag (0xC614) when present in any IFD.
inline std::optional<std::string> unique_camera_model(const ExifMap& exif) {
  const ExifEntry* entry = exif.find(exif_tags::kUniqueCameraModel);
  if (entry == nullptr) return std::nullopt;
  return to_display_string(entry->value);
}

}  // namespace ballistics

#endif  // BALLISTICS_EXIF_READER_HPP_
