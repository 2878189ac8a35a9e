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

#include "ballistics/jpeg_structure.hpp"

#include <vector>

#include "gtest/gtest.h"

#include "ballistics/jpeg_codec.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace ballistics {
namespace {

using testing::dump_segments;
using testing::dump_structural_count;
using testing::noise_image;
using testing::solid_image;

std::vector<std::uint8_t> encode_gray16() {
  return encode_jpeg(solid_image(16, 16, 128, 128, 128), {});
}

TEST(ScanMarkers, MinimalBaselineFixtureHasElevenSegments) {
  const std::vector<std::uint8_t> bytes = encode_gray16();
  const std::vector<MarkerSegment> segments = scan_markers(bytes);

  std::vector<std::string> names;
  for (const MarkerSegment& seg : segments) {
    names.push_back(markers::name(seg.marker_code));
  }
  const std::vector<std::string> expected = {"SOI", "APP0", "DQT", "DQT",
                                             "SOF0", "DHT", "DHT", "DHT",
                                             "DHT", "SOS", "EOI"};
  EXPECT_EQ(names, expected);
}

TEST(ScanMarkers, SoiAloneIsMalformed) {
  const std::vector<std::uint8_t> bytes = {0xFF, 0xD8};
  EXPECT_THROW(scan_markers(bytes), MalformedJpeg);
}

TEST(ScanMarkers, MissingSoiIsMalformed) {
  const std::vector<std::uint8_t> bytes = {0x00, 0x11, 0x22};
  EXPECT_THROW(scan_markers(bytes), MalformedJpeg);
}

TEST(ScanMarkers, StuffedFf00InScanDataIsNotAMarker) {
  // Hand-crafted stream: SOI, minimal DQT, SOF0, DHT, SOS, entropy bytes with
  // an embedded FF00, then EOI.
  std::vector<std::uint8_t> bytes = {0xFF, 0xD8};
  const auto push_segment = [&bytes](std::uint8_t code,
                                     const std::vector<std::uint8_t>& payload) {
    bytes.push_back(0xFF);
    bytes.push_back(code);
    const std::uint16_t length = static_cast<std::uint16_t>(payload.size() + 2);
    bytes.push_back(static_cast<std::uint8_t>(length >> 8));
    bytes.push_back(static_cast<std::uint8_t>(length & 0xFF));
    bytes.insert(bytes.end(), payload.begin(), payload.end());
  };
  std::vector<std::uint8_t> dqt_payload = {0x00};
  for (int i = 0; i < 64; ++i) dqt_payload.push_back(16);
  push_segment(0xDB, dqt_payload);
  push_segment(0xC0, {8, 0, 16, 0, 16, 1, 1, 0x11, 0});
  push_segment(0xC4, {0x00, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 5});
  push_segment(0xDA, {1, 1, 0x00, 0, 63, 0});
  bytes.insert(bytes.end(), {0x12, 0xFF, 0x00, 0x34, 0xFF, 0x00});
  bytes.insert(bytes.end(), {0xFF, 0xD9});

  const std::vector<MarkerSegment> segments = scan_markers(bytes);
  std::vector<std::uint8_t> codes;
  for (const MarkerSegment& seg : segments) codes.push_back(seg.marker_code);
  const std::vector<std::uint8_t> expected = {0xD8, 0xDB, 0xC0,
                                              0xC4, 0xDA, 0xD9};
  EXPECT_EQ(codes, expected);
}

TEST(ScanMarkers, RestartMarkersAreReportedButNotStructural) {
  const RgbImage image = noise_image(64, 64, 7);
  EncodeOptions plain;
  EncodeOptions with_restarts;
  with_restarts.restart_interval = 1;
  const auto plain_bytes = encode_jpeg(image, plain);
  const auto restart_bytes = encode_jpeg(image, with_restarts);

  const auto plain_segments = scan_markers(plain_bytes);
  const auto restart_segments = scan_markers(restart_bytes);

  bool found_rst = false;
  for (const MarkerSegment& seg : restart_segments) {
    if (markers::is_rst(seg.marker_code)) found_rst = true;
  }
  EXPECT_TRUE(found_rst);

  // DRI is structural, so encode the plain stream with DRI declared but
  // interval-free comparison: compare against the restart stream minus DRI.
  const int plain_count = count_structural_markers(plain_segments);
  const int restart_count = count_structural_markers(restart_segments);
  EXPECT_EQ(restart_count, plain_count + 1);  // + DRI segment only, no RSTs

  int rst_count = 0;
  for (const MarkerSegment& seg : restart_segments) {
    if (markers::is_rst(seg.marker_code)) ++rst_count;
  }
  EXPECT_GT(rst_count, 0);
}

TEST(ScanMarkers, TruncatedSegmentIsMalformed) {
  std::vector<std::uint8_t> bytes = {0xFF, 0xD8, 0xFF, 0xE0, 0xFF, 0xFF};
  EXPECT_THROW(scan_markers(bytes), MalformedJpeg);
}

TEST(ScanMarkers, DeclaredLengthBelowTwoIsMalformed) {
  std::vector<std::uint8_t> bytes = {0xFF, 0xD8, 0xFF, 0xE0, 0x00, 0x01,
                                     0xFF, 0xD9};
  EXPECT_THROW(scan_markers(bytes), MalformedJpeg);
}

TEST(ScanMarkers, OffsetsStrictlyIncreaseAndRescanIsDeterministic) {
  const std::vector<std::uint8_t> bytes =
      encode_jpeg(noise_image(40, 24, 3), {});
  const auto first = scan_markers(bytes);
  const auto second = scan_markers(bytes);
  ASSERT_EQ(first.size(), second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].offset, second[i].offset);
    EXPECT_EQ(first[i].marker_code, second[i].marker_code);
    if (i > 0) EXPECT_GT(first[i].offset, first[i - 1].offset);
  }
}

TEST(ScanMarkers, ProgressiveStreamWithMultipleScansParses) {
  EncodeOptions options;
  options.progressive = true;
  const auto bytes = encode_jpeg(noise_image(48, 48, 11), options);
  const auto segments = scan_markers(bytes);
  int sos_count = 0;
  for (const MarkerSegment& seg : segments) {
    if (seg.marker_code == markers::kSos) ++sos_count;
  }
  EXPECT_GT(sos_count, 1);
  EXPECT_EQ(segments.back().marker_code, markers::kEoi);
}

TEST(ExtractDimensions, MatchesEncodedSize) {
  const auto bytes = encode_jpeg(solid_image(640, 480, 10, 20, 30), {});
  const auto [width, height] = extract_dimensions(scan_markers(bytes));
  EXPECT_EQ(width, 640u);
  EXPECT_EQ(height, 480u);
}

TEST(ExtractDimensions, SmallestLegalFrame) {
  const auto bytes = encode_jpeg(solid_image(1, 1, 0, 0, 0), {});
  const auto [width, height] = extract_dimensions(scan_markers(bytes));
  EXPECT_EQ(width, 1u);
  EXPECT_EQ(height, 1u);
}

TEST(ExtractDimensions, NoSofThrowsNoFrameHeader) {
  std::vector<MarkerSegment> segments = {{markers::kSoi, 0, 0, {}},
                                         {markers::kEoi, 2, 0, {}}};
  EXPECT_THROW(extract_dimensions(segments), NoFrameHeader);
}

TEST(ExtractDimensions, AgreesWithReferenceDecoderOnFixtures) {
  for (std::uint32_t w : {17u, 64u, 321u}) {
    for (std::uint32_t h : {9u, 50u, 200u}) {
      const auto bytes = encode_jpeg(noise_image(w, h, w * 1000 + h), {});
      const auto [pw, ph] = extract_dimensions(scan_markers(bytes));
      const auto [dw, dh] = decode_dimensions(bytes);
      EXPECT_EQ(pw, dw);
      EXPECT_EQ(ph, dh);
      EXPECT_EQ(pw, w);
      EXPECT_EQ(ph, h);
    }
  }
}

TEST(ExtractQuantTables, Quality50EmitsAnnexKLuminance) {
  EncodeOptions options;
  options.quality = 50;
  const auto bytes = encode_jpeg(solid_image(32, 32, 90, 90, 90), options);
  const auto [lum, chroma] = extract_quant_tables(scan_markers(bytes));
  EXPECT_EQ(lum.table_id, 0);
  EXPECT_EQ(lum.coefficients[0], 16);  // Annex K luminance DC quantizer
  ASSERT_TRUE(chroma.has_value());
  EXPECT_EQ(chroma->table_id, 1);
  EXPECT_EQ(chroma->coefficients[0], 17);
}

TEST(ExtractQuantTables, GrayscaleHasNoChromaTable) {
  EncodeOptions options;
  options.grayscale = true;
  const auto bytes = encode_jpeg(solid_image(20, 20, 77, 77, 77), options);
  const auto [lum, chroma] = extract_quant_tables(scan_markers(bytes));
  EXPECT_EQ(lum.table_id, 0);
  EXPECT_FALSE(chroma.has_value());
}

TEST(ExtractQuantTables, FirstDefinitionWinsForDuplicateIds) {
  // Craft a stream with table 0 defined twice with different values.
  std::vector<std::uint8_t> bytes = {0xFF, 0xD8};
  const auto push_dqt = [&bytes](std::uint8_t fill) {
    bytes.push_back(0xFF);
    bytes.push_back(0xDB);
    bytes.push_back(0x00);
    bytes.push_back(67);
    bytes.push_back(0x00);  // 8-bit precision, id 0
    for (int i = 0; i < 64; ++i) bytes.push_back(fill);
  };
  push_dqt(7);
  push_dqt(9);
  bytes.insert(bytes.end(), {0xFF, 0xD9});

  const auto [lum, chroma] = extract_quant_tables(scan_markers(bytes));
  EXPECT_EQ(lum.coefficients[0], 7);
  EXPECT_EQ(lum.coefficients[63], 7);
  EXPECT_FALSE(chroma.has_value());
}

TEST(ExtractQuantTables, MissingTableZeroThrows) {
  std::vector<MarkerSegment> segments = {{markers::kSoi, 0, 0, {}}};
  EXPECT_THROW(extract_quant_tables(segments), NoQuantTable);
}

TEST(ExtractQuantTables, ZeroCoefficientIsMalformed) {
  std::vector<std::uint8_t> bytes = {0xFF, 0xD8, 0xFF, 0xDB, 0x00, 67, 0x00};
  for (int i = 0; i < 64; ++i) bytes.push_back(0);
  bytes.insert(bytes.end(), {0xFF, 0xD9});
  EXPECT_THROW(extract_quant_tables(scan_markers(bytes)), MalformedJpeg);
}

TEST(CountStructuralMarkers, MinimalFixtureCountsEleven) {
  const auto segments = scan_markers(encode_gray16());
  EXPECT_EQ(count_structural_markers(segments), 11);
}

TEST(CountStructuralMarkers, EmptyListCountsZero) {
  EXPECT_EQ(count_structural_markers({}), 0);
}

TEST(CountStructuralMarkers, AgreesWithIndependentDumpOnFixtures) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    EncodeOptions options;
    options.quality = 55 + static_cast<int>(seed) * 7;
    options.restart_interval = seed % 2 == 0 ? 0 : 2;
    const auto bytes =
        encode_jpeg(noise_image(30 + 8 * static_cast<std::uint32_t>(seed),
                                24 + 4 * static_cast<std::uint32_t>(seed), seed),
                    options);
    const auto segments = scan_markers(bytes);
    const auto dump = testing::dump_segments(bytes);
    EXPECT_EQ(count_structural_markers(segments),
              dump_structural_count(dump));
    ASSERT_EQ(segments.size(), dump.segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
      EXPECT_EQ(segments[i].marker_code, dump.segments[i].code);
      EXPECT_EQ(segments[i].offset, dump.segments[i].offset);
    }
  }
}

TEST(ParseJpeg, ExtractsExifPayloadWhenPresent) {
  EncodeOptions options;
  options.app1_payload = std::vector<std::uint8_t>{'E', 'x', 'i', 'f', 0, 0,
                                                   'I', 'I', 42, 0, 8, 0, 0, 0,
                                                   0, 0};
  const auto bytes = encode_jpeg(solid_image(8, 8, 1, 2, 3), options);
  const JpegStructure structure = parse_jpeg(bytes);
  ASSERT_TRUE(structure.exif_payload.has_value());
  EXPECT_EQ((*structure.exif_payload)[0], 'E');
  EXPECT_EQ(structure.width, 8u);
  EXPECT_EQ(structure.luminance_table.table_id, 0);
}

TEST(ParseJpeg, NoExifPayloadWhenAbsent) {
  const auto bytes = encode_jpeg(solid_image(8, 8, 1, 2, 3), {});
  EXPECT_FALSE(parse_jpeg(bytes).exif_payload.has_value());
}

}  // namespace
}  // namespace ballistics
