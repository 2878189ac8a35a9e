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

#ifndef BALLISTICS_SNS_SIMULATOR_HPP_
#define BALLISTICS_SNS_SIMULATOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ballistics/bytes_io.hpp"
#include "ballistics/errors.hpp"
#include "ballistics/jpeg_codec.hpp"
#include "ballistics/jpeg_structure.hpp"
#include "ballistics/labels.hpp"
#include "ballistics/platform_profile.hpp"
#include "ballistics/random.hpp"
#include "ballistics/reference_store.hpp"

namespace ballistics {

struct SimulationJob {
  std::filesystem::path source;
  PlatformProfile profile;
  UploadClient upload_client = UploadClient::kBrowser;
  SelectionMethod selection_method = SelectionMethod::kNotApplicable;
  std::uint64_t seed = 0;
};

struct SimulatedUpload {
  std::vector<std::uint8_t> bytes;
  std::string filename;
  Sns sns = Sns::kFacebook;
  UploadClient upload_client = UploadClient::kBrowser;
  SelectionMethod selection_method = SelectionMethod::kNotApplicable;
};

namespace simulator_detail {

inline std::string digits(SeededRng& rng, std::size_t count) {
  std::string out;
  out.push_back(rng.pick("123456789"));
  while (out.size() < count) out.push_back(rng.pick("0123456789"));
  return out;
}

inline std::string token(SeededRng& rng, std::string_view alphabet,
                         std::size_t count) {
  std::string out;
  while (out.size() < count) out.push_back(rng.pick(alphabet));
  return out;
}

// Synthetic filename following the platform's observed renaming scheme.
// Platforms without a rename rule (Google+) keep the original name.
inline std::string renamed(Sns sns, const std::string& original,
                           const PlatformProfile& profile, SeededRng& rng) {
  static constexpr std::string_view kLowerHex = "0123456789abcdef";
  static constexpr std::string_view kAlnum =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
  static constexpr std::string_view kLowerAlnum =
      "abcdefghijklmnopqrstuvwxyz0123456789";
  static constexpr std::string_view kWebSafe =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

  switch (sns) {
    case Sns::kFacebook:
      return digits(rng, 8) + "_" + digits(rng, 15) + "_" + digits(rng, 19) +
             "_n.jpg";
    case Sns::kGooglePlus:
      return original;
    case Sns::kFlickr: {
      // hex id with at least one letter so the token reads as hex, not decimal
      std::string id = token(rng, kLowerHex, 5);
      id.push_back(rng.pick("abcdef"));
      id += token(rng, kLowerHex, 4);
      return digits(rng, 11) + "_" + id + "_h.jpg";
    }
    case Sns::kTumblr: {
      const std::uint32_t resolution = profile.resize_threshold.value_or(1280);
      return "tumblr_" + token(rng, kAlnum, 19) + "_" +
             std::to_string(resolution) + ".jpg";
    }
    case Sns::kImgur: {
      std::string id = token(rng, kAlnum, 3);
      id.push_back(rng.pick("0123456789"));
      id += token(rng, kAlnum, 3);
      return id + ".jpg";
    }
    case Sns::kTwitter: {
      std::string id = token(rng, kWebSafe, 7);
      id.push_back(rng.pick("ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_"));
      id += token(rng, kWebSafe, 7);
      return id + ".jpg";
    }
    case Sns::kWhatsApp: {
      const int month = static_cast<int>(rng.below(12)) + 1;
      const int day = static_cast<int>(rng.below(28)) + 1;
      const int sequence = static_cast<int>(rng.below(10000));
      char name[64];
      std::snprintf(name, sizeof name, "IMG-2016%02d%02d-WA%04d.jpg", month,
                    day, sequence);
      return name;
    }
    case Sns::kTinypic: {
      std::string id = token(rng, kLowerAlnum, 3);
      id.push_back(rng.pick("0123456789"));
      id += token(rng, kLowerAlnum, 3);
      return id + ".jpg";
    }
    case Sns::kInstagram:
      return digits(rng, 7) + "_" + digits(rng, 15) + "_" + digits(rng, 9) +
             "_n.jpg";
    case Sns::kTelegram:
      return digits(rng, 9) + "_" + digits(rng, 19) + ".jpg";
  }
  return original;
}

// Original bytes with the Exif APP1 segment ranges spliced out.
inline std::vector<std::uint8_t> strip_exif_segments(
    const std::vector<std::uint8_t>& bytes,
    const std::vector<MarkerSegment>& segments) {
  std::vector<std::pair<std::size_t, std::size_t>> cuts;
  for (const MarkerSegment& seg : segments) {
    if (seg.marker_code != markers::kApp1) continue;
    if (seg.payload.size() < kExifPreamble.size()) continue;
    if (!std::equal(kExifPreamble.begin(), kExifPreamble.end(),
                    seg.payload.begin())) {
      continue;
    }
    cuts.emplace_back(seg.offset, seg.offset + 2 + seg.length);
  }
  if (cuts.empty()) return bytes;
  std::vector<std::uint8_t> out;
  out.reserve(bytes.size());
  std::size_t pos = 0;
  for (const auto& [from, to] : cuts) {
    out.insert(out.end(), bytes.begin() + static_cast<std::ptrdiff_t>(pos),
               bytes.begin() + static_cast<std::ptrdiff_t>(from));
    pos = to;
  }
  out.insert(out.end(), bytes.begin() + static_cast<std::ptrdiff_t>(pos),
             bytes.end());
  return out;
}

}  // namespace simulator_detail

// Emulates one platform upload: conditional resize to the platform's longest
// side, conditional recompression with the scenario's fixture DQT pair, the
// EXIF retention policy and the renaming scheme. Passthrough outputs keep the
// source bytes (minus stripped EXIF) bit-exact.
inline SimulatedUpload simulate_upload(const SimulationJob& job) {
  if (!is_valid_scenario(job.upload_client, job.selection_method)) {
    throw BadParams("selection method must be not_applicable exactly for "
                    "browser uploads");
  }
  job.profile.validate();

  std::vector<std::uint8_t> source_bytes;
  JpegStructure structure;
  try {
    source_bytes = read_file_bytes(job.source);
    structure = parse_jpeg(source_bytes);
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw DecodeError(job.source.string() + ": " + e.what());
  }

  const PlatformProfile& profile = job.profile;
  const std::uint32_t longest = std::max(structure.width, structure.height);

  const bool resize = profile.resize_threshold.has_value() &&
                      longest > *profile.resize_threshold;
  bool recompress = false;
  switch (profile.recompression) {
    case Recompression::kAlways:
      recompress = true;
      break;
    case Recompression::kConditionalOnM:
      recompress = longest > *profile.resize_threshold;
      break;
    case Recompression::kConditionalOnByteSize:
      recompress = source_bytes.size() > *profile.byte_size_threshold;
      break;
    case Recompression::kUserOption:
      // Simulated with default options, which re-encode.
      recompress = true;
      break;
  }

  SimulatedUpload result;
  result.sns = profile.sns;
  result.upload_client = job.upload_client;
  result.selection_method = job.selection_method;

  if (recompress) {
    RgbImage image;
    try {
      image = decode_jpeg(source_bytes);
    } catch (const DecodeError& e) {
      throw DecodeError(job.source.string() + ": " + e.what());
    }
    if (resize) {
      const std::uint32_t target = *profile.resize_threshold;
      std::uint32_t new_width, new_height;
      if (image.width >= image.height) {
        new_width = target;
        new_height = std::max<std::uint32_t>(
            1, static_cast<std::uint32_t>(std::lround(
                   static_cast<double>(image.height) * target / image.width)));
      } else {
        new_height = target;
        new_width = std::max<std::uint32_t>(
            1, static_cast<std::uint32_t>(std::lround(
                   static_cast<double>(image.width) * target / image.height)));
      }
      image = resize_bilinear(image, new_width, new_height);
    }
    const std::size_t scenario =
        scenario_index(job.upload_client, job.selection_method);
    EncodeOptions options;
    options.luminance_dqt = profile.scenario_dqts[scenario].luminance;
    options.chrominance_dqt = profile.scenario_dqts[scenario].chrominance;
    // EXIF policy: deleting both categories strips APP1 entirely; any
    // maintain policy carries the source payload through unchanged (selective
    // key editing is out of scope).
    if (!profile.strips_all_exif() && structure.exif_payload) {
      options.app1_payload = structure.exif_payload;
    }
    result.bytes = encode_jpeg(image, options);
  } else {
    result.bytes = profile.strips_all_exif()
                       ? simulator_detail::strip_exif_segments(
                             source_bytes, structure.segments)
                       : source_bytes;
  }

  SeededRng rng(job.seed);
  result.filename = simulator_detail::renamed(
      profile.sns, job.source.filename().string(), profile, rng);
  return result;
}

struct CorpusResult {
  std::filesystem::path manifest_path;
  int file_count = 0;
};

// Cross product of sources x platforms x applicable upload scenarios, written
// to out_dir with a reference-store manifest. Deterministic under a fixed
// seed: same seed, same bytes, same manifest.
inline CorpusResult generate_corpus(
    const std::vector<std::filesystem::path>& sources,
    const ProfileSet& profiles, const std::vector<UploadClient>& clients,
    std::uint64_t seed, const std::filesystem::path& out_dir) {
  if (sources.empty()) throw BadParams("generate_corpus needs >= 1 source");
  if (clients.empty()) throw BadParams("generate_corpus needs >= 1 client");
  std::filesystem::create_directories(out_dir);

  std::vector<ManifestRow> rows;
  std::set<std::string> used_names;
  std::uint64_t job_counter = 0;
  int files_written = 0;

  for (const std::filesystem::path& source : sources) {
    for (const PlatformProfile& profile : profiles.all()) {
      for (UploadClient client : clients) {
        std::vector<SelectionMethod> selections;
        if (client == UploadClient::kBrowser) {
          selections = {SelectionMethod::kNotApplicable};
        } else if (profile.native_app) {
          selections = {SelectionMethod::kLocalGallery,
                        SelectionMethod::kEmbeddedCamera};
        } else {
          continue;  // platform has no native app
        }
        for (SelectionMethod selection : selections) {
          SimulationJob job;
          job.source = source;
          job.profile = profile;
          job.upload_client = client;
          job.selection_method = selection;
          job.seed = mix_seed(seed, job_counter++);
          SimulatedUpload upload = simulate_upload(job);

          // Regenerate colliding names deterministically.
          std::uint64_t salt = 0;
          while (!used_names.insert(upload.filename).second) {
            ++salt;
            if (upload.sns == Sns::kGooglePlus) {
              const std::filesystem::path name(upload.filename);
              upload.filename = name.stem().string() + "_" +
                                std::to_string(salt) +
                                name.extension().string();
            } else {
              SeededRng rerng(mix_seed(job.seed, salt));
              upload.filename = simulator_detail::renamed(
                  upload.sns, job.source.filename().string(), profile, rerng);
            }
          }

          write_file_bytes(out_dir / upload.filename, upload.bytes);
          ++files_written;
          rows.push_back({upload.filename, upload.sns, upload.upload_client,
                          upload.selection_method});
        }
      }
    }
  }

  const std::filesystem::path manifest_path = out_dir / "manifest.tsv";
  std::ofstream manifest(manifest_path, std::ios::trunc);
  if (!manifest) throw IoError("cannot create " + manifest_path.string());
  manifest << "# filename\tsns\tupload_client\tselection_method\n";
  for (const ManifestRow& row : rows) {
    manifest << row.filename << kColumnDelimiter << to_string(row.sns)
             << kColumnDelimiter << to_string(row.upload_client)
             << kColumnDelimiter << to_string(row.selection_method) << "\n";
  }
  if (!manifest) throw IoError("write failed for " + manifest_path.string());
  return {manifest_path, files_written};
}

}  // namespace ballistics

#endif  // BALLISTICS_SNS_SIMULATOR_HPP_
