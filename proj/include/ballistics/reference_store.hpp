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

#ifndef BALLISTICS_REFERENCE_STORE_HPP_
#define BALLISTICS_REFERENCE_STORE_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ballistics/bytes_io.hpp"
#include "ballistics/errors.hpp"
#include "ballistics/exif_reader.hpp"
#include "ballistics/features.hpp"
#include "ballistics/jpeg_structure.hpp"
#include "ballistics/labels.hpp"

namespace ballistics {

// One labeled reference image: its feature vector plus ground truth.
struct LabeledSample {
  int id = 0;
  std::string filename;
  FeatureVector vector;
  Sns sns = Sns::kFacebook;
  UploadClient upload_client = UploadClient::kBrowser;
  SelectionMethod selection_method = SelectionMethod::kNotApplicable;
};

// Cosine similarity of two nonzero nonnegative vectors; lands in [0, 1].
inline double cosine_similarity(std::span<const double> a,
                                std::span<const double> b) {
  double dot = 0, norm_a = 0, norm_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    norm_a += a[i] * a[i];
    norm_b += b[i] * b[i];
  }
  if (norm_a == 0 || norm_b == 0) {
    throw ZeroVector("cosine similarity of a zero vector is undefined");
  }
  return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

// Dense symmetric N x N similarity matrix.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(std::size_t n) : n_(n), cells_(n * n, 0.0) {}

  std::size_t size() const { return n_; }

  double at(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }

  void set(std::size_t i, std::size_t j, double value) {
    cells_[i * n_ + j] = value;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> cells_;
};

inline SimilarityMatrix build_similarity_matrix(
    const std::vector<LabeledSample>& samples) {
  std::vector<FlatFeatures> flat;
  flat.reserve(samples.size());
  for (const LabeledSample& s : samples) flat.push_back(vector_flatten(s.vector));

  SimilarityMatrix matrix(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i; j < samples.size(); ++j) {
      const double d = cosine_similarity(flat[i], flat[j]);
      matrix.set(i, j, d);
      matrix.set(j, i, d);
    }
  }
  return matrix;
}

struct ReferenceDataset {
  std::vector<LabeledSample> samples;
  SimilarityMatrix similarity;
};

inline ReferenceDataset make_dataset(std::vector<LabeledSample> samples) {
  ReferenceDataset ds;
  ds.similarity = build_similarity_matrix(samples);
  ds.samples = std::move(samples);
  return ds;
}

struct ManifestRow {
  std::string filename;
  Sns sns = Sns::kFacebook;
  UploadClient upload_client = UploadClient::kBrowser;
  SelectionMethod selection_method = SelectionMethod::kNotApplicable;
};

inline constexpr char kColumnDelimiter = '\t';

namespace store_detail {

inline std::vector<std::string> split_columns(const std::string& line) {
  std::vector<std::string> columns;
  std::string::size_type start = 0;
  while (true) {
    const std::string::size_type tab = line.find(kColumnDelimiter, start);
    if (tab == std::string::npos) {
      columns.push_back(line.substr(start));
      break;
    }
    columns.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return columns;
}

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace store_detail

// Manifest format: one row per image, tab-separated:
//   filename  sns  upload_client  selection_method
// '#' lines and blank lines are skipped.
inline std::vector<ManifestRow> load_manifest(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<ManifestRow> rows;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    line = store_detail::strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> cols = store_detail::split_columns(line);
    const auto fail = [&](const std::string& what) -> ManifestError {
      return ManifestError(path.filename().string() + ":" +
                           std::to_string(line_number) + ": " + what);
    };
    if (cols.size() != 4) throw fail("expected 4 columns");
    ManifestRow row;
    row.filename = cols[0];
    if (row.filename.empty()) throw fail("empty filename");
    const auto sns = parse_sns(cols[1]);
    if (!sns) throw fail("unknown sns '" + cols[1] + "'");
    const auto client = parse_upload_client(cols[2]);
    if (!client) throw fail("unknown upload client '" + cols[2] + "'");
    const auto method = parse_selection_method(cols[3]);
    if (!method) throw fail("unknown selection method '" + cols[3] + "'");
    if (!is_valid_scenario(*client, *method)) {
      throw fail("selection method must be not_applicable exactly for browser");
    }
    row.sns = *sns;
    row.upload_client = *client;
    row.selection_method = *method;
    rows.push_back(std::move(row));
  }
  return rows;
}

struct FileIssue {
  std::string filename;
  std::string message;
};

struct IngestResult {
  ReferenceDataset dataset;
  std::vector<FileIssue> failures;
};

// Parses, featurizes and labels every manifest row. Files that fail to parse
// are reported and excluded rather than aborting the build.
inline IngestResult ingest(const std::vector<ManifestRow>& rows,
                           const std::filesystem::path& image_root) {
  IngestResult result;
  std::vector<LabeledSample> samples;
  for (const ManifestRow& row : rows) {
    try {
      const std::vector<std::uint8_t> bytes =
          read_file_bytes(image_root / row.filename);
      const JpegStructure structure = parse_jpeg(bytes);
      const ExifMap exif = structure.exif_payload
                               ? parse_exif(*structure.exif_payload)
                               : ExifMap{};
      LabeledSample sample;
      sample.id = static_cast<int>(samples.size());
      sample.filename = row.filename;
      sample.vector = build_feature_vector(structure, exif);
      sample.sns = row.sns;
      sample.upload_client = row.upload_client;
      sample.selection_method = row.selection_method;
      samples.push_back(std::move(sample));
    } catch (const Error& e) {
      result.failures.push_back({row.filename, e.what()});
    }
  }
  if (samples.empty()) {
    throw EmptyDataset("no manifest row produced a usable sample");
  }
  result.dataset = make_dataset(std::move(samples));
  return result;
}

inline IngestResult ingest(const std::filesystem::path& manifest_path,
                           const std::filesystem::path& image_root) {
  return ingest(load_manifest(manifest_path), image_root);
}

inline constexpr std::string_view kIndexHeader =
    "id\tfilename\tfeatures[44]\tsns\tupload_client\tselection_method";

// Index format: the header line above, then one tab-separated row per sample:
// id, filename, the 44 feature values in flatten order, then the three labels.
// The similarity matrix is recomputed on load.
inline void save_index(const ReferenceDataset& ds,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out << kIndexHeader << "\n";
  for (const LabeledSample& s : ds.samples) {
    out << s.id << kColumnDelimiter << s.filename;
    const FlatFeatures flat = vector_flatten(s.vector);
    for (double value : flat) {
      out << kColumnDelimiter << static_cast<std::uint64_t>(value);
    }
    out << kColumnDelimiter << to_string(s.sns) << kColumnDelimiter
        << to_string(s.upload_client) << kColumnDelimiter
        << to_string(s.selection_method) << "\n";
  }
  if (!out) throw IoError("write failed for " + path.string());
}

inline ReferenceDataset load_index(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty index file");
  std::vector<LabeledSample> samples;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    line = store_detail::strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> cols = store_detail::split_columns(line);
    const auto fail = [&](const std::string& what) -> FormatError {
      return FormatError(path.filename().string() + ":" +
                         std::to_string(line_number) + ": " + what);
    };
    if (cols.size() != 2 + kFeatureDims + 3) {
      throw fail("expected " + std::to_string(2 + kFeatureDims + 3) +
                 " columns, got " + std::to_string(cols.size()));
    }
    LabeledSample sample;
    try {
      sample.id = std::stoi(cols[0]);
    } catch (const std::exception&) {
      throw fail("bad id '" + cols[0] + "'");
    }
    sample.filename = cols[1];
    FlatFeatures flat{};
    for (std::size_t i = 0; i < kFeatureDims; ++i) {
      try {
        flat[i] = std::stod(cols[2 + i]);
      } catch (const std::exception&) {
        throw fail("bad feature value '" + cols[2 + i] + "'");
      }
    }
    try {
      sample.vector = vector_unflatten(flat);
    } catch (const FormatError& e) {
      throw fail(e.what());
    }
    const auto sns = parse_sns(cols[2 + kFeatureDims]);
    const auto client = parse_upload_client(cols[3 + kFeatureDims]);
    const auto method = parse_selection_method(cols[4 + kFeatureDims]);
    if (!sns || !client || !method) throw fail("bad label column");
    if (!is_valid_scenario(*client, *method)) {
      throw fail("invalid upload scenario");
    }
    sample.sns = *sns;
    sample.upload_client = *client;
    sample.selection_method = *method;
    samples.push_back(std::move(sample));
  }
  if (samples.empty()) throw EmptyDataset("index file has no samples");
  return make_dataset(std::move(samples));
}

}  // namespace ballistics

#endif  // BALLISTICS_REFERENCE_STORE_HPP_
