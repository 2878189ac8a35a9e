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

#include "ballistics/reference_store.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"

#include "ballistics/jpeg_codec.hpp"
#include "ballistics/random.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace ballistics {
namespace {

namespace fs = std::filesystem;
using testing::precise_cosine;
using testing::solid_image;
using testing::unique_temp_dir;

FeatureVector sample_vector(SeededRng& rng) {
  FeatureVector v;
  v.width = static_cast<std::uint32_t>(1 + rng.below(4000));
  v.height = static_cast<std::uint32_t>(1 + rng.below(4000));
  v.exif_count = static_cast<std::uint32_t>(rng.below(40));
  v.marker_count = static_cast<std::uint32_t>(rng.below(30));
  for (auto& c : v.luminance) c = static_cast<std::uint16_t>(1 + rng.below(200));
  for (auto& c : v.chrominance) c = static_cast<std::uint16_t>(rng.below(200));
  return v;
}

std::vector<LabeledSample> random_samples(int n, std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<LabeledSample> samples;
  for (int i = 0; i < n; ++i) {
    LabeledSample s;
    s.id = i;
    s.filename = "sample_" + std::to_string(i) + ".jpg";
    s.vector = sample_vector(rng);
    s.sns = kAllSns[rng.below(kAllSns.size())];
    const UploadScenario scenario = kAllScenarios[rng.below(kScenarioCount)];
    s.upload_client = scenario.client;
    s.selection_method = scenario.selection;
    samples.push_back(std::move(s));
  }
  return samples;
}

TEST(CosineSimilarity, IdenticalVectorsGiveOne) {
  const std::vector<double> v = {3, 1, 4, 1, 5};
  EXPECT_NEAR(cosine_similarity(v, v), 1.0, 1e-12);
}

TEST(CosineSimilarity, OrthogonalAnalogGivesZero) {
  const std::vector<double> a = {1, 0, 0};
  const std::vector<double> b = {0, 1, 0};
  EXPECT_DOUBLE_EQ(cosine_similarity(a, b), 0.0);
}

TEST(CosineSimilarity, FortyFiveDegreeAnalog) {
  const std::vector<double> a = {1, 0};
  const std::vector<double> b = {1, 1};
  EXPECT_NEAR(cosine_similarity(a, b), 0.7071, 1e-4);
}

TEST(CosineSimilarity, ZeroVectorThrows) {
  const std::vector<double> zero = {0, 0, 0};
  const std::vector<double> v = {1, 2, 3};
  EXPECT_THROW(cosine_similarity(zero, v), ZeroVector);
  EXPECT_THROW(cosine_similarity(v, zero), ZeroVector);
}

TEST(BuildSimilarityMatrix, SymmetricUnitDiagonalInRange) {
  const std::vector<LabeledSample> samples = random_samples(40, 17);
  const SimilarityMatrix matrix = build_similarity_matrix(samples);
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    EXPECT_NEAR(matrix.at(i, i), 1.0, 1e-9);
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      EXPECT_EQ(matrix.at(i, j), matrix.at(j, i));
      EXPECT_GE(matrix.at(i, j), 0.0);
      EXPECT_LE(matrix.at(i, j), 1.0 + 1e-12);
    }
  }
}

TEST(BuildSimilarityMatrix, ScaleInvariance) {
  std::vector<LabeledSample> samples = random_samples(10, 23);
  const SimilarityMatrix before = build_similarity_matrix(samples);
  // Doubling one vector leaves its row and column unchanged.
  FeatureVector& v = samples[4].vector;
  v.width *= 2;
  v.height *= 2;
  v.exif_count *= 2;
  v.marker_count *= 2;
  for (auto& c : v.luminance) c = static_cast<std::uint16_t>(c * 2);
  for (auto& c : v.chrominance) c = static_cast<std::uint16_t>(c * 2);
  const SimilarityMatrix after = build_similarity_matrix(samples);
  for (std::size_t j = 0; j < before.size(); ++j) {
    EXPECT_NEAR(before.at(4, j), after.at(4, j), 1e-12);
    EXPECT_NEAR(before.at(j, 4), after.at(j, 4), 1e-12);
  }
}

TEST(BuildSimilarityMatrix, MatchesExtendedPrecisionOracle) {
  const std::vector<LabeledSample> samples = random_samples(30, 29);
  const SimilarityMatrix matrix = build_similarity_matrix(samples);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = 0; j < samples.size(); ++j) {
      const long double expected =
          precise_cosine(vector_flatten(samples[i].vector),
                         vector_flatten(samples[j].vector));
      EXPECT_NEAR(matrix.at(i, j), static_cast<double>(expected), 1e-9);
    }
  }
}

class IngestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = unique_temp_dir("ingest");
    // Four distinct, valid reference files.
    int quality = 50;
    for (const char* name : {"a.jpg", "b.jpg", "c.jpg", "d.jpg"}) {
      EncodeOptions options;
      options.quality = quality;
      quality += 10;
      write_file_bytes(dir_ / name,
                       encode_jpeg(solid_image(64, 48, 120, 130, 140), options));
    }
    std::ofstream manifest(dir_ / "manifest.tsv");
    manifest << "# test manifest\n";
    manifest << "a.jpg\tfacebook\tbrowser\tnot_applicable\n";
    manifest << "b.jpg\ttwitter\tandroid_app\tlocal_gallery\n";
    manifest << "c.jpg\ttelegram\tios_app\tembedded_camera\n";
    manifest << "d.jpg\twhatsapp\tbrowser\tnot_applicable\n";
  }

  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

TEST_F(IngestTest, FourFilesGiveFourByFourMatrix) {
  const IngestResult result = ingest(dir_ / "manifest.tsv", dir_);
  EXPECT_TRUE(result.failures.empty());
  EXPECT_EQ(result.dataset.samples.size(), 4u);
  EXPECT_EQ(result.dataset.similarity.size(), 4u);
  EXPECT_EQ(result.dataset.samples[1].sns, Sns::kTwitter);
  EXPECT_EQ(result.dataset.samples[2].upload_client, UploadClient::kIosApp);
}

TEST_F(IngestTest, UnreadableFileIsReportedAndExcluded) {
  fs::remove(dir_ / "c.jpg");
  const IngestResult result = ingest(dir_ / "manifest.tsv", dir_);
  EXPECT_EQ(result.dataset.samples.size(), 3u);
  ASSERT_EQ(result.failures.size(), 1u);
  EXPECT_EQ(result.failures[0].filename, "c.jpg");
}

TEST_F(IngestTest, CorruptFileIsReportedAndExcluded) {
  std::ofstream bad(dir_ / "b.jpg", std::ios::binary | std::ios::trunc);
  bad << "not a jpeg";
  bad.close();
  const IngestResult result = ingest(dir_ / "manifest.tsv", dir_);
  EXPECT_EQ(result.dataset.samples.size(), 3u);
  ASSERT_EQ(result.failures.size(), 1u);
  EXPECT_EQ(result.failures[0].filename, "b.jpg");
}

TEST_F(IngestTest, EmptyManifestIsEmptyDataset) {
  std::ofstream manifest(dir_ / "empty.tsv", std::ios::trunc);
  manifest << "# nothing\n";
  manifest.close();
  EXPECT_THROW(ingest(dir_ / "empty.tsv", dir_), EmptyDataset);
}

TEST_F(IngestTest, MalformedManifestRowIsManifestError) {
  std::ofstream manifest(dir_ / "bad.tsv", std::ios::trunc);
  manifest << "a.jpg\tfacebook\tbrowser\n";  // missing column
  manifest.close();
  EXPECT_THROW(ingest(dir_ / "bad.tsv", dir_), ManifestError);

  std::ofstream manifest2(dir_ / "bad2.tsv", std::ios::trunc);
  manifest2 << "a.jpg\tmyspace\tbrowser\tnot_applicable\n";
  manifest2.close();
  EXPECT_THROW(ingest(dir_ / "bad2.tsv", dir_), ManifestError);

  std::ofstream manifest3(dir_ / "bad3.tsv", std::ios::trunc);
  manifest3 << "a.jpg\tfacebook\tbrowser\tlocal_gallery\n";  // invalid pair
  manifest3.close();
  EXPECT_THROW(ingest(dir_ / "bad3.tsv", dir_), ManifestError);
}

TEST(IndexIo, SaveLoadRoundTripsSamples) {
  const fs::path dir = unique_temp_dir("index");
  const std::vector<LabeledSample> samples = random_samples(12, 31);
  const ReferenceDataset ds = make_dataset(samples);
  save_index(ds, dir / "ref.tsv");
  const ReferenceDataset loaded = load_index(dir / "ref.tsv");

  ASSERT_EQ(loaded.samples.size(), ds.samples.size());
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    EXPECT_EQ(loaded.samples[i].id, ds.samples[i].id);
    EXPECT_EQ(loaded.samples[i].filename, ds.samples[i].filename);
    EXPECT_EQ(loaded.samples[i].vector, ds.samples[i].vector);
    EXPECT_EQ(loaded.samples[i].sns, ds.samples[i].sns);
    EXPECT_EQ(loaded.samples[i].upload_client, ds.samples[i].upload_client);
    EXPECT_EQ(loaded.samples[i].selection_method,
              ds.samples[i].selection_method);
  }
  // Matrix recomputed on load matches the original.
  for (std::size_t i = 0; i < ds.similarity.size(); ++i) {
    for (std::size_t j = 0; j < ds.similarity.size(); ++j) {
      EXPECT_NEAR(loaded.similarity.at(i, j), ds.similarity.at(i, j), 1e-12);
    }
  }
  fs::remove_all(dir);
}

TEST(IndexIo, WrongFeatureColumnCountIsFormatError) {
  const fs::path dir = unique_temp_dir("badindex");
  const ReferenceDataset ds = make_dataset(random_samples(2, 33));
  save_index(ds, dir / "ref.tsv");

  // Rewrite with the last feature column merged away from every row, leaving
  // 43 feature columns.
  std::ifstream in(dir / "ref.tsv");
  std::string header, line;
  std::getline(in, header);
  std::ofstream out(dir / "truncated.tsv", std::ios::trunc);
  out << header << "\n";
  while (std::getline(in, line)) {
    // remove the 10th column (a feature) entirely
    std::size_t pos = 0;
    for (int tab = 0; tab < 10; ++tab) pos = line.find('\t', pos) + 1;
    const std::size_t next = line.find('\t', pos);
    line.erase(pos, next - pos + 1);
    out << line << "\n";
  }
  in.close();
  out.close();

  EXPECT_THROW(load_index(dir / "truncated.tsv"), FormatError);
  fs::remove_all(dir);
}

TEST(IndexIo, MissingFileIsIoError) {
  EXPECT_THROW(load_index("/nonexistent/path/ref.tsv"), IoError);
}

TEST(IndexIo, EmptyIndexIsEmptyDataset) {
  const fs::path dir = unique_temp_dir("emptyindex");
  std::ofstream out(dir / "ref.tsv");
  out << kIndexHeader << "\n";
  out.close();
  EXPECT_THROW(load_index(dir / "ref.tsv"), EmptyDataset);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace ballistics
