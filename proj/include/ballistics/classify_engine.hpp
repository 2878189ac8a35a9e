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

#ifndef BALLISTICS_CLASSIFY_ENGINE_HPP_
#define BALLISTICS_CLASSIFY_ENGINE_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ballistics/decision_tree.hpp"
#include "ballistics/errors.hpp"
#include "ballistics/exif_reader.hpp"
#include "ballistics/features.hpp"
#include "ballistics/filename_heuristics.hpp"
#include "ballistics/labels.hpp"
#include "ballistics/platform_profile.hpp"
#include "ballistics/random.hpp"
#include "ballistics/reference_store.hpp"

namespace ballistics {

// Anomaly gate parameters: the query proceeds into classification only when
// its K best similarities sum to at least the anomaly threshold T.
struct AnomalyParams {
  int k = 3;
  double t = 2.90;

  void validate() const {
    if (k < 1) throw BadParams("K must be >= 1");
    if (t < 0 || t > k) throw BadParams("T must lie in [0, K]");
  }
};

enum class AnomalyVerdict { kProcessed, kNotProcessed };

namespace engine_detail {

inline std::vector<double> similarities_to_all(
    const FeatureVector& query, const ReferenceDataset& dataset) {
  const FlatFeatures flat_query = vector_flatten(query);
  std::vector<double> sims;
  sims.reserve(dataset.samples.size());
  for (const LabeledSample& sample : dataset.samples) {
    sims.push_back(cosine_similarity(flat_query, vector_flatten(sample.vector)));
  }
  return sims;
}

// Sample positions ordered by similarity descending, sample id ascending.
inline std::vector<std::size_t> neighbor_order(
    const ReferenceDataset& dataset, const std::vector<double>& sims) {
  std::vector<std::size_t> order(sims.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sims[a] != sims[b]) return sims[a] > sims[b];
    return dataset.samples[a].id < dataset.samples[b].id;
  });
  return order;
}

}  // namespace engine_detail

// Similarity-sum gate deciding whether the query plausibly went through any
// known SNS pipeline: at least K reference samples must be similar to it.
inline AnomalyVerdict anomaly_check(const FeatureVector& query,
                                    const ReferenceDataset& dataset,
                                    const AnomalyParams& params) {
  params.validate();
  if (dataset.samples.empty()) throw EmptyDataset("anomaly check needs samples");
  if (static_cast<std::size_t>(params.k) > dataset.samples.size()) {
    throw BadParams("K exceeds the dataset size");
  }
  std::vector<double> sims = engine_detail::similarities_to_all(query, dataset);
  std::partial_sort(sims.begin(), sims.begin() + params.k, sims.end(),
                    std::greater<>());
  double top_sum = 0;
  for (int i = 0; i < params.k; ++i) top_sum += sims[static_cast<std::size_t>(i)];
  return top_sum >= params.t ? AnomalyVerdict::kProcessed
                             : AnomalyVerdict::kNotProcessed;
}

struct SnsScore {
  Sns sns = Sns::kFacebook;
  double score = 0.0;  // votes among the K nearest neighbors

  bool operator==(const SnsScore&) const = default;
};

// K-nearest-neighbor SNS classification. Neighbors are the K samples with the
// highest cosine similarity; classes are ranked by vote count, ties broken by
// the best similarity within the class, then by lowest sample id. Every SNS
// present in the dataset appears in the ranking so the consistency loop can
// walk "next most probable" predictions; classes outside the top K carry zero
// votes and rank by their best similarity over the whole dataset.
inline std::vector<SnsScore> knn_sns(const FeatureVector& query,
                                     const ReferenceDataset& dataset, int k) {
  if (dataset.samples.empty()) throw EmptyDataset("knn needs samples");
  if (k < 1) throw BadParams("K must be >= 1");
  const std::size_t effective_k =
      std::min(static_cast<std::size_t>(k), dataset.samples.size());

  const std::vector<double> sims =
      engine_detail::similarities_to_all(query, dataset);
  const std::vector<std::size_t> order =
      engine_detail::neighbor_order(dataset, sims);

  // Standing per class: voted classes draw best similarity and lowest id
  // from their neighbors inside the top K; zero-vote classes from all of
  // their samples in the dataset.
  struct ClassStanding {
    std::size_t votes = 0;
    double best_similarity = -1.0;
    int lowest_id = 0;
  };
  std::map<int, ClassStanding> standings;  // key: static_cast<int>(Sns)

  const auto absorb = [](ClassStanding& standing, double similarity, int id,
                         bool first) {
    if (first) {
      standing.best_similarity = similarity;
      standing.lowest_id = id;
      return;
    }
    standing.best_similarity = std::max(standing.best_similarity, similarity);
    standing.lowest_id = std::min(standing.lowest_id, id);
  };

  for (std::size_t rank = 0; rank < effective_k; ++rank) {
    const std::size_t pos = order[rank];
    const LabeledSample& sample = dataset.samples[pos];
    ClassStanding& standing = standings[static_cast<int>(sample.sns)];
    absorb(standing, sims[pos], sample.id, standing.votes == 0);
    ++standing.votes;
  }

  for (std::size_t pos = 0; pos < dataset.samples.size(); ++pos) {
    const LabeledSample& sample = dataset.samples[pos];
    const int key = static_cast<int>(sample.sns);
    const auto it = standings.find(key);
    if (it != standings.end() && it->second.votes > 0) continue;
    ClassStanding& standing = standings[key];
    absorb(standing, sims[pos], sample.id, standing.best_similarity < 0);
  }

  std::vector<std::pair<Sns, ClassStanding>> ranked;
  ranked.reserve(standings.size());
  for (const auto& [key, standing] : standings) {
    ranked.emplace_back(static_cast<Sns>(key), standing);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.votes != b.second.votes) return a.second.votes > b.second.votes;
    if (a.second.best_similarity != b.second.best_similarity) {
      return a.second.best_similarity > b.second.best_similarity;
    }
    return a.second.lowest_id < b.second.lowest_id;
  });

  std::vector<SnsScore> result;
  result.reserve(ranked.size());
  for (const auto& [sns, standing] : ranked) {
    result.push_back({sns, static_cast<double>(standing.votes)});
  }
  return result;
}

enum class ConsistencyResult { kPass, kFail };

// The SNS consistency test: a predicted platform that recompresses only above
// a pixel threshold cannot have produced an image whose longest side is below
// that threshold. Platforms that always recompress pass unconditionally, as do
// the user-option (Flickr) and byte-size (Imgur) platforms, whose conditions
// are not decidable from the downloaded pixels.
inline ConsistencyResult consistency_test(Sns sns, const FeatureVector& vector,
                                          const ProfileSet& profiles) {
  const PlatformProfile& profile = profiles.at(sns);
  if (profile.recompression != Recompression::kConditionalOnM) {
    return ConsistencyResult::kPass;
  }
  const std::uint32_t longest = std::max(vector.width, vector.height);
  return longest < *profile.resize_threshold ? ConsistencyResult::kFail
                                             : ConsistencyResult::kPass;
}

// Full pipeline output for one image.
struct ClassificationReport {
  AnomalyVerdict anomaly = AnomalyVerdict::kNotProcessed;
  // Engaged only when anomaly == kProcessed; nullopt then means "Not Sure"
  // (the consistency loop exhausted every ranked SNS).
  std::optional<Sns> sns_prediction;
  bool not_sure = false;
  std::vector<SnsScore> sns_ranking;
  std::optional<UploadClient> upload_client;
  std::optional<SelectionMethod> selection_method;
  std::vector<FilenameMatch> filename_evidence;
  std::optional<std::string> camera_model;
};

// The composite classifier: first-stage filename/camera evidence, anomaly
// gate, then the K-NN SNS classifier and the upload-scenario decision tree,
// with the SNS prediction filtered through the consistency test. The loop
// walks the ranking until a platform passes; exhausting it yields "Not Sure".
inline ClassificationReport classify(const FileIdentity& identity,
                                     const FeatureVector& vector,
                                     const ExifMap& exif,
                                     const ReferenceDataset& dataset,
                                     const DecisionTree& tree,
                                     const AnomalyParams& params,
                                     const ProfileSet& profiles) {
  ClassificationReport report;
  report.filename_evidence = match_filename(identity.filename, profiles);
  report.camera_model = unique_camera_model(exif);

  report.anomaly = anomaly_check(vector, dataset, params);
  if (report.anomaly == AnomalyVerdict::kNotProcessed) {
    return report;
  }

  report.sns_ranking = knn_sns(vector, dataset, params.k);
  const UploadScenario scenario = id3_predict(tree, vector);
  report.upload_client = scenario.client;
  report.selection_method = scenario.selection;

  for (const SnsScore& candidate : report.sns_ranking) {
    if (consistency_test(candidate.sns, vector, profiles) ==
        ConsistencyResult::kPass) {
      report.sns_prediction = candidate.sns;
      break;
    }
  }
  report.not_sure = !report.sns_prediction.has_value();
  return report;
}

// Averaged confusion matrix with fixed axes.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<double> cells;  // row-major: cells[actual * n + predicted]

  double at(std::size_t actual, std::size_t predicted) const {
    return cells[actual * labels.size() + predicted];
  }
};

struct CrossValidationMetrics {
  int folds = 0;
  std::uint64_t seed = 0;
  ConfusionMatrix sns_confusion;       // 10 x 10, averaged over folds
  ConfusionMatrix scenario_confusion;  // 5 x 5, averaged over folds
  double sns_accuracy = 0.0;
  double upload_client_accuracy = 0.0;
  // Selection-method accuracy among samples whose true client is a native app.
  double selection_accuracy_native = 0.0;
};

// Stratified k-fold cross-validation of the two classifier tasks. Folds are
// assigned per (sns, scenario) stratum with a seeded shuffle, so reruns with
// the same seed give identical metrics. The anomaly gate and consistency test
// are validated separately and do not participate here.
inline CrossValidationMetrics cross_validate(const ReferenceDataset& dataset,
                                             int folds,
                                             const AnomalyParams& params,
                                             std::uint64_t seed = 0,
                                             const Id3Options& tree_options = {}) {
  params.validate();
  if (folds < 2) throw BadParams("cross-validation needs folds >= 2");

  // Stratify by the joint (sns, scenario) class.
  std::map<std::pair<int, std::size_t>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    const LabeledSample& s = dataset.samples[i];
    strata[{static_cast<int>(s.sns),
            scenario_index(s.upload_client, s.selection_method)}]
        .push_back(i);
  }
  for (const auto& [key, members] : strata) {
    if (members.size() < static_cast<std::size_t>(folds)) {
      throw TooFewSamples(
          "class " + std::string(to_string(static_cast<Sns>(key.first))) + "/" +
          to_string(kAllScenarios[key.second]) + " has " +
          std::to_string(members.size()) + " samples, needs >= " +
          std::to_string(folds));
    }
  }

  SeededRng rng(seed);
  std::vector<int> fold_of(dataset.samples.size(), 0);
  for (auto& [key, members] : strata) {
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i) {
      fold_of[members[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
    }
  }

  const std::size_t sns_n = kAllSns.size();
  std::vector<double> sns_cells(sns_n * sns_n, 0.0);
  std::vector<double> scenario_cells(kScenarioCount * kScenarioCount, 0.0);
  double sns_accuracy_sum = 0.0;
  double client_accuracy_sum = 0.0;
  double selection_accuracy_sum = 0.0;
  int selection_folds = 0;

  for (int fold = 0; fold < folds; ++fold) {
    std::vector<LabeledSample> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
      if (fold_of[i] == fold) {
        test.push_back(i);
      } else {
        train.push_back(dataset.samples[i]);
      }
    }
    const ReferenceDataset train_ds = make_dataset(std::move(train));
    const DecisionTree tree = id3_train(train_ds.samples, tree_options);

    std::size_t sns_correct = 0;
    std::size_t client_correct = 0;
    std::size_t selection_correct = 0;
    std::size_t native_total = 0;
    for (std::size_t idx : test) {
      const LabeledSample& sample = dataset.samples[idx];
      const std::vector<SnsScore> ranking =
          knn_sns(sample.vector, train_ds, params.k);
      const Sns predicted_sns = ranking.front().sns;
      const UploadScenario predicted_scenario =
          id3_predict(tree, sample.vector);

      const auto actual_sns = static_cast<std::size_t>(sample.sns);
      sns_cells[actual_sns * sns_n + static_cast<std::size_t>(predicted_sns)] +=
          1.0 / folds;
      if (predicted_sns == sample.sns) ++sns_correct;

      const std::size_t actual_scenario =
          scenario_index(sample.upload_client, sample.selection_method);
      const std::size_t predicted_scenario_idx = scenario_index(
          predicted_scenario.client, predicted_scenario.selection);
      scenario_cells[actual_scenario * kScenarioCount +
                     predicted_scenario_idx] += 1.0 / folds;
      if (predicted_scenario.client == sample.upload_client) ++client_correct;
      if (sample.upload_client != UploadClient::kBrowser) {
        ++native_total;
        if (predicted_scenario.selection == sample.selection_method) {
          ++selection_correct;
        }
      }
    }
    const auto test_n = static_cast<double>(test.size());
    sns_accuracy_sum += static_cast<double>(sns_correct) / test_n;
    client_accuracy_sum += static_cast<double>(client_correct) / test_n;
    if (native_total > 0) {
      selection_accuracy_sum += static_cast<double>(selection_correct) /
                                static_cast<double>(native_total);
      ++selection_folds;
    }
  }

  CrossValidationMetrics metrics;
  metrics.folds = folds;
  metrics.seed = seed;
  metrics.sns_confusion.labels.reserve(sns_n);
  for (Sns s : kAllSns) metrics.sns_confusion.labels.emplace_back(to_string(s));
  metrics.sns_confusion.cells = std::move(sns_cells);
  for (const UploadScenario& s : kAllScenarios) {
    metrics.scenario_confusion.labels.push_back(to_string(s));
  }
  metrics.scenario_confusion.cells = std::move(scenario_cells);
  metrics.sns_accuracy = sns_accuracy_sum / folds;
  metrics.upload_client_accuracy = client_accuracy_sum / folds;
  metrics.selection_accuracy_native =
      selection_folds > 0 ? selection_accuracy_sum / selection_folds : 0.0;
  return metrics;
}

}  // namespace ballistics

#endif  // BALLISTICS_CLASSIFY_ENGINE_HPP_
