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

#ifndef BALLISTICS_DECISION_TREE_HPP_
#define BALLISTICS_DECISION_TREE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ballistics/errors.hpp"
#include "ballistics/features.hpp"
#include "ballistics/labels.hpp"
#include "ballistics/reference_store.hpp"

namespace ballistics {

// Shannon entropy in bits of a class-count histogram.
inline double label_entropy(std::span<const std::size_t> counts) {
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

// One node of the upload-scenario tree. Internal nodes route on
// feature value <= threshold (left) versus > threshold (right); leaves carry
// the predicted upload scenario. `gain` records the information gain of the
// chosen split for audit.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  int left = -1;
  int right = -1;
  std::size_t sample_count = 0;
  std::optional<UploadScenario> leaf;

  bool is_leaf() const { return leaf.has_value(); }
};

class DecisionTree {
 public:
  int add_node(TreeNode node) {
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  const TreeNode& node(int index) const {
    return nodes_[static_cast<std::size_t>(index)];
  }

  TreeNode& node(int index) { return nodes_[static_cast<std::size_t>(index)]; }

  std::size_t node_count() const { return nodes_.size(); }

  bool empty() const { return nodes_.empty(); }

  int root() const { return 0; }

 private:
  std::vector<TreeNode> nodes_;
};

struct Id3Options {
  int max_depth = 12;
  // Gains at or below this value are treated as zero and stop the recursion.
  double min_gain = 1e-12;
};

namespace tree_detail {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

inline std::array<std::size_t, kScenarioCount> scenario_counts(
    const std::vector<std::size_t>& labels,
    const std::vector<std::size_t>& subset) {
  std::array<std::size_t, kScenarioCount> counts{};
  for (std::size_t idx : subset) ++counts[labels[idx]];
  return counts;
}

// Majority scenario; count ties resolve to the lowest scenario index.
inline UploadScenario majority_scenario(
    const std::array<std::size_t, kScenarioCount>& counts) {
  std::size_t best = 0;
  for (std::size_t s = 1; s < kScenarioCount; ++s) {
    if (counts[s] > counts[best]) best = s;
  }
  return kAllScenarios[best];
}

// Greedy best binary split of `subset`: scans every feature and every
// midpoint between consecutive distinct sorted values, maximizing information
// gain over the joint upload-scenario label. Ties keep the first candidate in
// (feature index, threshold) order.
inline SplitChoice best_split(const std::vector<FlatFeatures>& features,
                              const std::vector<std::size_t>& labels,
                              const std::vector<std::size_t>& subset) {
  const double parent_entropy = label_entropy(scenario_counts(labels, subset));
  const auto total = static_cast<double>(subset.size());

  SplitChoice best;
  std::vector<std::pair<double, std::size_t>> ordered(subset.size());
  for (std::size_t f = 0; f < kFeatureDims; ++f) {
    for (std::size_t i = 0; i < subset.size(); ++i) {
      ordered[i] = {features[subset[i]][f], labels[subset[i]]};
    }
    std::sort(ordered.begin(), ordered.end());

    std::array<std::size_t, kScenarioCount> left_counts{};
    std::array<std::size_t, kScenarioCount> right_counts{};
    for (const auto& [value, label] : ordered) ++right_counts[label];

    for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
      ++left_counts[ordered[i].second];
      --right_counts[ordered[i].second];
      if (ordered[i].first == ordered[i + 1].first) continue;
      const double threshold =
          ordered[i].first + (ordered[i + 1].first - ordered[i].first) / 2.0;
      const double left_n = static_cast<double>(i + 1);
      const double right_n = total - left_n;
      const double children =
          left_n / total * label_entropy(left_counts) +
          right_n / total * label_entropy(right_counts);
      const double gain = parent_entropy - children;
      if (gain > best.gain) {
        best = {static_cast<int>(f), threshold, gain};
      }
    }
  }
  return best;
}

inline int build_node(DecisionTree& tree,
                      const std::vector<FlatFeatures>& features,
                      const std::vector<std::size_t>& labels,
                      const std::vector<std::size_t>& subset, int depth,
                      const Id3Options& options) {
  const std::array<std::size_t, kScenarioCount> counts =
      scenario_counts(labels, subset);

  TreeNode node;
  node.sample_count = subset.size();

  const bool pure =
      *std::max_element(counts.begin(), counts.end()) == subset.size();
  if (pure || depth >= options.max_depth) {
    node.leaf = majority_scenario(counts);
    return tree.add_node(node);
  }

  const SplitChoice split = best_split(features, labels, subset);
  if (split.feature < 0 || split.gain <= options.min_gain) {
    node.leaf = majority_scenario(counts);
    return tree.add_node(node);
  }

  std::vector<std::size_t> left, right;
  for (std::size_t idx : subset) {
    if (features[idx][static_cast<std::size_t>(split.feature)] <=
        split.threshold) {
      left.push_back(idx);
    } else {
      right.push_back(idx);
    }
  }

  node.feature = split.feature;
  node.threshold = split.threshold;
  node.gain = split.gain;
  const int index = tree.add_node(node);
  const int left_index =
      build_node(tree, features, labels, left, depth + 1, options);
  const int right_index =
      build_node(tree, features, labels, right, depth + 1, options);
  tree.node(index).left = left_index;
  tree.node(index).right = right_index;
  return index;
}

}  // namespace tree_detail

// ID3 induction over the joint (upload client, selection method) label:
// top-down greedy splits with no backtracking, ranked by entropy-based
// information gain. Continuous features use binary threshold splits with
// midpoint candidates.
inline DecisionTree id3_train(const std::vector<LabeledSample>& samples,
                              const Id3Options& options = {}) {
  if (samples.empty()) throw EmptySamples("cannot train a tree on no samples");

  std::vector<FlatFeatures> features;
  std::vector<std::size_t> labels;
  features.reserve(samples.size());
  labels.reserve(samples.size());
  std::vector<std::size_t> subset(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    features.push_back(vector_flatten(samples[i].vector));
    labels.push_back(
        scenario_index(samples[i].upload_client, samples[i].selection_method));
    subset[i] = i;
  }

  DecisionTree tree;
  tree_detail::build_node(tree, features, labels, subset, 0, options);
  return tree;
}

inline UploadScenario id3_predict(const DecisionTree& tree,
                                  const FeatureVector& vector) {
  if (tree.empty()) throw EmptySamples("tree has no nodes");
  const FlatFeatures flat = vector_flatten(vector);
  int index = tree.root();
  while (!tree.node(index).is_leaf()) {
    const TreeNode& n = tree.node(index);
    index = flat[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                     : n.right;
  }
  return *tree.node(index).leaf;
}

}  // namespace ballistics

#endif  // BALLISTICS_DECISION_TREE_HPP_
