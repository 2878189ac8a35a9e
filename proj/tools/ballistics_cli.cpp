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

// Command-line front end: extract features, build reference indexes,
// classify images, run cross-validation and simulate platform uploads.
//
// Exit codes: 0 success, 1 data error, 2 usage error.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ballistics/bytes_io.hpp"
#include "ballistics/classify_engine.hpp"
#include "ballistics/decision_tree.hpp"
#include "ballistics/errors.hpp"
#include "ballistics/exif_reader.hpp"
#include "ballistics/features.hpp"
#include "ballistics/filename_heuristics.hpp"
#include "ballistics/jpeg_structure.hpp"
#include "ballistics/platform_profile.hpp"
#include "ballistics/reference_store.hpp"
#include "ballistics/report.hpp"
#include "ballistics/sns_simulator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsage = 2;

struct CliConfig {
  std::string index_path;
  std::string profile_path;
  int k = 3;
  double t = 2.90;
  int folds = 5;
  std::uint64_t seed = 0;
  std::string format = "human";

  bool structured() const { return format == "structured"; }
};

ballistics::ProfileSet load_profile_set(const CliConfig& config) {
  if (config.profile_path.empty()) return ballistics::default_profiles();
  return ballistics::load_profiles(config.profile_path);
}

struct ParsedImage {
  ballistics::FileIdentity identity;
  ballistics::FeatureVector vector;
  ballistics::ExifMap exif;
};

ParsedImage parse_image(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = ballistics::read_file_bytes(path);
  const ballistics::JpegStructure structure = ballistics::parse_jpeg(bytes);
  ParsedImage parsed;
  parsed.identity.filename = path.filename().string();
  parsed.identity.byte_size = bytes.size();
  if (structure.exif_payload) {
    parsed.exif = ballistics::parse_exif(*structure.exif_payload);
  }
  parsed.vector = ballistics::build_feature_vector(structure, parsed.exif);
  return parsed;
}

int cmd_extract(const std::vector<std::string>& paths,
                const CliConfig& config) {
  const ballistics::ProfileSet profiles = load_profile_set(config);
  bool any_failed = false;
  for (const std::string& path : paths) {
    try {
      const ParsedImage parsed = parse_image(path);
      const ballistics::FlatFeatures flat =
          ballistics::vector_flatten(parsed.vector);
      const auto matches =
          ballistics::match_filename(parsed.identity.filename, profiles);
      const auto camera = ballistics::unique_camera_model(parsed.exif);

      if (config.structured()) {
        nlohmann::json doc;
        doc["file"] = parsed.identity.filename;
        doc["features"] = flat;
        nlohmann::json evidence = nlohmann::json::array();
        for (const ballistics::FilenameMatch& m : matches) {
          evidence.push_back(std::string(ballistics::to_string(m.sns)));
        }
        doc["filename_evidence"] = std::move(evidence);
        if (camera) doc["camera_model"] = *camera;
        std::cout << doc.dump() << "\n";
      } else {
        std::cout << parsed.identity.filename;
        for (double value : flat) {
          std::cout << "," << static_cast<std::uint64_t>(value);
        }
        std::cout << "\n";
        for (const ballistics::FilenameMatch& m : matches) {
          std::cout << "  filename evidence: " << ballistics::to_string(m.sns)
                    << (m.specificity == ballistics::Specificity::kStrong
                            ? " (strong)"
                            : " (weak)")
                    << "\n";
        }
        if (camera) std::cout << "  camera model: " << *camera << "\n";
      }
    } catch (const ballistics::Error& e) {
      std::cerr << path << ": " << e.what() << "\n";
      any_failed = true;
    }
  }
  return any_failed ? kExitDataError : kExitOk;
}

int cmd_index(const std::string& manifest, const std::string& root,
              const std::string& out) {
  const std::filesystem::path manifest_path(manifest);
  const std::filesystem::path image_root =
      root.empty() ? manifest_path.parent_path() : std::filesystem::path(root);
  const ballistics::IngestResult result =
      ballistics::ingest(manifest_path, image_root);
  for (const ballistics::FileIssue& issue : result.failures) {
    std::cerr << "skipped " << issue.filename << ": " << issue.message << "\n";
  }
  ballistics::save_index(result.dataset, out);

  std::cout << "N=" << result.dataset.samples.size() << "\n";
  std::map<ballistics::Sns, int> per_class;
  for (const ballistics::LabeledSample& s : result.dataset.samples) {
    ++per_class[s.sns];
  }
  for (const auto& [sns, count] : per_class) {
    std::cout << "  " << ballistics::to_string(sns) << ": " << count << "\n";
  }
  std::cout << "index written to " << out << "\n";
  return kExitOk;
}

int cmd_classify(const std::vector<std::string>& paths,
                 const CliConfig& config) {
  const ballistics::ProfileSet profiles = load_profile_set(config);
  const ballistics::ReferenceDataset dataset =
      ballistics::load_index(config.index_path);
  const ballistics::DecisionTree tree = ballistics::id3_train(dataset.samples);
  const ballistics::AnomalyParams params{config.k, config.t};
  params.validate();

  bool any_failed = false;
  for (const std::string& path : paths) {
    try {
      const ParsedImage parsed = parse_image(path);
      const ballistics::ClassificationReport report =
          ballistics::classify(parsed.identity, parsed.vector, parsed.exif,
                               dataset, tree, params, profiles);
      if (config.structured()) {
        std::cout << ballistics::structured_report(parsed.identity.filename,
                                                   report)
                         .dump()
                  << "\n";
      } else {
        std::cout << ballistics::human_report(parsed.identity.filename, report);
      }
    } catch (const ballistics::Error& e) {
      std::cerr << path << ": " << e.what() << "\n";
      any_failed = true;
    }
  }
  return any_failed ? kExitDataError : kExitOk;
}

int cmd_evaluate(const CliConfig& config) {
  const ballistics::ReferenceDataset dataset =
      ballistics::load_index(config.index_path);
  const ballistics::AnomalyParams params{config.k, config.t};
  const ballistics::CrossValidationMetrics metrics = ballistics::cross_validate(
      dataset, config.folds, params, config.seed);
  if (config.structured()) {
    std::cout << ballistics::structured_metrics(metrics).dump(2) << "\n";
  } else {
    std::cout << ballistics::human_metrics(metrics);
  }
  return kExitOk;
}

int cmd_simulate(const std::vector<std::string>& sources,
                 const std::string& out_dir,
                 const std::vector<std::string>& client_names,
                 const CliConfig& config) {
  std::vector<ballistics::UploadClient> clients;
  for (const std::string& name : client_names) {
    const auto client = ballistics::parse_upload_client(
        name == "android" ? "android_app" : name == "ios" ? "ios_app" : name);
    if (!client) throw ballistics::BadParams("unknown client '" + name + "'");
    clients.push_back(*client);
  }
  std::vector<std::filesystem::path> source_paths;
  for (const std::string& s : sources) {
    if (!std::filesystem::exists(s)) {
      throw ballistics::IoError("missing source file " + s);
    }
    source_paths.emplace_back(s);
  }
  const ballistics::ProfileSet profiles = load_profile_set(config);
  const ballistics::CorpusResult result = ballistics::generate_corpus(
      source_paths, profiles, clients, config.seed, out_dir);
  std::cout << result.file_count << " files written\n";
  std::cout << "manifest: " << result.manifest_path.string() << "\n";
  return kExitOk;
}

int cmd_profiles(const std::string& out) {
  const ballistics::ProfileSet profiles = ballistics::default_profiles();
  if (out.empty()) {
    ballistics::save_profiles(profiles, std::cout);
  } else {
    ballistics::save_profiles(profiles, std::filesystem::path(out));
    std::cout << "profiles written to " << out << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image ballistics toolkit: determines whether a JPEG was "
               "processed by a Social Network Service, which one, and through "
               "which upload client."};
  app.require_subcommand(1);

  CliConfig config;

  CLI::App* extract = app.add_subcommand(
      "extract", "Print the 44-dimensional feature vector of each image");
  std::vector<std::string> extract_paths;
  extract->add_option("images", extract_paths, "JPEG files")->required();
  extract->add_option("--profiles", config.profile_path, "profile file");
  extract->add_option("--format", config.format, "human or structured")
      ->check(CLI::IsMember({"human", "structured"}));

  CLI::App* index =
      app.add_subcommand("index", "Build a reference index from a manifest");
  std::string manifest, root, out;
  index->add_option("--manifest", manifest, "label manifest (tsv)")
      ->required();
  index->add_option("--root", root,
                    "image root directory (default: manifest directory)");
  index->add_option("--out", out, "output index path")->required();

  CLI::App* classify =
      app.add_subcommand("classify", "Classify images against an index");
  std::vector<std::string> classify_paths;
  classify->add_option("images", classify_paths, "JPEG files")->required();
  classify->add_option("--index", config.index_path, "reference index")
      ->required();
  classify->add_option("--profiles", config.profile_path, "profile file");
  classify->add_option("--k", config.k, "neighbor count K")
      ->check(CLI::PositiveNumber);
  classify->add_option("--t", config.t, "anomaly threshold T");
  classify->add_option("--format", config.format, "human or structured")
      ->check(CLI::IsMember({"human", "structured"}));

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Cross-validate the classifiers on an index");
  evaluate->add_option("--index", config.index_path, "reference index")
      ->required();
  evaluate->add_option("--folds", config.folds, "fold count")
      ->check(CLI::Range(2, 1000));
  evaluate->add_option("--k", config.k, "neighbor count K")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--t", config.t, "anomaly threshold T");
  evaluate->add_option("--seed", config.seed, "fold shuffle seed");
  evaluate->add_option("--format", config.format, "human or structured")
      ->check(CLI::IsMember({"human", "structured"}));

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Generate a labeled corpus through the platform simulator");
  std::vector<std::string> sim_sources;
  std::string sim_out;
  std::vector<std::string> sim_clients = {"browser", "android", "ios"};
  simulate->add_option("sources", sim_sources, "source JPEG files")
      ->required();
  simulate->add_option("--out", sim_out, "output directory")->required();
  simulate->add_option("--clients", sim_clients,
                       "upload clients (browser, android, ios)")
      ->delimiter(',');
  simulate->add_option("--profiles", config.profile_path, "profile file");
  simulate->add_option("--seed", config.seed, "corpus seed");

  CLI::App* profiles_cmd = app.add_subcommand(
      "profiles", "Dump the built-in platform profiles");
  std::string profiles_out;
  profiles_cmd->add_option("--out", profiles_out,
                           "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (config.t < 0 || config.t > config.k) {
      std::cerr << "T must lie in [0, K]\n";
      return kExitUsage;
    }
    if (extract->parsed()) return cmd_extract(extract_paths, config);
    if (index->parsed()) return cmd_index(manifest, root, out);
    if (classify->parsed()) return cmd_classify(classify_paths, config);
    if (evaluate->parsed()) return cmd_evaluate(config);
    if (simulate->parsed()) {
      return cmd_simulate(sim_sources, sim_out, sim_clients, config);
    }
    if (profiles_cmd->parsed()) return cmd_profiles(profiles_out);
  } catch (const ballistics::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}
