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

#ifndef BALLISTICS_REPORT_HPP_
#define BALLISTICS_REPORT_HPP_

#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ballistics/classify_engine.hpp"
#include "ballistics/filename_heuristics.hpp"

namespace ballistics {

// One self-describing document per classified image. Parsing the document
// back recovers every field (see parse_structured_report).
inline nlohmann::json structured_report(const std::string& filename,
                                        const ClassificationReport& report) {
  nlohmann::json doc;
  doc["file"] = filename;
  doc["processed"] = report.anomaly == AnomalyVerdict::kProcessed;
  if (report.anomaly == AnomalyVerdict::kProcessed) {
    if (report.sns_prediction) {
      doc["sns"] = to_string(*report.sns_prediction);
    } else {
      doc["sns"] = "not_sure";
    }
    doc["upload_client"] = to_string(*report.upload_client);
    doc["selection_method"] = to_string(*report.selection_method);
    nlohmann::json ranking = nlohmann::json::array();
    for (const SnsScore& entry : report.sns_ranking) {
      ranking.push_back({{"sns", to_string(entry.sns)}, {"score", entry.score}});
    }
    doc["sns_ranking"] = std::move(ranking);
  }
  nlohmann::json evidence = nlohmann::json::array();
  for (const FilenameMatch& match : report.filename_evidence) {
    nlohmann::json m;
    m["sns"] = to_string(match.sns);
    m["specificity"] =
        match.specificity == Specificity::kStrong ? "strong" : "weak";
    if (match.image_id) m["image_id"] = *match.image_id;
    if (match.date) m["date"] = match.date->to_iso();
    if (match.resolution_hint) m["resolution_hint"] = *match.resolution_hint;
    if (match.lookup_url) m["lookup_url"] = *match.lookup_url;
    evidence.push_back(std::move(m));
  }
  doc["filename_evidence"] = std::move(evidence);
  if (report.camera_model) doc["camera_model"] = *report.camera_model;
  return doc;
}

inline ClassificationReport parse_structured_report(const nlohmann::json& doc) {
  ClassificationReport report;
  report.anomaly = doc.at("processed").get<bool>()
                       ? AnomalyVerdict::kProcessed
                       : AnomalyVerdict::kNotProcessed;
  if (report.anomaly == AnomalyVerdict::kProcessed) {
    const std::string sns_text = doc.at("sns").get<std::string>();
    if (sns_text == "not_sure") {
      report.not_sure = true;
    } else {
      report.sns_prediction = parse_sns(sns_text).value();
    }
    report.upload_client =
        parse_upload_client(doc.at("upload_client").get<std::string>()).value();
    report.selection_method =
        parse_selection_method(doc.at("selection_method").get<std::string>())
            .value();
    for (const nlohmann::json& entry : doc.at("sns_ranking")) {
      report.sns_ranking.push_back(
          {parse_sns(entry.at("sns").get<std::string>()).value(),
           entry.at("score").get<double>()});
    }
  }
  for (const nlohmann::json& m : doc.at("filename_evidence")) {
    FilenameMatch match;
    match.sns = parse_sns(m.at("sns").get<std::string>()).value();
    match.specificity = m.at("specificity").get<std::string>() == "strong"
                            ? Specificity::kStrong
                            : Specificity::kWeak;
    if (m.contains("image_id")) match.image_id = m["image_id"].get<std::string>();
    if (m.contains("date")) {
      const std::string iso = m["date"].get<std::string>();
      match.date = CalendarDate{std::stoi(iso.substr(0, 4)),
                                std::stoi(iso.substr(5, 2)),
                                std::stoi(iso.substr(8, 2))};
    }
    if (m.contains("resolution_hint")) {
      match.resolution_hint = m["resolution_hint"].get<std::string>();
    }
    if (m.contains("lookup_url")) {
      match.lookup_url = m["lookup_url"].get<std::string>();
    }
    report.filename_evidence.push_back(std::move(match));
  }
  if (doc.contains("camera_model")) {
    report.camera_model = doc["camera_model"].get<std::string>();
  }
  return report;
}

inline std::string human_report(const std::string& filename,
                                const ClassificationReport& report) {
  std::ostringstream out;
  out << filename << "\n";
  if (report.anomaly == AnomalyVerdict::kNotProcessed) {
    out << "  verdict: not processed by a known SNS (anomaly gate)\n";
  } else if (report.not_sure) {
    out << "  verdict: processed, but the SNS is Not Sure"
        << " (every ranked platform failed the consistency test)\n";
  } else {
    out << "  verdict: processed by " << to_string(*report.sns_prediction)
        << "\n";
  }
  if (report.upload_client) {
    out << "  upload client: " << to_string(*report.upload_client);
    if (report.selection_method &&
        *report.selection_method != SelectionMethod::kNotApplicable) {
      out << " (" << to_string(*report.selection_method) << ")";
    }
    out << "\n";
  }
  if (!report.sns_ranking.empty()) {
    out << "  sns ranking:";
    for (const SnsScore& entry : report.sns_ranking) {
      out << " " << to_string(entry.sns) << "="
          << static_cast<int>(entry.score);
    }
    out << "\n";
  }
  for (const FilenameMatch& match : report.filename_evidence) {
    out << "  filename evidence: " << to_string(match.sns) << " ("
        << (match.specificity == Specificity::kStrong ? "strong" : "weak")
        << ")";
    if (match.image_id) out << " id=" << *match.image_id;
    if (match.date) out << " date=" << match.date->to_iso();
    if (match.resolution_hint) out << " resolution=" << *match.resolution_hint;
    if (match.lookup_url) {
      out << " url=" << *match.lookup_url;
    } else if (match.image_id) {
      if (const auto note = lookup_note(match.sns)) out << " (" << *note << ")";
    }
    out << "\n";
  }
  if (report.camera_model) {
    out << "  camera model: " << *report.camera_model << "\n";
  }
  return out.str();
}

inline std::string render_confusion(const ConfusionMatrix& matrix,
                                    const std::string& title) {
  std::ostringstream out;
  out << title << " (rows: actual, columns: predicted, fold-averaged counts)\n";
  std::size_t width = 8;
  for (const std::string& label : matrix.labels) {
    width = std::max(width, label.size() + 2);
  }
  out << std::setw(static_cast<int>(width)) << "";
  for (const std::string& label : matrix.labels) {
    out << std::setw(static_cast<int>(width)) << label;
  }
  out << "\n";
  for (std::size_t r = 0; r < matrix.labels.size(); ++r) {
    out << std::setw(static_cast<int>(width)) << matrix.labels[r];
    for (std::size_t c = 0; c < matrix.labels.size(); ++c) {
      out << std::setw(static_cast<int>(width)) << std::fixed
          << std::setprecision(2) << matrix.at(r, c);
    }
    out << "\n";
  }
  return out.str();
}

inline std::string human_metrics(const CrossValidationMetrics& metrics) {
  std::ostringstream out;
  out << "cross-validation: " << metrics.folds << " folds, seed "
      << metrics.seed << "\n\n";
  out << render_confusion(metrics.sns_confusion, "SNS confusion matrix");
  out << "\n";
  out << render_confusion(metrics.scenario_confusion,
                          "Upload scenario confusion matrix");
  out << "\n";
  out << std::fixed << std::setprecision(2);
  out << "sns accuracy: " << metrics.sns_accuracy * 100 << "%\n";
  out << "upload client accuracy: " << metrics.upload_client_accuracy * 100
      << "%\n";
  out << "selection method accuracy (native-app prior): "
      << metrics.selection_accuracy_native * 100 << "%\n";
  return out.str();
}

inline nlohmann::json structured_metrics(const CrossValidationMetrics& m) {
  nlohmann::json doc;
  doc["folds"] = m.folds;
  doc["seed"] = m.seed;
  doc["sns_accuracy"] = m.sns_accuracy;
  doc["upload_client_accuracy"] = m.upload_client_accuracy;
  doc["selection_accuracy_native"] = m.selection_accuracy_native;
  const auto matrix_json = [](const ConfusionMatrix& matrix) {
    nlohmann::json j;
    j["labels"] = matrix.labels;
    j["cells"] = matrix.cells;
    return j;
  };
  doc["sns_confusion"] = matrix_json(m.sns_confusion);
  doc["scenario_confusion"] = matrix_json(m.scenario_confusion);
  return doc;
}

}  // namespace ballistics

#endif  // BALLISTICS_REPORT_HPP_
