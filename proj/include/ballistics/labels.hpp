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

#ifndef BALLISTICS_LABELS_HPP_
#define BALLISTICS_LABELS_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "ballistics/errors.hpp"

namespace ballistics {

// Social Network Services covered by the engine.
enum class Sns {
  kFacebook,
  kGooglePlus,
  kFlickr,
  kTumblr,
  kImgur,
  kTwitter,
  kWhatsApp,
  kTinypic,
  kInstagram,
  kTelegram,
};

inline constexpr std::array<Sns, 10> kAllSns = {
    Sns::kFacebook, Sns::kGooglePlus, Sns::kFlickr,  Sns::kTumblr,
    Sns::kImgur,    Sns::kTwitter,    Sns::kWhatsApp, Sns::kTinypic,
    Sns::kInstagram, Sns::kTelegram,
};

enum class UploadClient {
  kBrowser,
  kAndroidApp,
  kIosApp,
};

inline constexpr std::array<UploadClient, 3> kAllUploadClients = {
    UploadClient::kBrowser, UploadClient::kAndroidApp, UploadClient::kIosApp};

enum class SelectionMethod {
  kLocalGallery,
  kEmbeddedCamera,
  kNotApplicable,
};

inline std::string_view to_string(Sns s) {
  switch (s) {
    case Sns::kFacebook: return "facebook";
    case Sns::kGooglePlus: return "googleplus";
    case Sns::kFlickr: return "flickr";
    case Sns::kTumblr: return "tumblr";
    case Sns::kImgur: return "imgur";
    case Sns::kTwitter: return "twitter";
    case Sns::kWhatsApp: return "whatsapp";
    case Sns::kTinypic: return "tinypic";
    case Sns::kInstagram: return "instagram";
    case Sns::kTelegram: return "telegram";
  }
  return "unknown";
}

inline std::string_view to_string(UploadClient c) {
  switch (c) {
    case UploadClient::kBrowser: return "browser";
    case UploadClient::kAndroidApp: return "android_app";
    case UploadClient::kIosApp: return "ios_app";
  }
  return "unknown";
}

inline std::string_view to_string(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::kLocalGallery: return "local_gallery";
    case SelectionMethod::kEmbeddedCamera: return "embedded_camera";
    case SelectionMethod::kNotApplicable: return "not_applicable";
  }
  return "unknown";
}

inline std::optional<Sns> parse_sns(std::string_view text) {
  for (Sns s : kAllSns) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

inline std::optional<UploadClient> parse_upload_client(std::string_view text) {
  for (UploadClient c : kAllUploadClients) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

inline std::optional<SelectionMethod> parse_selection_method(
    std::string_view text) {
  for (SelectionMethod m :
       {SelectionMethod::kLocalGallery, SelectionMethod::kEmbeddedCamera,
        SelectionMethod::kNotApplicable}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

// An upload scenario pairs the client application with the way the image was
// selected. Browser uploads have no gallery/camera distinction, so the only
// valid pairs are the five below.
struct UploadScenario {
  UploadClient client = UploadClient::kBrowser;
  SelectionMethod selection = SelectionMethod::kNotApplicable;

  bool operator==(const UploadScenario&) const = default;
};

inline constexpr std::array<UploadScenario, 5> kAllScenarios = {{
    {UploadClient::kBrowser, SelectionMethod::kNotApplicable},
    {UploadClient::kAndroidApp, SelectionMethod::kLocalGallery},
    {UploadClient::kAndroidApp, SelectionMethod::kEmbeddedCamera},
    {UploadClient::kIosApp, SelectionMethod::kLocalGallery},
    {UploadClient::kIosApp, SelectionMethod::kEmbeddedCamera},
}};

inline constexpr std::size_t kScenarioCount = kAllScenarios.size();

inline bool is_valid_scenario(UploadClient client, SelectionMethod selection) {
  const bool browser = client == UploadClient::kBrowser;
  const bool not_applicable = selection == SelectionMethod::kNotApplicable;
  return browser == not_applicable;
}

inline std::size_t scenario_index(UploadClient client,
                                  SelectionMethod selection) {
  for (std::size_t i = 0; i < kAllScenarios.size(); ++i) {
    if (kAllScenarios[i].client == client &&
        kAllScenarios[i].selection == selection) {
      return i;
    }
  }
  throw BadParams("invalid upload scenario: " + std::string(to_string(client)) +
                  "/" + std::string(to_string(selection)));
}

inline std::string to_string(const UploadScenario& s) {
  if (s.client == UploadClient::kBrowser) return "browser";
  std::string base(s.client == UploadClient::kAndroidApp ? "android" : "ios");
  base += s.selection == SelectionMethod::kLocalGallery ? "_gallery"
                                                        : "_camera";
  return base;
}

inline std::optional<UploadScenario> parse_scenario(std::string_view text) {
  for (const UploadScenario& s : kAllScenarios) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

}  // namespace ballistics

#endif  // BALLISTICS_LABELS_HPP_
