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

#ifndef BALLISTICS_FILENAME_HEURISTICS_HPP_
#define BALLISTICS_FILENAME_HEURISTICS_HPP_

#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "ballistics/labels.hpp"
#include "ballistics/platform_profile.hpp"

namespace ballistics {

struct CalendarDate {
  int year = 0;
  int month = 0;
  int day = 0;

  bool operator==(const CalendarDate&) const = default;

  std::string to_iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
  }
};

// One platform whose renaming scheme matched a filename. Patterns overlap
// (Facebook and Instagram share the same shape, short tokens collide with
// ordinary names), so a filename can yield several candidates; the
// specificity grade separates distinctive schemes from collision-prone ones.
struct FilenameMatch {
  Sns sns = Sns::kFacebook;
  std::optional<std::string> image_id;
  std::optional<CalendarDate> date;
  std::optional<std::string> resolution_hint;
  std::optional<std::string> lookup_url;
  Specificity specificity = Specificity::kStrong;
};

// Reconstructs the public URL where the platform serves the image, for the
// platforms whose URL scheme needs only the image id.
inline std::optional<std::string> lookup_url(Sns sns,
                                             const std::string& image_id) {
  if (image_id.empty()) return std::nullopt;
  switch (sns) {
    case Sns::kTwitter: return "https://pbs.twimg.com/media/" + image_id;
    case Sns::kImgur: return "http://imgur.com/" + image_id;
    default: return std::nullopt;
  }
}

// Platforms that embed an id but serve images only through their public API;
// returns the hint shown next to the extracted id.
inline std::optional<std::string> lookup_note(Sns sns) {
  switch (sns) {
    case Sns::kFacebook:
      return "lookup requires the platform public API (Graph)";
    case Sns::kFlickr:
    case Sns::kTumblr:
    case Sns::kInstagram:
      return "lookup requires the platform public API";
    default: return std::nullopt;
  }
}

namespace filename_detail {

inline std::optional<CalendarDate> parse_compact_date(const std::string& text) {
  if (text.size() != 8) return std::nullopt;
  const int year = std::stoi(text.substr(0, 4));
  const int month = std::stoi(text.substr(4, 2));
  const int day = std::stoi(text.substr(6, 2));
  if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
  return CalendarDate{year, month, day};
}

inline std::string flickr_hint(const std::string& letter) {
  // Only the 1600px suffix is documented; other letters pass through as-is.
  if (letter == "h") return "h=1600";
  return letter;
}

}  // namespace filename_detail

// Tests a filename against every platform's renaming pattern and returns all
// matches, in platform order. Total over arbitrary strings.
inline std::vector<FilenameMatch> match_filename(const std::string& name,
                                                 const ProfileSet& profiles) {
  std::vector<FilenameMatch> matches;
  for (const PlatformProfile& profile : profiles.all()) {
    if (!profile.rename) continue;
    std::smatch groups;
    if (!std::regex_match(name, groups, profile.rename->compiled)) continue;

    FilenameMatch match;
    match.sns = profile.sns;
    match.specificity = profile.rename->specificity;
    const auto group_text =
        [&groups](int index) -> std::optional<std::string> {
      if (index <= 0 || index >= static_cast<int>(groups.size())) {
        return std::nullopt;
      }
      if (!groups[static_cast<std::size_t>(index)].matched) {
        return std::nullopt;
      }
      return groups[static_cast<std::size_t>(index)].str();
    };

    if (const auto id = group_text(profile.rename->id_group)) {
      match.image_id = *id;
      match.lookup_url = lookup_url(profile.sns, *id);
    }
    if (const auto hint = group_text(profile.rename->hint_group)) {
      match.resolution_hint = profile.sns == Sns::kFlickr
                                  ? filename_detail::flickr_hint(*hint)
                                  : *hint;
    }
    if (const auto date_text = group_text(profile.rename->date_group)) {
      const std::optional<CalendarDate> date =
          filename_detail::parse_compact_date(*date_text);
      if (!date) continue;  // shape matched but the date is impossible
      match.date = date;
    }
    matches.push_back(std::move(match));
  }
  return matches;
}

}  // namespace ballistics

#endif  // BALLISTICS_FILENAME_HEURISTICS_HPP_
