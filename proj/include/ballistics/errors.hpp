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

#ifndef BALLISTICS_ERRORS_HPP_
#define BALLISTICS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ballistics {

// Root of every typed error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

#define BALLISTICS_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& message)                            \
        : Error(std::string(#Name) + ": " + message) {}                  \
  }

// JPEG structure parsing.
BALLISTICS_DEFINE_ERROR(MalformedJpeg);
BALLISTICS_DEFINE_ERROR(NoFrameHeader);
BALLISTICS_DEFINE_ERROR(NoQuantTable);

// EXIF parsing.
BALLISTICS_DEFINE_ERROR(NotExif);
BALLISTICS_DEFINE_ERROR(MalformedTiff);

// Reference dataset and persistence.
BALLISTICS_DEFINE_ERROR(EmptyDataset);
BALLISTICS_DEFINE_ERROR(ManifestError);
BALLISTICS_DEFINE_ERROR(FormatError);
BALLISTICS_DEFINE_ERROR(IoError);
BALLISTICS_DEFINE_ERROR(ZeroVector);

// Classification engine.
BALLISTICS_DEFINE_ERROR(BadParams);
BALLISTICS_DEFINE_ERROR(EmptySamples);
BALLISTICS_DEFINE_ERROR(UnknownProfile);
BALLISTICS_DEFINE_ERROR(TooFewSamples);

// Platform profiles and simulation.
BALLISTICS_DEFINE_ERROR(ProfileError);
BALLISTICS_DEFINE_ERROR(DecodeError);

#undef BALLISTICS_DEFINE_ERROR

}  // namespace ballistics

#endif  // BALLISTICS_ERRORS_HPP_
