/*
 * Copyright 2026 The eznav Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EZNAV_ERROR_HPP_
#define EZNAV_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace eznav {

enum class ErrorCode {
  kNonDyadic,
  kIndivisible,
  kOutOfRange,
  kShapeMismatch,
  kOutOfBounds,
  kEmptyGrid,
  kNonMonotonicTime,
  kEmptyWindow,
  kNoFrontiers,
  kEmptyTrials,
  kInvalidConfig,
  kMalformedFile,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is reported through this type so
// callers (the CLI in particular) can map codes onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        detail_(what) {}

  ErrorCode code() const { return code_; }
  // The message without the code prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace eznav

#endif  // EZNAV_ERROR_HPP_
