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

// Command-line front end.
//
// Exit codes:
//   0  success (perceive: target visible)
//   1  malformed input file, invalid config or bad usage
//   2  score-grid layout mismatch
//   3  perceive: target not visible
//   4  episode: target not reached

#ifndef EZNAV_CLI_HPP_
#define EZNAV_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace eznav::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitLayout = 2;
inline constexpr int kExitNotVisible = 3;
inline constexpr int kExitNotReached = 4;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace eznav::cli

#endif  // EZNAV_CLI_HPP_
