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

#include "eznav/error.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

#include "eznav/log.hpp"

namespace eznav {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonDyadic: return "NonDyadic";
    case ErrorCode::kIndivisible: return "Indivisible";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
    case ErrorCode::kNonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::kEmptyWindow: return "EmptyWindow";
    case ErrorCode::kNoFrontiers: return "NoFrontiers";
    case ErrorCode::kEmptyTrials: return "EmptyTrials";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kMalformedFile: return "MalformedFile";
  }
  return "Unknown";
}

namespace log {
namespace {

Level parse_env() {
  const char* env = std::getenv("EZNAV_LOG");
  if (env == nullptr) return Level::kWarn;
  const std::string v(env);
  if (v == "error") return Level::kError;
  if (v == "info") return Level::kInfo;
  if (v == "debug") return Level::kDebug;
  return Level::kWarn;
}

std::atomic<int>& threshold_storage() {
  static std::atomic<int> value{static_cast<int>(parse_env())};
  return value;
}

constexpr const char* kNames[] = {"error", "warn", "info", "debug"};

}  // namespace

Level threshold() { return static_cast<Level>(threshold_storage().load()); }

void set_threshold(Level level) {
  threshold_storage().store(static_cast<int>(level));
}

void write(Level level, std::string_view message) {
  if (static_cast<int>(level) > threshold_storage().load()) return;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[eznav " << kNames[static_cast<int>(level)] << "] " << message
            << '\n';
}

}  // namespace log
}  // namespace eznav
