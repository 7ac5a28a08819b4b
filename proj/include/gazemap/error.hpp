/*
 * Copyright (C) 2026 The gazemap Authors
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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gazemap {

// Numeric values are part of the C ABI (gzm_status mirrors them); append only.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kIoError = 2,
  kUnsortedEvents = 3,
  kNonPositiveDuration = 4,
  kDurationBeforeLastEvent = 5,
  kBadPath = 6,
  kMalformedLine = 7,
  kMissingField = 8,
  kMissingHeader = 9,
  kBadValue = 10,
  kRootNotFound = 11,
  kUnknownFile = 12,
  kLineOutOfRange = 13,
  kEmptyGroup = 14,
  kEmptyInput = 15,
  kEmptySequence = 16,
  kUnclassifiedPath = 17,
  kBothEmpty = 18,
  kEmptySample = 19,
  kAllZeroDifferences = 20,
  kDegenerateVariance = 21,
  kBadM = 22,
  kWeightSumInvalid = 23,
  kRatingOutOfRange = 24,
  kUnsupportedVersion = 25,
  kSchemaError = 26,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Every failure in the library is reported through this exception. `index`
// carries the first offending event index or the 1-based input line number,
// depending on the code; `subject` carries a path, field name or JSON pointer.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message,
        std::optional<std::int64_t> index = std::nullopt,
        std::string subject = {});

  ErrorCode code() const noexcept { return code_; }
  const std::optional<std::int64_t>& index() const noexcept { return index_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::optional<std::int64_t> index_;
  std::string subject_;
};

}  // namespace gazemap
