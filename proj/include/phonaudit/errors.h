// Copyright 2026 The Phonaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PHONAUDIT_ERRORS_H_
#define PHONAUDIT_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace phonaudit {

enum class ErrorCode {
  kEmptyTranscript,
  kMalformedInput,
  kInvalidReplacementMap,
  kEmptyGold,
  kPhoneNotFound,
  kEmptyScoreList,
  kDomainError,
  kInsufficientAnnotations,
  kMismatchedItems,
  kMissingPredictions,
  kInsufficientUtterances,
  kUnknownTask,
  kDuplicateRecord,
  kSessionComplete,
  kInvalidChoice,
  kStaleSession,
  kNotFound,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All recoverable failures in the toolkit surface as this exception; callers
// dispatch on code() rather than on the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyTranscript: return "EmptyTranscript";
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kInvalidReplacementMap: return "InvalidReplacementMap";
    case ErrorCode::kEmptyGold: return "EmptyGold";
    case ErrorCode::kPhoneNotFound: return "PhoneNotFound";
    case ErrorCode::kEmptyScoreList: return "EmptyScoreList";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kInsufficientAnnotations: return "InsufficientAnnotations";
    case ErrorCode::kMismatchedItems: return "MismatchedItems";
    case ErrorCode::kMissingPredictions: return "MissingPredictions";
    case ErrorCode::kInsufficientUtterances: return "InsufficientUtterances";
    case ErrorCode::kUnknownTask: return "UnknownTask";
    case ErrorCode::kDuplicateRecord: return "DuplicateRecord";
    case ErrorCode::kSessionComplete: return "SessionComplete";
    case ErrorCode::kInvalidChoice: return "InvalidChoice";
    case ErrorCode::kStaleSession: return "StaleSession";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace phonaudit

#endif  // PHONAUDIT_ERRORS_H_
