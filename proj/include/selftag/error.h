// Copyright 2026 The selftag Authors. All Rights Reserved.
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

#ifndef SELFTAG_ERROR_H_
#define SELFTAG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace selftag {

// Every failure the library reports carries one of these codes. The CLI maps
// the code's category (the hundreds digit) onto its process exit status.
enum class ErrorCode {
  // corpus: 1xx
  kMalformedLine = 101,
  kUnknownLabel = 102,
  kInvalidBioTransition = 103,
  kEmptyCorpus = 104,
  kNotBioScheme = 105,
  kRatioSumInvalid = 106,
  kTooFewSentences = 107,
  kSchemeMismatch = 108,
  kInvalidScheme = 109,
  // tagger: 2xx
  kNonFiniteScore = 201,
  kUnlabeledSentenceInBatch = 202,
  kEmptyTrainingSet = 203,
  kModelFormat = 204,
  kInvalidTemplate = 205,
  // selection / self-training: 3xx
  kEmptyPrediction = 301,
  kInvalidPolicy = 302,
  kEmptyLabeledSet = 303,
  kInvalidConfig = 304,
  // eval: 4xx
  kLengthMismatch = 401,
  kUnmappedLabel = 402,
  kDivisionByZeroBase = 403,
  // harness: 5xx
  kSpecInvalid = 501,
  kUnequalPoolSizes = 502,
  kReportSchema = 503,
  kIo = 504,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

  // 1..5, used as the process exit status by the command line tool.
  int category() const { return static_cast<int>(code_) / 100; }

 private:
  ErrorCode code_;
};

}  // namespace selftag

#endif  // SELFTAG_ERROR_H_
