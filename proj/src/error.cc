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

#include "selftag/error.h"

namespace selftag {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kInvalidBioTransition: return "InvalidBioTransition";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kNotBioScheme: return "NotBioScheme";
    case ErrorCode::kRatioSumInvalid: return "RatioSumInvalid";
    case ErrorCode::kTooFewSentences: return "TooFewSentences";
    case ErrorCode::kSchemeMismatch: return "SchemeMismatch";
    case ErrorCode::kInvalidScheme: return "InvalidScheme";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kUnlabeledSentenceInBatch: return "UnlabeledSentenceInBatch";
    case ErrorCode::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::kModelFormat: return "ModelFormat";
    case ErrorCode::kInvalidTemplate: return "InvalidTemplate";
    case ErrorCode::kEmptyPrediction: return "EmptyPrediction";
    case ErrorCode::kInvalidPolicy: return "InvalidPolicy";
    case ErrorCode::kEmptyLabeledSet: return "EmptyLabeledSet";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kUnmappedLabel: return "UnmappedLabel";
    case ErrorCode::kDivisionByZeroBase: return "DivisionByZeroBase";
    case ErrorCode::kSpecInvalid: return "SpecInvalid";
    case ErrorCode::kUnequalPoolSizes: return "UnequalPoolSizes";
    case ErrorCode::kReportSchema: return "ReportSchema";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace selftag
