// Copyright 2026 The purity-vqa Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace pvqa {

// Failure categories surfaced by the library. Every throw site uses Error with
// one of these codes so callers can branch without parsing messages.
enum class ErrorCode {
  DimMismatch,
  NotNormalized,
  NonInvertible,
  AlphaOutOfRange,
  InvalidShots,
  ComplexTraceProduct,
  DegenerateDenominator,
  RankTooLow,
  NonOrthonormalBasis,
  MuOutOfRange,
  ParamOutOfRange,
  InvalidFraction,
  AllProbesFailed,
  FitDiverged,
  DeltaTooLarge,
  NeighborhoodTooLarge,
  ConfigInvalid,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::InvalidShots: return "InvalidShots";
    case ErrorCode::ComplexTraceProduct: return "ComplexTraceProduct";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::RankTooLow: return "RankTooLow";
    case ErrorCode::NonOrthonormalBasis: return "NonOrthonormalBasis";
    case ErrorCode::MuOutOfRange: return "MuOutOfRange";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::InvalidFraction: return "InvalidFraction";
    case ErrorCode::AllProbesFailed: return "AllProbesFailed";
    case ErrorCode::FitDiverged: return "FitDiverged";
    case ErrorCode::DeltaTooLarge: return "DeltaTooLarge";
    case ErrorCode::NeighborhoodTooLarge: return "NeighborhoodTooLarge";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace pvqa
