// Copyright 2026 The ffsim Authors
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

#include "ffsim/error.hpp"

namespace ffsim {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotPSD: return "NotPSD";
        case ErrorKind::NotUnitary: return "NotUnitary";
        case ErrorKind::DimensionOverflow: return "DimensionOverflow";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::InvalidGate: return "InvalidGate";
        case ErrorKind::MixedModel: return "MixedModel";
        case ErrorKind::OverlappingControl: return "OverlappingControl";
        case ErrorKind::InvalidQuantumNumbers: return "InvalidQuantumNumbers";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::NotPermutationInvariant: return "NotPermutationInvariant";
        case ErrorKind::EncodingOverflow: return "EncodingOverflow";
        case ErrorKind::BlockTooLarge: return "BlockTooLarge";
        case ErrorKind::ToleranceUnachievable: return "ToleranceUnachievable";
        case ErrorKind::UnknownLabel: return "UnknownLabel";
        case ErrorKind::NotFrustrationFree: return "NotFrustrationFree";
        case ErrorKind::NonPositiveInput: return "NonPositiveInput";
        case ErrorKind::RegisterOverflow: return "RegisterOverflow";
        case ErrorKind::StateNotLowEnergy: return "StateNotLowEnergy";
        case ErrorKind::PrecisionOverflow: return "PrecisionOverflow";
        case ErrorKind::InfeasibleParameters: return "InfeasibleParameters";
        case ErrorKind::AlreadyDiagonal: return "AlreadyDiagonal";
        case ErrorKind::ConvergenceStall: return "ConvergenceStall";
        case ErrorKind::InvalidC: return "InvalidC";
        case ErrorKind::HorizonExceeded: return "HorizonExceeded";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
        case ErrorKind::PipelineFailure: return "PipelineFailure";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& message)
    : std::runtime_error(module + ": " + std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      module_(std::move(module)) {}

}  // namespace ffsim
