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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ffsim {

enum class ErrorKind {
    NotHermitian,
    NotPSD,
    NotUnitary,
    DimensionOverflow,
    DimensionMismatch,
    InvalidGate,
    MixedModel,
    OverlappingControl,
    InvalidQuantumNumbers,
    OutOfRange,
    NotPermutationInvariant,
    EncodingOverflow,
    BlockTooLarge,
    ToleranceUnachievable,
    UnknownLabel,
    NotFrustrationFree,
    NonPositiveInput,
    RegisterOverflow,
    StateNotLowEnergy,
    PrecisionOverflow,
    InfeasibleParameters,
    AlreadyDiagonal,
    ConvergenceStall,
    InvalidC,
    HorizonExceeded,
    ConfigInvalid,
    PipelineFailure,
    ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying the originating module and a machine-checkable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorKind kind_;
    std::string module_;
};

}  // namespace ffsim
