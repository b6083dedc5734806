// Copyright 2026 The tdesign Authors
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

namespace tdesign {

/// Operand shapes do not line up (wrong dimension, bad tensor factorization).
class DimensionError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Input that must be Hermitian is asymmetric beyond tolerance.
class NotHermitianError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A configured size cap would be exceeded.
class CapError : public std::length_error {
   public:
    using std::length_error::length_error;
};

/// Malformed configuration, ensemble file, or argument.
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// An input expected to be a quantum channel is not CP or not trace preserving.
class NotAChannelError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative solver hit its iteration cap. Carries the best bounds seen.
class ConvergenceError : public std::runtime_error {
   public:
    ConvergenceError(const std::string &what, double lower, double upper)
        : std::runtime_error(what), lower_bound(lower), upper_bound(upper) {}

    double lower_bound;
    double upper_bound;
};

}  // namespace tdesign
