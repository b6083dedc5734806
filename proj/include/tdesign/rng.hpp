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

#include <complex>
#include <cstdint>
#include <random>

namespace tdesign {

/// Mixes a 64-bit value (SplitMix64 finalizer). Used to derive independent
/// streams from (seed, counter) pairs.
std::uint64_t mix64(std::uint64_t x);

/// Explicit, seedable random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniform and normal variates are produced here rather than by
/// the <random> distributions so that draws are identical across standard
/// library implementations.
class Rng {
   public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Standard normal (Box-Muller, cached pair).
    double normal();
    /// Standard complex normal: (x + iy) / sqrt(2), so E|z|^2 = 1.
    std::complex<double> complex_normal();

    /// A new stream keyed by (this stream's seed, stream id). Does not
    /// advance this stream.
    Rng derive(std::uint64_t stream_id) const;

    std::uint64_t seed() const { return seed_; }

   private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace tdesign
