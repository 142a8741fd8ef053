// Copyright 2026 The q3haar Authors
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

/// \file random.hpp
/// Counter-based splittable random streams.
///
/// Output k of stream (seed, stream_id) is
///
///   mix64(key + k * 0x9E3779B97F4A7C15),  key = mix64(mix64(seed) ^ mix64(stream_id + G))
///
/// where mix64 is the SplitMix64 finalizer (Stafford variant 13) and G is the
/// golden-ratio increment. Only 64-bit integer arithmetic is involved, so the
/// integer sequence is identical on every platform. Doubles are formed from the
/// top 53 bits. Substreams for batch item i use stream id mix64(stream_id ^ i).

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "q3haar/statevec.hpp"

namespace q3haar {

class RandomStream {
 public:
    using result_type = std::uint64_t;

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    RandomStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id), key_(mix64(mix64(seed) ^ mix64(stream_id + kGolden))) {}

    explicit RandomStream(std::uint64_t seed) : RandomStream(seed, 0) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }
    std::uint64_t counter() const { return counter_; }

    /// Deterministic child stream for batch item `index`.
    RandomStream substream(std::uint64_t index) const {
        return RandomStream(seed_, mix64(stream_ ^ mix64(index + 1)));
    }

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

    // UniformRandomBitGenerator
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next_u64(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Pair of independent standard normals (Box-Muller).
    std::pair<double, double> normal_pair() {
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double t = 2.0 * kPi * uniform();
        return {r * std::cos(t), r * std::sin(t)};
    }

 private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace q3haar
