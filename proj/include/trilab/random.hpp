/*
 * Copyright 2026 The trilab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace trilab {

/// Philox4x32-10 block function (Salmon et al., SC'11). Maps a 128-bit
/// counter and 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finalizer; used to spread seeds into keys.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Independent families of substreams drawn from one master seed.
enum class StreamPurpose : std::uint64_t {
    Replication = 0,
    Lindeberg = 1,
    HsuRobbins = 2,
    Rosenthal = 3,
    Auxiliary = 4,
};

/// Counter-based random stream. A stream is addressed by (key, substream);
/// the block counter advances as bits are consumed, so any two addresses
/// give non-overlapping sequences and no state is shared between streams.
///
/// Satisfies UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t key, std::uint64_t substream) noexcept;

    /// Stream for replication `index` of an experiment seeded by `master_seed`.
    static RandomStream derive(std::uint64_t master_seed, StreamPurpose purpose,
                               std::uint64_t index, std::uint64_t salt = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_pos() noexcept { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

    /// Standard normal by the Marsaglia polar method; the paired variate is
    /// discarded so each call is one self-contained draw.
    double normal() noexcept;

    /// Number of distribution-level variates taken from this stream
    /// (incremented by `sample`, not by raw bit consumption).
    std::uint64_t variates() const noexcept { return variates_; }
    void tally(std::uint64_t count = 1) noexcept { variates_ += count; }

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::uint64_t substream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int cursor_ = 4;
    std::uint64_t variates_ = 0;
};

}  // namespace trilab
