// Copyright 2026 The radperc Authors
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

#include <array>
#include <cstdint>
#include <limits>

namespace radperc {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Pure function of (counter, key).
std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key);

/// Independent random stream addressed by (seed, stream id).
///
/// The seed is the Philox key; the stream id occupies the upper half of the counter and the
/// lower half counts blocks. Streams never overlap and can be created in any order, so a
/// trajectory's randomness depends only on its index.
class RandomStream {
   public:
    using result_type = uint64_t;

    RandomStream(uint64_t seed, uint64_t stream_id);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<uint64_t>::max();
    }

    uint64_t operator()() {
        if (pos_ == 2) {
            refill();
        }
        return buffer_[pos_++];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }
    bool bernoulli(double p) {
        return uniform() < p;
    }
    /// Uniform integer in [0, n), n > 0. Unbiased.
    uint64_t below(uint64_t n);

    uint64_t seed() const {
        return seed_;
    }
    uint64_t stream_id() const {
        return stream_id_;
    }

   private:
    void refill();

    uint64_t seed_;
    uint64_t stream_id_;
    uint64_t block_ = 0;
    std::array<uint64_t, 2> buffer_{};
    int pos_ = 2;
};

/// Stream ids for distinct consumers of the same seed. The top byte tags the consumer so that
/// e.g. the decoder's stabilizer runs and its particle-process runs never share randomness.
enum class StreamDomain : uint64_t { trajectory = 0, stabilizer = 1, particle_block = 2, test = 0xff };

inline uint64_t stream_id(StreamDomain domain, uint64_t index) {
    return (static_cast<uint64_t>(domain) << 56) ^ index;
}

}  // namespace radperc
