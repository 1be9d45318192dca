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

#include "radperc/rng.hpp"

#include "radperc/bits.hpp"

namespace radperc {

namespace {

constexpr uint32_t kMul0 = 0xD2511F53;
constexpr uint32_t kMul1 = 0xCD9E8D57;
constexpr uint32_t kWeyl0 = 0x9E3779B9;
constexpr uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t &hi, uint32_t &lo) {
    uint64_t prod = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(prod >> 32);
    lo = static_cast<uint32_t>(prod);
}

inline void round(std::array<uint32_t, 4> &ctr, const std::array<uint32_t, 2> &key) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key) {
    round(counter, key);
    for (int r = 1; r < 10; r++) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
        round(counter, key);
    }
    return counter;
}

RandomStream::RandomStream(uint64_t seed, uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
}

void RandomStream::refill() {
    std::array<uint32_t, 4> ctr = {static_cast<uint32_t>(block_), static_cast<uint32_t>(block_ >> 32),
                                   static_cast<uint32_t>(stream_id_), static_cast<uint32_t>(stream_id_ >> 32)};
    std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed_), static_cast<uint32_t>(seed_ >> 32)};
    auto out = philox4x32_10(ctr, key);
    buffer_[0] = static_cast<uint64_t>(out[0]) | (static_cast<uint64_t>(out[1]) << 32);
    buffer_[1] = static_cast<uint64_t>(out[2]) | (static_cast<uint64_t>(out[3]) << 32);
    block_++;
    pos_ = 0;
}

uint64_t RandomStream::below(uint64_t n) {
    // Lemire's nearly divisionless bounded sampling.
    uint64_t x = (*this)();
    uint128 m = static_cast<uint128>(x) * n;
    uint64_t low = static_cast<uint64_t>(m);
    if (low < n) {
        uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            x = (*this)();
            m = static_cast<uint128>(x) * n;
            low = static_cast<uint64_t>(m);
        }
    }
    return static_cast<uint64_t>(m >> 64);
}

}  // namespace radperc
