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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace radperc {

__extension__ typedef unsigned __int128 uint128;

inline constexpr size_t words_for_bits(size_t n) {
    return (n + 63) / 64;
}

/// Fixed-width, word-packed bit vector. Bits past `size()` in the last word are always zero.
class BitVector {
   public:
    BitVector() = default;
    explicit BitVector(size_t num_bits) : num_bits_(num_bits), words_(words_for_bits(num_bits), 0) {
    }

    static BitVector from_indices(size_t num_bits, std::span<const size_t> indices);
    /// Parses a string over {0,1}, bit 0 leftmost.
    static BitVector from_string(const std::string &bits);

    size_t size() const {
        return num_bits_;
    }
    size_t num_words() const {
        return words_.size();
    }

    bool get(size_t k) const {
        return (words_[k >> 6] >> (k & 63)) & 1;
    }
    void set(size_t k, bool value = true) {
        uint64_t m = uint64_t{1} << (k & 63);
        if (value) {
            words_[k >> 6] |= m;
        } else {
            words_[k >> 6] &= ~m;
        }
    }
    void flip(size_t k) {
        words_[k >> 6] ^= uint64_t{1} << (k & 63);
    }
    void clear();

    size_t popcount() const;
    bool none() const;
    bool any() const {
        return !none();
    }

    /// Calls `fn(index)` for every set bit in increasing order.
    template <typename Fn>
    void for_each_set(Fn &&fn) const {
        for (size_t w = 0; w < words_.size(); w++) {
            uint64_t v = words_[w];
            while (v) {
                fn((w << 6) + static_cast<size_t>(std::countr_zero(v)));
                v &= v - 1;
            }
        }
    }

    std::vector<size_t> indices() const;

    BitVector &operator|=(const BitVector &other);
    BitVector &operator&=(const BitVector &other);
    BitVector &operator^=(const BitVector &other);
    BitVector operator~() const;
    friend BitVector operator|(BitVector a, const BitVector &b) {
        return a |= b;
    }
    friend BitVector operator&(BitVector a, const BitVector &b) {
        return a &= b;
    }
    friend BitVector operator^(BitVector a, const BitVector &b) {
        return a ^= b;
    }
    bool operator==(const BitVector &other) const = default;

    std::span<uint64_t> words() {
        return words_;
    }
    std::span<const uint64_t> words() const {
        return words_;
    }

    std::string str() const;

   private:
    void mask_tail();

    size_t num_bits_ = 0;
    std::vector<uint64_t> words_;
};

namespace gf2 {

/// Rank over GF(2) of `num_rows` rows of `row_words` words each, stored contiguously.
/// The buffer is destroyed (row reduced in place).
size_t rank_in_place(std::span<uint64_t> rows, size_t num_rows, size_t row_words);

/// Rank of a list of equal-length bit vectors.
size_t rank(std::span<const BitVector> rows);

}  // namespace gf2

}  // namespace radperc
