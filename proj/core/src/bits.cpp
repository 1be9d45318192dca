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

#include "radperc/bits.hpp"

#include <algorithm>
#include <stdexcept>

namespace radperc {

BitVector BitVector::from_indices(size_t num_bits, std::span<const size_t> indices) {
    BitVector result(num_bits);
    for (size_t k : indices) {
        if (k >= num_bits) {
            throw std::out_of_range("bit index " + std::to_string(k) + " >= width " + std::to_string(num_bits));
        }
        result.set(k);
    }
    return result;
}

BitVector BitVector::from_string(const std::string &bits) {
    BitVector result(bits.size());
    for (size_t k = 0; k < bits.size(); k++) {
        if (bits[k] == '1') {
            result.set(k);
        } else if (bits[k] != '0') {
            throw std::invalid_argument("bit string may only contain '0' and '1': " + bits);
        }
    }
    return result;
}

void BitVector::clear() {
    std::fill(words_.begin(), words_.end(), 0);
}

size_t BitVector::popcount() const {
    size_t total = 0;
    for (uint64_t w : words_) {
        total += static_cast<size_t>(std::popcount(w));
    }
    return total;
}

bool BitVector::none() const {
    return std::all_of(words_.begin(), words_.end(), [](uint64_t w) { return w == 0; });
}

std::vector<size_t> BitVector::indices() const {
    std::vector<size_t> out;
    for_each_set([&](size_t k) { out.push_back(k); });
    return out;
}

static void check_same_width(size_t a, size_t b) {
    if (a != b) {
        throw std::invalid_argument("bit vector width mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

BitVector &BitVector::operator|=(const BitVector &other) {
    check_same_width(num_bits_, other.num_bits_);
    for (size_t w = 0; w < words_.size(); w++) {
        words_[w] |= other.words_[w];
    }
    return *this;
}

BitVector &BitVector::operator&=(const BitVector &other) {
    check_same_width(num_bits_, other.num_bits_);
    for (size_t w = 0; w < words_.size(); w++) {
        words_[w] &= other.words_[w];
    }
    return *this;
}

BitVector &BitVector::operator^=(const BitVector &other) {
    check_same_width(num_bits_, other.num_bits_);
    for (size_t w = 0; w < words_.size(); w++) {
        words_[w] ^= other.words_[w];
    }
    return *this;
}

BitVector BitVector::operator~() const {
    BitVector result(*this);
    for (auto &w : result.words_) {
        w = ~w;
    }
    result.mask_tail();
    return result;
}

void BitVector::mask_tail() {
    size_t r = num_bits_ & 63;
    if (r && !words_.empty()) {
        words_.back() &= (uint64_t{1} << r) - 1;
    }
}

std::string BitVector::str() const {
    std::string out(num_bits_, '0');
    for_each_set([&](size_t k) { out[k] = '1'; });
    return out;
}

namespace gf2 {

size_t rank_in_place(std::span<uint64_t> rows, size_t num_rows, size_t row_words) {
    size_t rank = 0;
    for (size_t w = 0; w < row_words && rank < num_rows; w++) {
        // Each pass picks pivots inside word `w`, lowest bit first.
        while (rank < num_rows) {
            size_t pivot_row = num_rows;
            uint64_t best_bit = 0;
            for (size_t r = rank; r < num_rows; r++) {
                uint64_t v = rows[r * row_words + w];
                if (v) {
                    uint64_t low = v & (~v + 1);
                    if (pivot_row == num_rows || low < best_bit) {
                        pivot_row = r;
                        best_bit = low;
                        if (low == 1) {
                            break;
                        }
                    }
                }
            }
            if (pivot_row == num_rows) {
                break;
            }
            if (pivot_row != rank) {
                std::swap_ranges(rows.begin() + pivot_row * row_words, rows.begin() + (pivot_row + 1) * row_words,
                                 rows.begin() + rank * row_words);
            }
            const uint64_t *p = &rows[rank * row_words];
            for (size_t r = rank + 1; r < num_rows; r++) {
                uint64_t *q = &rows[r * row_words];
                if (q[w] & best_bit) {
                    for (size_t k = w; k < row_words; k++) {
                        q[k] ^= p[k];
                    }
                }
            }
            rank++;
        }
    }
    return rank;
}

size_t rank(std::span<const BitVector> rows) {
    if (rows.empty()) {
        return 0;
    }
    size_t row_words = rows[0].num_words();
    std::vector<uint64_t> buf;
    buf.reserve(rows.size() * row_words);
    for (const auto &r : rows) {
        check_same_width(r.size(), rows[0].size());
        buf.insert(buf.end(), r.words().begin(), r.words().end());
    }
    return rank_in_place(buf, rows.size(), row_words);
}

}  // namespace gf2

}  // namespace radperc
