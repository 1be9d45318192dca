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

#include "radperc/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace radperc {

char to_char(PauliLetter p) {
    static constexpr char table[4] = {'I', 'X', 'Z', 'Y'};
    return table[static_cast<uint8_t>(p) & 3];
}

PauliLetter pauli_letter_from_char(char c) {
    switch (c) {
        case 'I':
        case '_':
            return PauliLetter::I;
        case 'X':
            return PauliLetter::X;
        case 'Y':
            return PauliLetter::Y;
        case 'Z':
            return PauliLetter::Z;
        default:
            throw std::invalid_argument(std::string("not a Pauli letter: '") + c + "'");
    }
}

PauliString::PauliString(BitVector xs, BitVector zs) : xs_(std::move(xs)), zs_(std::move(zs)) {
    if (xs_.size() != zs_.size()) {
        throw std::invalid_argument("x and z bit vectors must have equal width");
    }
}

PauliString PauliString::from_string(const std::string &text) {
    PauliString result(text.size());
    for (size_t k = 0; k < text.size(); k++) {
        result.set_raw(k, static_cast<uint8_t>(pauli_letter_from_char(text[k])));
    }
    return result;
}

PauliString PauliString::single(size_t n, size_t site, PauliLetter p) {
    PauliString result(n);
    result.set_content(site, p);
    return result;
}

PauliLetter PauliString::content_at(size_t site) const {
    if (site >= size()) {
        throw std::out_of_range("site " + std::to_string(site) + " outside register of width " +
                                std::to_string(size()));
    }
    return static_cast<PauliLetter>(raw_at(site));
}

void PauliString::set_content(size_t site, PauliLetter p) {
    if (site >= size()) {
        throw std::out_of_range("site " + std::to_string(site) + " outside register of width " +
                                std::to_string(size()));
    }
    set_raw(site, static_cast<uint8_t>(p));
}

BitVector PauliString::support_mask(const BitVector &region) const {
    BitVector result = support();
    result &= region;
    return result;
}

PauliString &PauliString::operator*=(const PauliString &other) {
    xs_ ^= other.xs_;
    zs_ ^= other.zs_;
    return *this;
}

std::string PauliString::str() const {
    std::string out(size(), 'I');
    for (size_t k = 0; k < size(); k++) {
        out[k] = to_char(static_cast<PauliLetter>(raw_at(k)));
    }
    return out;
}

PauliString multiply(const PauliString &a, const PauliString &b) {
    return a * b;
}

bool commutes(const PauliString &a, const PauliString &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("commutes: width mismatch");
    }
    auto ax = a.xs().words();
    auto az = a.zs().words();
    auto bx = b.xs().words();
    auto bz = b.zs().words();
    uint64_t acc = 0;
    for (size_t w = 0; w < ax.size(); w++) {
        acc ^= (ax[w] & bz[w]) ^ (az[w] & bx[w]);
    }
    return (std::popcount(acc) & 1) == 0;
}

}  // namespace radperc
