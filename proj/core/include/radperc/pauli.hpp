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

#include <cstdint>
#include <string>

#include "radperc/bits.hpp"

namespace radperc {

/// Single-site Pauli content. Bit 0 is the X component, bit 1 the Z component.
enum class PauliLetter : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

char to_char(PauliLetter p);
PauliLetter pauli_letter_from_char(char c);

/// A Pauli operator over a register of `n` tracked sites, modulo phase.
///
/// Content at a site decodes as (x,z): (0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y.
/// Products are bitwise XOR; signs are deliberately not represented.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(size_t n) : xs_(n), zs_(n) {
    }
    PauliString(BitVector xs, BitVector zs);

    /// Parses text such as "XIYZ" (site 0 leftmost). '_' is accepted as I.
    static PauliString from_string(const std::string &text);
    static PauliString single(size_t n, size_t site, PauliLetter p);

    size_t size() const {
        return xs_.size();
    }

    PauliLetter content_at(size_t site) const;
    void set_content(size_t site, PauliLetter p);
    /// Reads the content at `site` without range checking.
    uint8_t raw_at(size_t site) const {
        return static_cast<uint8_t>(xs_.get(site) | (zs_.get(site) << 1));
    }
    void set_raw(size_t site, uint8_t bits) {
        xs_.set(site, bits & 1);
        zs_.set(site, (bits >> 1) & 1);
    }

    /// Sites with non-identity content.
    BitVector support() const {
        return xs_ | zs_;
    }
    /// Support restricted to `region` (a mask over the register).
    BitVector support_mask(const BitVector &region) const;
    bool is_trivial_on(const BitVector &region) const {
        return support_mask(region).none();
    }
    bool is_identity() const {
        return xs_.none() && zs_.none();
    }
    size_t weight() const {
        return support().popcount();
    }

    PauliString &operator*=(const PauliString &other);
    friend PauliString operator*(PauliString a, const PauliString &b) {
        return a *= b;
    }
    bool operator==(const PauliString &other) const = default;

    BitVector &xs() {
        return xs_;
    }
    BitVector &zs() {
        return zs_;
    }
    const BitVector &xs() const {
        return xs_;
    }
    const BitVector &zs() const {
        return zs_;
    }

    std::string str() const;

   private:
    BitVector xs_;
    BitVector zs_;
};

PauliString multiply(const PauliString &a, const PauliString &b);

/// True iff the symplectic form a.x·b.z + a.z·b.x vanishes over GF(2).
bool commutes(const PauliString &a, const PauliString &b);

}  // namespace radperc
