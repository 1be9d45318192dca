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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "radperc/bits.hpp"

namespace radperc {

/// Brick-wall layer parity. Even layers pair (2m, 2m+1); odd layers pair (2m+1, 2m+2 mod N).
enum class Parity : uint8_t { even = 0, odd = 1 };

inline Parity parity_of_layer(size_t layer) {
    return (layer & 1) ? Parity::odd : Parity::even;
}
inline Parity flip(Parity p) {
    return p == Parity::even ? Parity::odd : Parity::even;
}

inline void require_even_ring(size_t n) {
    if (n < 2 || (n & 1)) {
        throw std::invalid_argument("system size must be even and >= 2, got " + std::to_string(n));
    }
}

/// Right partner of the pair whose left site is `left`.
inline size_t pair_right(size_t left, size_t n) {
    return left + 1 == n ? 0 : left + 1;
}

/// Left sites of gate pairs of the given parity that have at least one occupied input.
BitVector active_pair_lefts(const BitVector &occupied, Parity parity);

/// Minimal-image signed displacement of `x` from `origin` on a ring of `n` sites, in [-n/2, n/2).
inline int64_t signed_displacement(size_t x, size_t origin, size_t n) {
    int64_t d = static_cast<int64_t>((x + n - origin % n) % n);
    if (d >= static_cast<int64_t>(n / 2)) {
        d -= static_cast<int64_t>(n);
    }
    return d;
}

}  // namespace radperc
