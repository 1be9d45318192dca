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

#include "radperc/lattice.hpp"

namespace radperc {

BitVector active_pair_lefts(const BitVector &occupied, Parity parity) {
    size_t n = occupied.size();
    BitVector result(n);
    auto in = occupied.words();
    auto out = result.words();
    size_t nw = in.size();
    if (nw == 0) {
        return result;
    }
    const uint64_t parity_mask = parity == Parity::even ? 0x5555555555555555ULL : 0xAAAAAAAAAAAAAAAAULL;
    for (size_t w = 0; w < nw; w++) {
        // Bit L of `next` holds occupation of site L+1.
        uint64_t next = in[w] >> 1;
        if (w + 1 < nw) {
            next |= in[w + 1] << 63;
        }
        out[w] = (in[w] | next) & parity_mask;
    }
    // Site n-1 pairs with site 0 on the ring.
    if (occupied.get(0) && ((n - 1) & 1) == static_cast<size_t>(parity)) {
        result.set(n - 1);
    }
    // Clear anything that spilled past the register end.
    size_t r = n & 63;
    if (r) {
        out[nw - 1] &= (uint64_t{1} << r) - 1;
    }
    return result;
}

}  // namespace radperc
