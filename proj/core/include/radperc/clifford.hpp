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
#include <utility>
#include <vector>

#include "radperc/bits.hpp"
#include "radperc/lattice.hpp"
#include "radperc/pauli.hpp"
#include "radperc/rng.hpp"

namespace radperc {

/// Two-site Pauli content packed as 4 bits: (x1, z1, x2, z2) from bit 0 up.
using TwoSitePauli = uint8_t;

inline TwoSitePauli two_site(PauliLetter first, PauliLetter second) {
    return static_cast<TwoSitePauli>(static_cast<uint8_t>(first) | (static_cast<uint8_t>(second) << 2));
}

/// Symplectic form on two-site Pauli codes; 1 iff they anticommute.
inline int symplectic_product(TwoSitePauli a, TwoSitePauli b) {
    TwoSitePauli b_swapped = static_cast<TwoSitePauli>(((b & 0b0101) << 1) | ((b & 0b1010) >> 1));
    return std::popcount(static_cast<unsigned>(a & b_swapped)) & 1;
}

PauliString to_pauli_string(TwoSitePauli p);

/// A two-qubit Clifford modulo Pauli frame, stored as the images of X1, Z1, X2, Z2.
class TwoQubitClifford {
   public:
    /// Identity gate.
    TwoQubitClifford();
    /// Images of X1, Z1, X2, Z2 in that order. Throws unless they form a symplectic basis.
    explicit TwoQubitClifford(std::array<TwoSitePauli, 4> images);

    static TwoQubitClifford identity() {
        return {};
    }
    static TwoQubitClifford cnot();  // control on site 1
    static TwoQubitClifford swap();
    static TwoQubitClifford hadamard_first();
    static TwoQubitClifford phase_first();

    const std::array<TwoSitePauli, 4> &images() const {
        return images_;
    }
    TwoSitePauli image(TwoSitePauli input) const {
        return table_[input & 15];
    }
    /// g.then(h): apply g first, then h (Heisenberg images compose as h's images of g's images).
    TwoQubitClifford then(const TwoQubitClifford &next) const;

    bool operator==(const TwoQubitClifford &other) const {
        return images_ == other.images_;
    }

    /// Symplectic pairing holds: image(X_i) anticommutes with image(Z_i), all other pairs commute.
    static bool is_symplectic(const std::array<TwoSitePauli, 4> &images);

   private:
    struct unchecked_t {};
    TwoQubitClifford(std::array<TwoSitePauli, 4> images, unchecked_t);
    void build_table();

    std::array<TwoSitePauli, 4> images_;
    std::array<TwoSitePauli, 16> table_;

    friend TwoQubitClifford sample_clifford(RandomStream &rng);
    friend const std::vector<TwoQubitClifford> &all_two_qubit_cliffords();
};

/// Uniform over the 720 two-qubit Cliffords modulo Pauli frame (the symplectic group Sp(4,2)).
TwoQubitClifford sample_clifford(RandomStream &rng);

/// Every element of Sp(4,2), in the enumeration order of the constructive sampler.
const std::vector<TwoQubitClifford> &all_two_qubit_cliffords();

/// Replaces the content of `s` at (i, j) with its image under `g`.
PauliString conjugate(PauliString s, const TwoQubitClifford &g, std::pair<size_t, size_t> sites);
void conjugate_in_place(PauliString &s, const TwoQubitClifford &g, size_t i, size_t j);

struct CircuitParams {
    size_t N = 0;
    double p = 0;
    size_t depth = 0;
    uint64_t seed = 0;

    void validate() const;
};

struct SwapEvent {
    size_t site;
    size_t layer;
};

/// Applies independent random Cliffords to every pair of the given parity. Pairs whose content
/// is identity are skipped; a Clifford maps the identity to itself, so the output law is the same.
void apply_layer_in_place(PauliString &s, Parity parity, RandomStream &rng);
PauliString apply_layer(PauliString s, Parity parity, const CircuitParams &params, RandomStream &rng);

/// Each site is swapped with a fresh ancilla with probability p, leaving identity content behind.
std::pair<PauliString, std::vector<SwapEvent>> apply_swaps(PauliString s, double p, size_t layer,
                                                           RandomStream &rng);

/// Same law as apply_swaps restricted to the string's support; draws one variate per occupied
/// site only, and does not report events.
void apply_swaps_on_support(PauliString &s, double p, RandomStream &rng);

/// Heisenberg evolution of X at site 0. Calls `on_layer(t, occupation)` for t = 0, 1, ... with
/// one gate layer plus its swap round per unit time, and stops after the first empty layer or
/// at `params.depth`. Returns the last recorded t.
template <typename Fn>
size_t evolve_otoc_visit(const CircuitParams &params, RandomStream &rng, Fn &&on_layer) {
    params.validate();
    PauliString s = PauliString::single(params.N, 0, PauliLetter::X);
    on_layer(size_t{0}, s.support());
    for (size_t t = 1; t <= params.depth; t++) {
        apply_layer_in_place(s, parity_of_layer(t - 1), rng);
        apply_swaps_on_support(s, params.p, rng);
        BitVector occ = s.support();
        bool empty = occ.none();
        on_layer(t, occ);
        if (empty) {
            return t;
        }
    }
    return params.depth;
}

/// Occupation trajectory n_x(t), t = 0 .. absorption or depth.
std::vector<BitVector> evolve_otoc(const CircuitParams &params, RandomStream &rng);

}  // namespace radperc
