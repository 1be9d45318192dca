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

#include "radperc/clifford.hpp"

#include <stdexcept>
#include <string>

namespace radperc {

PauliString to_pauli_string(TwoSitePauli p) {
    PauliString s(2);
    s.set_raw(0, p & 3);
    s.set_raw(1, (p >> 2) & 3);
    return s;
}

TwoQubitClifford::TwoQubitClifford() : TwoQubitClifford({0b0001, 0b0010, 0b0100, 0b1000}, unchecked_t{}) {
}

TwoQubitClifford::TwoQubitClifford(std::array<TwoSitePauli, 4> images) : images_(images) {
    if (!is_symplectic(images)) {
        throw std::invalid_argument("generator images do not preserve the commutation relations");
    }
    build_table();
}

TwoQubitClifford::TwoQubitClifford(std::array<TwoSitePauli, 4> images, unchecked_t) : images_(images) {
    build_table();
}

void TwoQubitClifford::build_table() {
    for (unsigned c = 0; c < 16; c++) {
        TwoSitePauli out = 0;
        for (unsigned b = 0; b < 4; b++) {
            if (c & (1u << b)) {
                out ^= images_[b];
            }
        }
        table_[c] = out;
    }
}

bool TwoQubitClifford::is_symplectic(const std::array<TwoSitePauli, 4> &images) {
    for (int a = 0; a < 4; a++) {
        if ((images[a] & 15) != images[a]) {
            return false;
        }
        for (int b = a + 1; b < 4; b++) {
            // Conjugate pairs are (0,1) and (2,3).
            int expected = (a == 0 && b == 1) || (a == 2 && b == 3) ? 1 : 0;
            if (symplectic_product(images[a], images[b]) != expected) {
                return false;
            }
        }
    }
    return true;
}

TwoQubitClifford TwoQubitClifford::cnot() {
    // X1 -> X1 X2, Z1 -> Z1, X2 -> X2, Z2 -> Z1 Z2.
    return TwoQubitClifford({0b0101, 0b0010, 0b0100, 0b1010});
}

TwoQubitClifford TwoQubitClifford::swap() {
    return TwoQubitClifford({0b0100, 0b1000, 0b0001, 0b0010});
}

TwoQubitClifford TwoQubitClifford::hadamard_first() {
    return TwoQubitClifford({0b0010, 0b0001, 0b0100, 0b1000});
}

TwoQubitClifford TwoQubitClifford::phase_first() {
    // X -> Y, Z -> Z.
    return TwoQubitClifford({0b0011, 0b0010, 0b0100, 0b1000});
}

TwoQubitClifford TwoQubitClifford::then(const TwoQubitClifford &next) const {
    std::array<TwoSitePauli, 4> composed;
    for (int b = 0; b < 4; b++) {
        composed[b] = next.image(images_[b]);
    }
    return TwoQubitClifford(composed, unchecked_t{});
}

namespace {

// The k-th nontrivial code (1..15) satisfying `pred`.
template <typename Pred>
TwoSitePauli kth_matching(uint64_t k, Pred &&pred) {
    for (TwoSitePauli c = 1; c < 16; c++) {
        if (pred(c)) {
            if (k == 0) {
                return c;
            }
            k--;
        }
    }
    throw std::logic_error("kth_matching: index out of range");
}

// Choices: 15 for image(X1), 8 anticommuting partners for image(Z1), 3 nontrivial elements of
// the symplectic complement for image(X2), 2 anticommuting partners inside it for image(Z2).
std::array<TwoSitePauli, 4> build_images(uint64_t i0, uint64_t i1, uint64_t i2, uint64_t i3) {
    TwoSitePauli a = static_cast<TwoSitePauli>(i0 + 1);
    TwoSitePauli b = kth_matching(i1, [&](TwoSitePauli c) { return symplectic_product(a, c) == 1; });
    auto in_complement = [&](TwoSitePauli c) {
        return symplectic_product(a, c) == 0 && symplectic_product(b, c) == 0;
    };
    TwoSitePauli c = kth_matching(i2, in_complement);
    TwoSitePauli d = kth_matching(i3, [&](TwoSitePauli x) { return in_complement(x) && symplectic_product(c, x) == 1; });
    return {a, b, c, d};
}

}  // namespace

TwoQubitClifford sample_clifford(RandomStream &rng) {
    // One mixed-radix index (i0, i1, i2, i3) into the constructive enumeration.
    return all_two_qubit_cliffords()[rng.below(720)];
}

const std::vector<TwoQubitClifford> &all_two_qubit_cliffords() {
    static const std::vector<TwoQubitClifford> all = [] {
        std::vector<TwoQubitClifford> out;
        out.reserve(720);
        for (uint64_t i0 = 0; i0 < 15; i0++) {
            for (uint64_t i1 = 0; i1 < 8; i1++) {
                for (uint64_t i2 = 0; i2 < 3; i2++) {
                    for (uint64_t i3 = 0; i3 < 2; i3++) {
                        out.push_back(
                            TwoQubitClifford(build_images(i0, i1, i2, i3), TwoQubitClifford::unchecked_t{}));
                    }
                }
            }
        }
        return out;
    }();
    return all;
}

void conjugate_in_place(PauliString &s, const TwoQubitClifford &g, size_t i, size_t j) {
    if (i == j) {
        throw std::invalid_argument("conjugate: sites must differ");
    }
    if (i >= s.size() || j >= s.size()) {
        throw std::out_of_range("conjugate: site outside register");
    }
    TwoSitePauli in = static_cast<TwoSitePauli>(s.raw_at(i) | (s.raw_at(j) << 2));
    TwoSitePauli out = g.image(in);
    s.set_raw(i, out & 3);
    s.set_raw(j, (out >> 2) & 3);
}

PauliString conjugate(PauliString s, const TwoQubitClifford &g, std::pair<size_t, size_t> sites) {
    conjugate_in_place(s, g, sites.first, sites.second);
    return s;
}

void CircuitParams::validate() const {
    require_even_ring(N);
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("swap rate must lie in [0, 1], got " + std::to_string(p));
    }
}

void apply_layer_in_place(PauliString &s, Parity parity, RandomStream &rng) {
    size_t n = s.size();
    BitVector lefts = active_pair_lefts(s.support(), parity);
    lefts.for_each_set([&](size_t left) {
        size_t right = pair_right(left, n);
        TwoSitePauli in = static_cast<TwoSitePauli>(s.raw_at(left) | (s.raw_at(right) << 2));
        TwoSitePauli out = sample_clifford(rng).image(in);
        s.set_raw(left, out & 3);
        s.set_raw(right, (out >> 2) & 3);
    });
}

PauliString apply_layer(PauliString s, Parity parity, const CircuitParams &params, RandomStream &rng) {
    if (s.size() != params.N) {
        throw std::invalid_argument("apply_layer: string width differs from N");
    }
    apply_layer_in_place(s, parity, rng);
    return s;
}

std::pair<PauliString, std::vector<SwapEvent>> apply_swaps(PauliString s, double p, size_t layer,
                                                           RandomStream &rng) {
    std::vector<SwapEvent> events;
    for (size_t site = 0; site < s.size(); site++) {
        if (rng.bernoulli(p)) {
            s.set_raw(site, 0);
            events.push_back({site, layer});
        }
    }
    return {std::move(s), std::move(events)};
}

void apply_swaps_on_support(PauliString &s, double p, RandomStream &rng) {
    if (p <= 0.0) {
        return;
    }
    BitVector occ = s.support();
    occ.for_each_set([&](size_t site) {
        if (rng.bernoulli(p)) {
            s.set_raw(site, 0);
        }
    });
}

std::vector<BitVector> evolve_otoc(const CircuitParams &params, RandomStream &rng) {
    std::vector<BitVector> out;
    evolve_otoc_visit(params, rng, [&](size_t, const BitVector &occ) { out.push_back(occ); });
    return out;
}

}  // namespace radperc
