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

#include <gtest/gtest.h>

#include <set>

#include "radperc/oracle.hpp"

using namespace radperc;

TEST(two_qubit_clifford, enumeration_has_720_distinct_symplectic_elements) {
    const auto &all = all_two_qubit_cliffords();
    ASSERT_EQ(all.size(), 720u);
    std::set<std::array<TwoSitePauli, 4>> distinct;
    for (const auto &g : all) {
        EXPECT_TRUE(TwoQubitClifford::is_symplectic(g.images()));
        distinct.insert(g.images());
    }
    EXPECT_EQ(distinct.size(), 720u);
}

TEST(two_qubit_clifford, dense_group_order_matches) {
    EXPECT_EQ(oracle::dense_clifford_group_size(), 720u);
}

TEST(two_qubit_clifford, table_is_linear) {
    for (const auto &g : all_two_qubit_cliffords()) {
        ASSERT_EQ(g.image(0), 0);
        for (TwoSitePauli a = 0; a < 16; a++) {
            for (TwoSitePauli b = 0; b < 16; b++) {
                ASSERT_EQ(g.image(a ^ b), g.image(a) ^ g.image(b));
            }
        }
    }
}

TEST(two_qubit_clifford, preserves_symplectic_product) {
    for (const auto &g : all_two_qubit_cliffords()) {
        for (TwoSitePauli a = 0; a < 16; a++) {
            for (TwoSitePauli b = 0; b < 16; b++) {
                ASSERT_EQ(symplectic_product(g.image(a), g.image(b)), symplectic_product(a, b));
            }
        }
    }
}

TEST(two_qubit_clifford, rejects_non_symplectic_images) {
    EXPECT_THROW(TwoQubitClifford({1, 1, 4, 8}), std::invalid_argument);
}

TEST(two_qubit_clifford, composition_order) {
    TwoQubitClifford h = TwoQubitClifford::hadamard_first();
    EXPECT_EQ(h.then(h), TwoQubitClifford::identity());
    TwoQubitClifford s = TwoQubitClifford::swap();
    EXPECT_EQ(s.then(s), TwoQubitClifford::identity());
    TwoQubitClifford c = TwoQubitClifford::cnot();
    EXPECT_EQ(c.then(c), TwoQubitClifford::identity());
}

TEST(two_qubit_clifford, symplectic_action_matches_dense_matrices) {
    const auto &all = all_two_qubit_cliffords();
    std::vector<std::pair<size_t, size_t>> site_pairs{{0, 1}, {1, 2}, {2, 0}};
    for (size_t idx = 0; idx < all.size(); idx += 7) {
        for (auto sites : site_pairs) {
            for (uint8_t code = 0; code < 64; code++) {
                PauliString s(3);
                for (size_t q = 0; q < 3; q++) {
                    s.set_raw(q, static_cast<uint8_t>((code >> (2 * q)) & 3));
                }
                ASSERT_EQ(conjugate(s, all[idx], sites), oracle::dense_conjugate(3, all[idx], sites, s))
                    << "element " << idx << " on " << s.str();
            }
        }
    }
}

TEST(pauli_string, commutes_matches_dense) {
    for (uint8_t a = 0; a < 64; a++) {
        for (uint8_t b = 0; b < 64; b++) {
            PauliString pa(3);
            PauliString pb(3);
            for (size_t q = 0; q < 3; q++) {
                pa.set_raw(q, static_cast<uint8_t>((a >> (2 * q)) & 3));
                pb.set_raw(q, static_cast<uint8_t>((b >> (2 * q)) & 3));
            }
            ASSERT_EQ(commutes(pa, pb), oracle::dense_commutes(pa, pb));
        }
    }
}

TEST(sample_clifford, covers_group) {
    RandomStream rng(5, stream_id(StreamDomain::test, 2));
    std::set<std::array<TwoSitePauli, 4>> seen;
    for (int i = 0; i < 20000; i++) {
        seen.insert(sample_clifford(rng).images());
    }
    EXPECT_EQ(seen.size(), 720u);
}

TEST(evolve_otoc, zero_swap_rate_never_dies) {
    CircuitParams params{32, 0.0, 64, 9};
    RandomStream rng(9, 0);
    auto supports = evolve_otoc(params, rng);
    ASSERT_EQ(supports.size(), 65u);
    for (const auto &s : supports) {
        EXPECT_TRUE(s.any());
    }
}

TEST(evolve_otoc, light_cone_bounds_support) {
    CircuitParams params{64, 0.1, 20, 3};
    RandomStream rng(3, 0);
    auto supports = evolve_otoc(params, rng);
    for (size_t t = 0; t < supports.size(); t++) {
        supports[t].for_each_set([&](size_t x) {
            int64_t d = signed_displacement(x, 0, 64);
            EXPECT_LE(std::abs(d), static_cast<int64_t>(t) + 1);
        });
    }
}

TEST(evolve_otoc, full_swap_rate_kills_in_one_step) {
    CircuitParams params{8, 1.0, 10, 1};
    RandomStream rng(1, 0);
    auto supports = evolve_otoc(params, rng);
    ASSERT_EQ(supports.size(), 2u);
    EXPECT_TRUE(supports[1].none());
}

TEST(circuit_params, validation) {
    EXPECT_THROW((CircuitParams{7, 0.1, 1, 0}.validate()), std::invalid_argument);
    EXPECT_THROW((CircuitParams{8, 1.5, 1, 0}.validate()), std::invalid_argument);
}
