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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace radperc;

TEST(philox, known_answer_vectors) {
    using C = std::array<uint32_t, 4>;
    using K = std::array<uint32_t, 2>;
    EXPECT_EQ(philox4x32_10(C{0, 0, 0, 0}, K{0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32_10(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}),
              (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32_10(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(random_stream, deterministic_per_seed_and_stream) {
    RandomStream a(42, 7);
    RandomStream b(42, 7);
    for (int i = 0; i < 100; i++) {
        ASSERT_EQ(a(), b());
    }
}

TEST(random_stream, streams_and_seeds_differ) {
    std::set<uint64_t> first;
    for (uint64_t s = 0; s < 4; s++) {
        for (uint64_t id = 0; id < 64; id++) {
            first.insert(RandomStream(s, id)());
        }
    }
    EXPECT_EQ(first.size(), 256u);
}

TEST(random_stream, domains_do_not_collide) {
    EXPECT_NE(stream_id(StreamDomain::trajectory, 5), stream_id(StreamDomain::stabilizer, 5));
    EXPECT_NE(RandomStream(1, stream_id(StreamDomain::trajectory, 0))(),
              RandomStream(1, stream_id(StreamDomain::particle_block, 0))());
}

TEST(random_stream, uniform_in_unit_interval) {
    RandomStream rng(3, 0);
    double sum = 0;
    const int n = 200000;
    for (int i = 0; i < n; i++) {
        double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
}

TEST(random_stream, below_is_uniform) {
    RandomStream rng(11, 0);
    const uint64_t bins = 7;
    const int n = 70000;
    std::vector<int> counts(bins, 0);
    for (int i = 0; i < n; i++) {
        uint64_t v = rng.below(bins);
        ASSERT_LT(v, bins);
        counts[v]++;
    }
    double chi2 = 0;
    double expect = static_cast<double>(n) / bins;
    for (int c : counts) {
        chi2 += (c - expect) * (c - expect) / expect;
    }
    // 99.9% quantile of chi-square with 6 degrees of freedom.
    EXPECT_LT(chi2, 22.46);
}

TEST(random_stream, below_one_is_zero) {
    RandomStream rng(1, 1);
    for (int i = 0; i < 10; i++) {
        EXPECT_EQ(rng.below(1), 0u);
    }
}
