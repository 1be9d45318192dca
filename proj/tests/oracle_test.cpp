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

#include "radperc/oracle.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace radperc;
using radperc::oracle::ExactCurves;
using radperc::oracle::MarkovKernel;

TEST(markov_kernel, local_rows_match_branching_probabilities) {
    for (LocalDim q : {LocalDim::of(2), LocalDim::of(3), LocalDim::infinite()}) {
        for (double p : {0.0, 0.2, 0.5, 1.0}) {
            MarkovKernel k(4, q, p);
            BranchingParams b = branching_probs(q, p);
            for (int in = 1; in < 4; in++) {
                const auto &row = k.local()[static_cast<size_t>(in)];
                EXPECT_NEAR(row[0], b.p_none, 1e-12);
                EXPECT_NEAR(row[1], b.p_left, 1e-12);
                EXPECT_NEAR(row[2], b.p_right, 1e-12);
                EXPECT_NEAR(row[3], b.p_both, 1e-12);
            }
            EXPECT_EQ(k.local()[0][0], 1.0);
        }
    }
}

TEST(markov_kernel, dense_matrix_is_stochastic) {
    MarkovKernel k(6, LocalDim::of(2), 0.3);
    for (Parity parity : {Parity::even, Parity::odd}) {
        std::vector<double> m = k.dense(parity);
        size_t dim = size_t{1} << 6;
        ASSERT_EQ(m.size(), dim * dim);
        for (size_t from = 0; from < dim; from++) {
            double total = std::accumulate(m.begin() + long(from * dim), m.begin() + long((from + 1) * dim), 0.0);
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
        EXPECT_EQ(m[0], 1.0);
    }
}

TEST(markov_kernel, apply_matches_dense) {
    MarkovKernel k(6, LocalDim::of(3), 0.25);
    size_t dim = 64;
    std::vector<double> dist(dim, 0.0);
    dist[1] = 0.5;
    dist[0b101100] = 0.5;
    for (Parity parity : {Parity::even, Parity::odd}) {
        std::vector<double> m = k.dense(parity);
        std::vector<double> expect(dim, 0.0);
        for (size_t from = 0; from < dim; from++) {
            for (size_t to = 0; to < dim; to++) {
                expect[to] += dist[from] * m[from * dim + to];
            }
        }
        std::vector<double> got = dist;
        k.apply(got, parity);
        for (size_t i = 0; i < dim; i++) {
            EXPECT_NEAR(got[i], expect[i], 1e-14);
        }
        dist = got;
    }
}

TEST(exact_density, limiting_cases) {
    ExactCurves dead = oracle::exact_density(6, LocalDim::of(2), 1.0, SingleSite{0}, 4);
    EXPECT_DOUBLE_EQ(dead.rho[0], 1.0 / 6);
    EXPECT_DOUBLE_EQ(dead.P[0], 1.0);
    EXPECT_DOUBLE_EQ(dead.P[1], 0.0);
    ExactCurves full = oracle::exact_density(6, LocalDim::infinite(), 0.0, SingleSite{0}, 6);
    EXPECT_NEAR(full.rho[6], 1.0, 1e-12);
    EXPECT_NEAR(full.P[6], 1.0, 1e-12);
}

TEST(exact_density, first_step_by_hand) {
    double p = 0.2;
    BranchingParams b = branching_probs(LocalDim::of(2), p);
    ExactCurves c = oracle::exact_density(6, LocalDim::of(2), p, SingleSite{0}, 1);
    EXPECT_NEAR(c.P[1], 1.0 - b.p_none, 1e-14);
    EXPECT_NEAR(c.rho[1], (2 * b.p_both + b.p_left + b.p_right) / 6, 1e-14);
}

TEST(exact_density, survival_is_monotone) {
    ExactCurves c = oracle::exact_density(8, LocalDim::of(2), 0.3, SingleSite{0}, 20);
    for (size_t t = 1; t < c.P.size(); t++) {
        EXPECT_LE(c.P[t], c.P[t - 1] + 1e-15);
    }
}

TEST(markov_kernel, rejects_large_systems) {
    EXPECT_THROW(MarkovKernel(16, LocalDim::of(2), 0.1), std::invalid_argument);
}

TEST(naive_rank, small_cases) {
    EXPECT_EQ(oracle::naive_rank({{1, 0}, {0, 2}, {1, 2}}), 2u);
    EXPECT_EQ(oracle::naive_rank({{3, 3}, {3, 3}}), 1u);
    EXPECT_EQ(oracle::naive_rank({}), 0u);
}
