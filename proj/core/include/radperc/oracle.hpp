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
#include <cstddef>
#include <cstdint>
#include <vector>

#include "radperc/clifford.hpp"
#include "radperc/dp.hpp"
#include "radperc/lattice.hpp"
#include "radperc/pauli.hpp"
#include "radperc/stabilizer.hpp"

namespace radperc {

namespace oracle {

/// One-layer transition of the occupation process over the 2^N configurations, applied one
/// vertex at a time. Vertex outcome weights are counted from the q^4 - 1 nontrivial gate
/// outputs, followed by independent removal of each occupied output edge with probability p.
class MarkovKernel {
   public:
    static constexpr size_t max_sites = 14;

    MarkovKernel(size_t n, LocalDim q, double p);

    size_t num_sites() const {
        return n_;
    }
    /// local()[in][out] over edge pairs coded (left | right << 1).
    const std::array<std::array<double, 4>, 4> &local() const {
        return local_;
    }
    void apply(std::vector<double> &dist, Parity parity) const;
    /// Full transition matrix row-major [from][to]; n <= 8.
    std::vector<double> dense(Parity parity) const;

   private:
    size_t n_;
    std::array<std::array<double, 4>, 4> local_{};
};

struct ExactCurves {
    /// E[number of occupied sites] / N.
    std::vector<double> rho;
    std::vector<double> P;
};

/// Exact occupation density and survival for t = 0 .. t_max.
ExactCurves exact_density(size_t n, LocalDim q, double p, const InitialCondition &init, size_t t_max);

/// U^dagger P U on n <= 3 qubits with `g` acting on sites (i, j), evaluated with dense matrices
/// and re-identified as a Pauli string up to phase.
PauliString dense_conjugate(size_t n, const TwoQubitClifford &g, std::pair<size_t, size_t> sites,
                            const PauliString &s);

/// Dense matrix check of [a, b] = 0; n <= 3.
bool dense_commutes(const PauliString &a, const PauliString &b);

/// Number of distinct generator images reached by closing {H, S on each qubit, CNOT} under
/// multiplication, identified densely. 720 for the full group.
size_t dense_clifford_group_size();

/// Stabilizer tableau over A, S and an explicit environment column per swap event.
class FullTableau {
   public:
    static FullTableau init(InitCase c, size_t n, size_t k);

    size_t width() const {
        return k_ + n_ + n_env_;
    }
    size_t num_generators() const {
        return rows_.size();
    }
    size_t n_env() const {
        return n_env_;
    }

    void apply_gate(const TwoQubitClifford &g, size_t i, size_t j);
    /// Appends a fresh ancilla column (with generator Z in the pure case) and exchanges it
    /// with system site `site`.
    void apply_swap(size_t site);

    /// N_R - d + rank of the generators restricted to the complement of R.
    int64_t entropy_by_rank(Region r) const;
    /// N_R - |G_R|, with G_R built explicitly from the kernel of the complement projection.
    int64_t entropy_by_subgroup(Region r) const;
    /// Generators of the subgroup supported inside R, restricted to R's columns (A then S
    /// then E order).
    std::vector<std::vector<uint8_t>> subgroup(Region r) const;
    /// Rank over S of the 2k generators that started as Bell pairs.
    size_t bell_support_rank() const;

    bool generators_commute() const;

   private:
    std::vector<size_t> columns(Region r) const;
    std::vector<size_t> complement(Region r) const;

    InitCase case_ = InitCase::MixedS2MixedE;
    size_t n_ = 0;
    size_t k_ = 0;
    size_t n_env_ = 0;
    // Column order: A, S, then environment in swap order. Entries are Pauli codes x | z << 1.
    std::vector<std::vector<uint8_t>> rows_;
};

/// Row rank over GF(2) of Pauli rows (two bits per column), by straightforward elimination.
size_t naive_rank(std::vector<std::vector<uint8_t>> rows);

}  // namespace oracle

}  // namespace radperc
