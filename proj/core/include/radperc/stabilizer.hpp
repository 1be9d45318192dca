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
#include <optional>
#include <string>
#include <vector>

#include "radperc/bits.hpp"
#include "radperc/clifford.hpp"
#include "radperc/lattice.hpp"
#include "radperc/pauli.hpp"
#include "radperc/rng.hpp"

namespace radperc {

/// Initial state of S2 (the N-k system qubits not paired with the reference) and of the
/// environment ancillas that get swapped in.
enum class InitCase : uint8_t {
    MixedS2MixedE,  // (i)
    PureS2MixedE,   // (ii)
    PureAll,        // (iii)
};

InitCase parse_init_case(const std::string &text);
std::string to_string(InitCase c);

enum class RowLabel : uint8_t {
    AS,    // trivial content outside A and S
    PERP,  // carries untracked environment content
};

enum class Region : uint8_t { A, S, AS, E, AE };

std::string to_string(Region r);

/// Stabilizer generators of the state on A (k reference qubits), S (N system qubits) and the
/// environment E, tracking only content on A and S.
///
/// Register columns: A occupies [0, k), system site s occupies column k + s.
///
/// Generators are kept in a basis split into AS rows, spanning the subgroup with trivial
/// environment content, and PERP rows, which complete the basis. A swap at site s first reduces
/// the AS rows so at most one carries X content and at most one carries Z content at s, moves
/// those to PERP (or drops them when the state is globally pure), then clears column s in every
/// row. Environment content of PERP rows is never needed: each ancilla is fresh, so no product
/// of rows can cancel it.
///
/// Storage is column-major: each register column holds one bit per generator slot, so a gate
/// touches four bit columns and a GF(2) rank over a column subset is the rank of those columns.
class GeneratorSet {
   public:
    static GeneratorSet init(InitCase c, size_t n, size_t k);

    InitCase init_case() const {
        return case_;
    }
    size_t num_system() const {
        return n_;
    }
    size_t num_reference() const {
        return k_;
    }
    size_t width() const {
        return k_ + n_;
    }
    /// d: number of generators currently held (cases i, ii: fixed; case iii: AS rows only).
    size_t d_total() const {
        return present_.popcount();
    }
    /// N_E: swap events so far.
    size_t n_env() const {
        return n_env_;
    }
    size_t num_as_rows() const {
        return (present_ & as_).popcount();
    }

    /// Row-major copies, in slot order.
    std::vector<PauliString> rows() const;
    std::vector<RowLabel> labels() const;
    std::vector<PauliString> as_rows() const;
    /// Rows descending from the Bell generators, restricted to S (width N).
    std::vector<PauliString> bell_rows_on_s() const;

    /// Applies `g` to system sites (i, j) of every generator.
    void apply_gate(const TwoQubitClifford &g, size_t i, size_t j);
    /// One brick-wall layer of independent uniformly random Cliffords, pairs in increasing order.
    void apply_layer(Parity parity, RandomStream &rng);
    /// Swaps system site `site` with a fresh ancilla.
    void apply_swap(size_t site);
    /// Swaps each site independently with probability p; returns the swapped sites.
    std::vector<size_t> apply_swaps(double p, RandomStream &rng);

    /// von Neumann entropy in bits.
    int64_t entropy(Region r) const;

    /// Rank of the S-content of the generators originating from the Bell pairs.
    size_t bell_support_rank() const;

    /// AS rows independent, and commuting with every row (on tracked content).
    bool check_invariants(std::string *why = nullptr) const;

   private:
    struct Columns {
        size_t num_cols = 0;
        size_t row_words = 0;
        std::vector<uint64_t> x;
        std::vector<uint64_t> z;

        Columns() = default;
        Columns(size_t cols, size_t rows);
        uint64_t *xc(size_t c) {
            return x.data() + c * row_words;
        }
        uint64_t *zc(size_t c) {
            return z.data() + c * row_words;
        }
        const uint64_t *xc(size_t c) const {
            return x.data() + c * row_words;
        }
        const uint64_t *zc(size_t c) const {
            return z.data() + c * row_words;
        }
        void apply_gate(const TwoQubitClifford &g, size_t ci, size_t cj);
        void clear_column(size_t c);
        /// row[dst] ^= row[src] for every dst in `targets`.
        void add_row_to(size_t src, const BitVector &targets);
        void clear_row(size_t r);
        /// GF(2) rank of the given rows restricted to columns [lo, hi).
        size_t rank(const BitVector &row_mask, size_t lo, size_t hi) const;
        PauliString row(size_t r, size_t lo, size_t hi) const;
    };

    GeneratorSet() = default;
    BitVector column_bits(const uint64_t *col) const;

    InitCase case_ = InitCase::MixedS2MixedE;
    size_t n_ = 0;
    size_t k_ = 0;
    size_t n_env_ = 0;
    Columns tab_;
    BitVector present_;
    BitVector as_;
    // Copy of the 2k Bell generators on S for cases ii and iii, where swap-time reduction mixes
    // them with S2 generators. Case i uses the main table.
    Columns bell_;
};

/// Evolves a fresh GeneratorSet for `depth` time steps, one gate layer plus a swap round each.
/// Calls `on_step(t, state)` for t = 0 .. depth.
template <typename Fn>
void evolve_info_visit(InitCase c, size_t n, size_t k, double p, size_t depth, RandomStream &rng, Fn &&on_step) {
    GeneratorSet state = GeneratorSet::init(c, n, k);
    on_step(size_t{0}, static_cast<const GeneratorSet &>(state));
    for (size_t t = 1; t <= depth; t++) {
        state.apply_layer(parity_of_layer(t - 1), rng);
        state.apply_swaps(p, rng);
        on_step(t, static_cast<const GeneratorSet &>(state));
    }
}

struct InfoResult {
    int64_t H_A = 0;
    int64_t H_S = 0;
    int64_t H_AS = 0;
    int64_t H_E = 0;
    int64_t H_AE = 0;
    int64_t Ic_E = 0;  // H_E - H_AE
    int64_t Ic_S = 0;  // H_S - H_AS
    /// Decoding fidelity 2^{-r}, r = bell_support_rank.
    double F = 0;
    int64_t fidelity_rank = 0;
    /// Postselected pure-state decoder (case iii only).
    std::optional<double> P_succ;
    std::optional<double> F_pure;
};

InfoResult coherent_info(const GeneratorSet &state);

/// F = 2^{-r}, r = rank of Bell-origin generators restricted to S.
double decode_fidelity(const GeneratorSet &state);

struct PurityReport {
    /// log2 tr[(rho^AE)^2] = -H_AE (case i).
    std::optional<int64_t> log2_purity_AE;
    /// log2 of 2^{N_E - k} tr[(rho^AE)^2]; equals log2 F exactly in case i.
    std::optional<int64_t> log2_fidelity_from_purity;
    /// log2 P_succ = k - N - H_E (case iii).
    std::optional<int64_t> log2_P_succ;
    /// log2 F_pure = Ic_E - k (case iii).
    std::optional<int64_t> log2_F_pure;
};

/// Case i: purity/fidelity identity. Case iii: postselection success and fidelity.
/// Throws std::logic_error for case ii.
PurityReport purity_identities(const GeneratorSet &state);

}  // namespace radperc
