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
#include <variant>
#include <vector>

#include "radperc/bits.hpp"
#include "radperc/lattice.hpp"
#include "radperc/rng.hpp"

namespace radperc {

/// Local Hilbert-space dimension q >= 2, or the q -> infinity (bond-DP) limit.
class LocalDim {
   public:
    static LocalDim of(int q);
    static LocalDim infinite() {
        return LocalDim(0);
    }
    /// Accepts an integer >= 2, or "inf" / "infinity".
    static LocalDim parse(const std::string &text);

    bool is_infinite() const {
        return q_ == 0;
    }
    /// Throws for the infinite limit.
    int value() const;
    std::string str() const;
    bool operator==(const LocalDim &) const = default;

   private:
    explicit LocalDim(int q) : q_(q) {
    }
    int q_;
};

/// Outcome probabilities for a gate vertex with at least one occupied input edge.
struct BranchingParams {
    LocalDim q = LocalDim::of(2);
    double p = 0;
    double p_both = 0;
    double p_left = 0;
    double p_right = 0;
    double p_none = 0;
};

BranchingParams branching_probs(LocalDim q, double p);

struct LatticeState {
    BitVector occ;
    size_t t = 0;
    Parity parity = Parity::even;
};

struct SingleSite {
    size_t x0 = 0;
};
struct Block {
    size_t k = 1;
    size_t origin = 0;
};
struct Custom {
    BitVector occ;
    size_t origin = 0;
};
using InitialCondition = std::variant<SingleSite, Block, Custom>;

BitVector initial_occupation(const InitialCondition &init, size_t n);
/// Reference site for displacements (x = 0 in spreading observables).
size_t initial_origin(const InitialCondition &init);

/// One gate layer. Each vertex of the current parity with an occupied input draws one uniform
/// variate and selects both/left/right/none by cumulative comparison in that order.
void step_in_place(LatticeState &state, const BranchingParams &params, RandomStream &rng);
LatticeState step(LatticeState state, const BranchingParams &params, RandomStream &rng);

struct LayerSummary {
    size_t count = 0;
    bool alive = false;
    uint64_t sum_x2 = 0;
    int64_t rightmost = 0;
};

LayerSummary summarize(const BitVector &occ, size_t origin);

/// Runs until absorption or `depth`, calling `on_layer(t, occupation)` for t = 0 .. last.
template <typename Fn>
size_t run_trajectory_visit(const InitialCondition &init, const BranchingParams &params, size_t n, size_t depth,
                            RandomStream &rng, Fn &&on_layer) {
    require_even_ring(n);
    LatticeState state{initial_occupation(init, n), 0, Parity::even};
    on_layer(size_t{0}, static_cast<const BitVector &>(state.occ));
    if (state.occ.none()) {
        return 0;
    }
    while (state.t < depth) {
        step_in_place(state, params, rng);
        on_layer(state.t, static_cast<const BitVector &>(state.occ));
        if (state.occ.none()) {
            break;
        }
    }
    return state.t;
}

/// Per-layer summaries, t = 0 .. absorption or depth.
std::vector<LayerSummary> run_trajectory(const InitialCondition &init, const BranchingParams &params, size_t n,
                                         size_t depth, RandomStream &rng);

}  // namespace radperc
