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

#include "radperc/dp.hpp"

#include <cmath>
#include <stdexcept>

namespace radperc {

LocalDim LocalDim::of(int q) {
    if (q < 2) {
        throw std::invalid_argument("local dimension q must be >= 2, got " + std::to_string(q));
    }
    return LocalDim(q);
}

LocalDim LocalDim::parse(const std::string &text) {
    if (text == "inf" || text == "infinity" || text == "INFINITY" || text == "Inf") {
        return infinite();
    }
    size_t used = 0;
    int q = 0;
    try {
        q = std::stoi(text, &used);
    } catch (const std::exception &) {
        throw std::invalid_argument("q must be an integer >= 2 or 'inf', got '" + text + "'");
    }
    if (used != text.size()) {
        throw std::invalid_argument("q must be an integer >= 2 or 'inf', got '" + text + "'");
    }
    return of(q);
}

int LocalDim::value() const {
    if (is_infinite()) {
        throw std::logic_error("infinite local dimension has no integer value");
    }
    return q_;
}

std::string LocalDim::str() const {
    return is_infinite() ? "inf" : std::to_string(q_);
}

BranchingParams branching_probs(LocalDim q, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("swap rate must lie in [0, 1], got " + std::to_string(p));
    }
    BranchingParams b;
    b.q = q;
    b.p = p;
    double keep = 1.0 - p;
    if (q.is_infinite()) {
        b.p_both = keep * keep;
        b.p_left = p * keep;
        b.p_right = p * keep;
        b.p_none = p * p;
        return b;
    }
    double q2 = static_cast<double>(q.value()) * q.value();
    double spread = (q2 - 1.0) / (q2 + 1.0);  // (q^2-1)^2 / (q^4-1)
    double single = 1.0 / (q2 + 1.0);         // (q^2-1) / (q^4-1)
    b.p_both = spread * keep * keep;
    b.p_left = single * keep + spread * p * keep;
    b.p_right = b.p_left;
    b.p_none = spread * p * p + 2.0 * p * single;
    return b;
}

BitVector initial_occupation(const InitialCondition &init, size_t n) {
    BitVector occ(n);
    if (const auto *s = std::get_if<SingleSite>(&init)) {
        occ.set(s->x0 % n);
    } else if (const auto *b = std::get_if<Block>(&init)) {
        if (b->k == 0 || b->k > n) {
            throw std::invalid_argument("block length must be in [1, N]");
        }
        for (size_t i = 0; i < b->k; i++) {
            occ.set((b->origin + i) % n);
        }
    } else {
        const auto &c = std::get<Custom>(init);
        if (c.occ.size() != n) {
            throw std::invalid_argument("custom initial condition width differs from N");
        }
        occ = c.occ;
    }
    return occ;
}

size_t initial_origin(const InitialCondition &init) {
    if (const auto *s = std::get_if<SingleSite>(&init)) {
        return s->x0;
    }
    if (const auto *b = std::get_if<Block>(&init)) {
        return b->origin;
    }
    return std::get<Custom>(init).origin;
}

void step_in_place(LatticeState &state, const BranchingParams &params, RandomStream &rng) {
    size_t n = state.occ.size();
    BitVector lefts = active_pair_lefts(state.occ, state.parity);
    BitVector next(n);
    const double c_both = params.p_both;
    const double c_left = c_both + params.p_left;
    const double c_right = c_left + params.p_right;
    lefts.for_each_set([&](size_t left) {
        double u = rng.uniform();
        if (u < c_both) {
            next.set(left);
            next.set(pair_right(left, n));
        } else if (u < c_left) {
            next.set(left);
        } else if (u < c_right) {
            next.set(pair_right(left, n));
        }
    });
    state.occ = std::move(next);
    state.parity = flip(state.parity);
    state.t++;
}

LatticeState step(LatticeState state, const BranchingParams &params, RandomStream &rng) {
    step_in_place(state, params, rng);
    return state;
}

LayerSummary summarize(const BitVector &occ, size_t origin) {
    LayerSummary s;
    size_t n = occ.size();
    bool first = true;
    occ.for_each_set([&](size_t x) {
        int64_t d = signed_displacement(x, origin, n);
        s.count++;
        s.sum_x2 += static_cast<uint64_t>(d * d);
        if (first || d > s.rightmost) {
            s.rightmost = d;
            first = false;
        }
    });
    s.alive = s.count > 0;
    return s;
}

std::vector<LayerSummary> run_trajectory(const InitialCondition &init, const BranchingParams &params, size_t n,
                                         size_t depth, RandomStream &rng) {
    std::vector<LayerSummary> out;
    size_t origin = initial_origin(init) % n;
    run_trajectory_visit(init, params, n, depth, rng,
                         [&](size_t, const BitVector &occ) { out.push_back(summarize(occ, origin)); });
    return out;
}

}  // namespace radperc
