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

#include "radperc/stabilizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace radperc {

InitCase parse_init_case(const std::string &text) {
    if (text == "i" || text == "1" || text == "mixed") {
        return InitCase::MixedS2MixedE;
    }
    if (text == "ii" || text == "2" || text == "pure_s2") {
        return InitCase::PureS2MixedE;
    }
    if (text == "iii" || text == "3" || text == "pure") {
        return InitCase::PureAll;
    }
    throw std::invalid_argument("unknown initial case '" + text + "' (expected i, ii or iii)");
}

std::string to_string(InitCase c) {
    switch (c) {
        case InitCase::MixedS2MixedE:
            return "i";
        case InitCase::PureS2MixedE:
            return "ii";
        case InitCase::PureAll:
            return "iii";
    }
    return "?";
}

std::string to_string(Region r) {
    switch (r) {
        case Region::A:
            return "A";
        case Region::S:
            return "S";
        case Region::AS:
            return "AS";
        case Region::E:
            return "E";
        case Region::AE:
            return "AE";
    }
    return "?";
}

GeneratorSet::Columns::Columns(size_t cols, size_t rows)
    : num_cols(cols), row_words(words_for_bits(rows)), x(cols * row_words, 0), z(cols * row_words, 0) {
}

void GeneratorSet::Columns::apply_gate(const TwoQubitClifford &g, size_t ci, size_t cj) {
    // Input component b of a row is bit b of its code; output component m collects the inputs
    // whose image has bit m set.
    std::array<uint8_t, 4> sel{};
    for (int b = 0; b < 4; b++) {
        for (int m = 0; m < 4; m++) {
            if ((g.images()[b] >> m) & 1) {
                sel[m] |= static_cast<uint8_t>(1u << b);
            }
        }
    }
    uint64_t *cols[4] = {xc(ci), zc(ci), xc(cj), zc(cj)};
    for (size_t w = 0; w < row_words; w++) {
        uint64_t in[4] = {cols[0][w], cols[1][w], cols[2][w], cols[3][w]};
        for (int m = 0; m < 4; m++) {
            uint64_t out = 0;
            for (int b = 0; b < 4; b++) {
                out ^= in[b] & (uint64_t{0} - ((sel[m] >> b) & 1));
            }
            cols[m][w] = out;
        }
    }
}

void GeneratorSet::Columns::clear_column(size_t c) {
    std::fill_n(xc(c), row_words, 0);
    std::fill_n(zc(c), row_words, 0);
}

void GeneratorSet::Columns::add_row_to(size_t src, const BitVector &targets) {
    auto t = targets.words();
    size_t sw = src >> 6;
    uint64_t sb = uint64_t{1} << (src & 63);
    for (size_t c = 0; c < num_cols; c++) {
        uint64_t *xcol = xc(c);
        uint64_t *zcol = zc(c);
        if (xcol[sw] & sb) {
            for (size_t w = 0; w < row_words; w++) {
                xcol[w] ^= t[w];
            }
        }
        if (zcol[sw] & sb) {
            for (size_t w = 0; w < row_words; w++) {
                zcol[w] ^= t[w];
            }
        }
    }
}

void GeneratorSet::Columns::clear_row(size_t r) {
    size_t rw = r >> 6;
    uint64_t keep = ~(uint64_t{1} << (r & 63));
    for (size_t c = 0; c < num_cols; c++) {
        xc(c)[rw] &= keep;
        zc(c)[rw] &= keep;
    }
}

size_t GeneratorSet::Columns::rank(const BitVector &row_mask, size_t lo, size_t hi) const {
    // rank(M) = rank(M^T): each masked column is one vector over the rows.
    auto m = row_mask.words();
    size_t count = 2 * (hi - lo);
    std::vector<uint64_t> buf(count * row_words);
    uint64_t *out = buf.data();
    for (size_t c = lo; c < hi; c++) {
        const uint64_t *xcol = xc(c);
        const uint64_t *zcol = zc(c);
        for (size_t w = 0; w < row_words; w++) {
            out[w] = xcol[w] & m[w];
            out[row_words + w] = zcol[w] & m[w];
        }
        out += 2 * row_words;
    }
    return gf2::rank_in_place(buf, count, row_words);
}

PauliString GeneratorSet::Columns::row(size_t r, size_t lo, size_t hi) const {
    PauliString s(hi - lo);
    size_t rw = r >> 6;
    size_t rb = r & 63;
    for (size_t c = lo; c < hi; c++) {
        s.set_raw(c - lo, static_cast<uint8_t>(((xc(c)[rw] >> rb) & 1) | (((zc(c)[rw] >> rb) & 1) << 1)));
    }
    return s;
}

GeneratorSet GeneratorSet::init(InitCase c, size_t n, size_t k) {
    require_even_ring(n);
    if (k < 1 || k > n) {
        throw std::invalid_argument("reference size k must satisfy 1 <= k <= N, got k=" + std::to_string(k) +
                                    ", N=" + std::to_string(n));
    }
    GeneratorSet g;
    g.case_ = c;
    g.n_ = n;
    g.k_ = k;
    size_t initial_rows = c == InitCase::MixedS2MixedE ? 2 * k : n + k;
    g.tab_ = Columns(k + n, initial_rows);
    g.present_ = BitVector(initial_rows);
    g.as_ = BitVector(initial_rows);
    for (size_t i = 0; i < k; i++) {
        size_t rx = 2 * i;
        size_t rz = 2 * i + 1;
        g.tab_.xc(i)[rx >> 6] |= uint64_t{1} << (rx & 63);
        g.tab_.xc(k + i)[rx >> 6] |= uint64_t{1} << (rx & 63);
        g.tab_.zc(i)[rz >> 6] |= uint64_t{1} << (rz & 63);
        g.tab_.zc(k + i)[rz >> 6] |= uint64_t{1} << (rz & 63);
    }
    if (c != InitCase::MixedS2MixedE) {
        for (size_t j = k; j < n; j++) {
            size_t r = k + j;
            g.tab_.zc(k + j)[r >> 6] |= uint64_t{1} << (r & 63);
        }
        // Only the S columns of the Bell rows are needed for the fidelity.
        g.bell_ = Columns(n, 2 * k);
        for (size_t i = 0; i < k; i++) {
            size_t rx = 2 * i;
            size_t rz = 2 * i + 1;
            g.bell_.xc(i)[rx >> 6] |= uint64_t{1} << (rx & 63);
            g.bell_.zc(i)[rz >> 6] |= uint64_t{1} << (rz & 63);
        }
    }
    size_t live = c == InitCase::PureAll ? 2 * k + (n - k) : initial_rows;
    for (size_t r = 0; r < live; r++) {
        g.present_.set(r);
        g.as_.set(r);
    }
    return g;
}

BitVector GeneratorSet::column_bits(const uint64_t *col) const {
    BitVector out(present_.size());
    auto w = out.words();
    std::copy_n(col, w.size(), w.begin());
    return out;
}

std::vector<PauliString> GeneratorSet::rows() const {
    std::vector<PauliString> out;
    present_.for_each_set([&](size_t r) { out.push_back(tab_.row(r, 0, width())); });
    return out;
}

std::vector<RowLabel> GeneratorSet::labels() const {
    std::vector<RowLabel> out;
    present_.for_each_set([&](size_t r) { out.push_back(as_.get(r) ? RowLabel::AS : RowLabel::PERP); });
    return out;
}

std::vector<PauliString> GeneratorSet::as_rows() const {
    std::vector<PauliString> out;
    (present_ & as_).for_each_set([&](size_t r) { out.push_back(tab_.row(r, 0, width())); });
    return out;
}

std::vector<PauliString> GeneratorSet::bell_rows_on_s() const {
    std::vector<PauliString> out;
    if (case_ == InitCase::MixedS2MixedE) {
        present_.for_each_set([&](size_t r) { out.push_back(tab_.row(r, k_, width())); });
    } else {
        for (size_t r = 0; r < 2 * k_; r++) {
            out.push_back(bell_.row(r, 0, n_));
        }
    }
    return out;
}

void GeneratorSet::apply_gate(const TwoQubitClifford &g, size_t i, size_t j) {
    if (i == j || i >= n_ || j >= n_) {
        throw std::invalid_argument("apply_gate: invalid site pair");
    }
    tab_.apply_gate(g, k_ + i, k_ + j);
    if (case_ != InitCase::MixedS2MixedE) {
        bell_.apply_gate(g, i, j);
    }
}

void GeneratorSet::apply_layer(Parity parity, RandomStream &rng) {
    size_t first = parity == Parity::even ? 0 : 1;
    for (size_t left = first; left < n_; left += 2) {
        apply_gate(sample_clifford(rng), left, pair_right(left, n_));
    }
}

void GeneratorSet::apply_swap(size_t site) {
    if (site >= n_) {
        throw std::out_of_range("apply_swap: site outside system");
    }
    size_t col = k_ + site;
    BitVector active = present_ & as_;
    std::vector<size_t> pivots;

    BitVector xs = column_bits(tab_.xc(col)) & active;
    if (xs.any()) {
        size_t a = xs.indices().front();
        xs.flip(a);
        tab_.add_row_to(a, xs);
        pivots.push_back(a);
        active.flip(a);
    }
    BitVector zs = column_bits(tab_.zc(col)) & active;
    if (zs.any()) {
        size_t b = zs.indices().front();
        zs.flip(b);
        tab_.add_row_to(b, zs);
        pivots.push_back(b);
    }

    for (size_t r : pivots) {
        as_.set(r, false);
        if (case_ == InitCase::PureAll) {
            present_.set(r, false);
            tab_.clear_row(r);
        }
    }
    tab_.clear_column(col);
    if (case_ == InitCase::PureAll) {
        // The fresh |0> now at `site` contributes Z_site.
        BitVector free_slots = ~present_;
        if (free_slots.none()) {
            throw std::logic_error("apply_swap: no free generator slot for the fresh qubit");
        }
        size_t r = free_slots.indices().front();
        tab_.zc(col)[r >> 6] |= uint64_t{1} << (r & 63);
        present_.set(r);
        as_.set(r);
    }
    if (case_ != InitCase::MixedS2MixedE) {
        bell_.clear_column(site);
    }
    n_env_++;
}

std::vector<size_t> GeneratorSet::apply_swaps(double p, RandomStream &rng) {
    std::vector<size_t> sites;
    for (size_t s = 0; s < n_; s++) {
        if (rng.bernoulli(p)) {
            apply_swap(s);
            sites.push_back(s);
        }
    }
    return sites;
}

int64_t GeneratorSet::entropy(Region r) const {
    auto k = static_cast<int64_t>(k_);
    auto n = static_cast<int64_t>(n_);
    auto ne = static_cast<int64_t>(n_env_);
    auto d = static_cast<int64_t>(d_total());
    BitVector as_rows_mask = present_ & as_;
    auto n_as = static_cast<int64_t>(as_rows_mask.popcount());
    auto rank_a_of_as = [&] { return static_cast<int64_t>(tab_.rank(as_rows_mask, 0, k_)); };
    auto rank_s_of_as = [&] { return static_cast<int64_t>(tab_.rank(as_rows_mask, k_, width())); };

    if (case_ == InitCase::PureAll) {
        // Globally pure: H_E = H_AS and H_AE = H_S.
        if (r == Region::E) {
            r = Region::AS;
        } else if (r == Region::AE) {
            r = Region::S;
        }
    }
    switch (r) {
        case Region::A:
            return k - n_as + rank_s_of_as();
        case Region::S:
            return n - n_as + rank_a_of_as();
        case Region::AS:
            return k + n - n_as;
        case Region::E:
            return ne - d + static_cast<int64_t>(tab_.rank(present_, 0, width()));
        case Region::AE:
            return k + ne - d + static_cast<int64_t>(tab_.rank(present_, k_, width()));
    }
    throw std::logic_error("entropy: unknown region");
}

size_t GeneratorSet::bell_support_rank() const {
    if (case_ == InitCase::MixedS2MixedE) {
        return tab_.rank(present_, k_, width());
    }
    BitVector all(2 * k_);
    for (size_t r = 0; r < 2 * k_; r++) {
        all.set(r);
    }
    return bell_.rank(all, 0, n_);
}

bool GeneratorSet::check_invariants(std::string *why) const {
    auto fail = [&](const std::string &msg) {
        if (why) {
            *why = msg;
        }
        return false;
    };
    std::vector<PauliString> as = as_rows();
    std::vector<BitVector> packed;
    for (const auto &row : as) {
        BitVector v(2 * width());
        row.xs().for_each_set([&](size_t c) { v.set(c); });
        row.zs().for_each_set([&](size_t c) { v.set(width() + c); });
        packed.push_back(std::move(v));
    }
    if (gf2::rank(packed) != as.size()) {
        return fail("AS rows are linearly dependent");
    }
    std::vector<PauliString> all = rows();
    for (size_t a = 0; a < as.size(); a++) {
        for (size_t b = 0; b < all.size(); b++) {
            if (!commutes(as[a], all[b])) {
                return fail("AS row " + as[a].str() + " anticommutes with " + all[b].str());
            }
        }
    }
    if (case_ == InitCase::PureAll && (present_ & ~as_).any()) {
        return fail("PERP row present in the pure case");
    }
    return true;
}

InfoResult coherent_info(const GeneratorSet &state) {
    InfoResult out;
    out.H_A = state.entropy(Region::A);
    out.H_S = state.entropy(Region::S);
    out.H_AS = state.entropy(Region::AS);
    out.H_E = state.entropy(Region::E);
    out.H_AE = state.entropy(Region::AE);
    out.Ic_E = out.H_E - out.H_AE;
    out.Ic_S = out.H_S - out.H_AS;
    out.fidelity_rank = static_cast<int64_t>(state.bell_support_rank());
    out.F = std::ldexp(1.0, -static_cast<int>(out.fidelity_rank));
    if (state.init_case() == InitCase::PureAll) {
        auto k = static_cast<int>(state.num_reference());
        auto n = static_cast<int>(state.num_system());
        out.P_succ = std::ldexp(1.0, k - n - static_cast<int>(out.H_E));
        out.F_pure = std::ldexp(1.0, static_cast<int>(out.Ic_E) - k);
    }
    return out;
}

double decode_fidelity(const GeneratorSet &state) {
    return std::ldexp(1.0, -static_cast<int>(state.bell_support_rank()));
}

PurityReport purity_identities(const GeneratorSet &state) {
    PurityReport out;
    auto k = static_cast<int64_t>(state.num_reference());
    auto n = static_cast<int64_t>(state.num_system());
    switch (state.init_case()) {
        case InitCase::MixedS2MixedE: {
            int64_t h_ae = state.entropy(Region::AE);
            out.log2_purity_AE = -h_ae;
            out.log2_fidelity_from_purity = static_cast<int64_t>(state.n_env()) - k - h_ae;
            break;
        }
        case InitCase::PureAll: {
            int64_t h_e = state.entropy(Region::E);
            int64_t h_ae = state.entropy(Region::AE);
            out.log2_P_succ = k - n - h_e;
            out.log2_F_pure = (h_e - h_ae) - k;
            break;
        }
        case InitCase::PureS2MixedE:
            throw std::logic_error("purity identities hold for cases i and iii only");
    }
    return out;
}

}  // namespace radperc
