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

#include <Eigen/Dense>
#include <complex>
#include <deque>
#include <map>
#include <stdexcept>

namespace radperc {

namespace oracle {

MarkovKernel::MarkovKernel(size_t n, LocalDim q, double p) : n_(n) {
    require_even_ring(n);
    if (n > max_sites) {
        throw std::invalid_argument("MarkovKernel: N exceeds the exact-evolution limit of 14");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("MarkovKernel: p outside [0, 1]");
    }
    // Gate output given an occupied input: both edges, left only, right only.
    double both = 1.0;
    double one = 0.0;
    if (!q.is_infinite()) {
        double q2 = static_cast<double>(q.value()) * q.value();
        double nontrivial = q2 * q2 - 1.0;
        both = (q2 - 1.0) * (q2 - 1.0) / nontrivial;
        one = (q2 - 1.0) / nontrivial;
    }
    std::array<double, 4> gate_out = {0.0, one, one, both};
    local_[0][0] = 1.0;
    for (int in = 1; in < 4; in++) {
        for (int pre = 1; pre < 4; pre++) {
            for (int out = 0; out < 4; out++) {
                if ((out & ~pre) != 0) {
                    continue;
                }
                double w = gate_out[static_cast<size_t>(pre)];
                for (int e = 0; e < 2; e++) {
                    if ((pre >> e) & 1) {
                        w *= ((out >> e) & 1) ? (1.0 - p) : p;
                    }
                }
                local_[static_cast<size_t>(in)][static_cast<size_t>(out)] += w;
            }
        }
    }
}

void MarkovKernel::apply(std::vector<double> &dist, Parity parity) const {
    if (dist.size() != (size_t{1} << n_)) {
        throw std::invalid_argument("MarkovKernel::apply: distribution has wrong size");
    }
    std::vector<double> next(dist.size());
    for (size_t left = parity == Parity::even ? 0 : 1; left < n_; left += 2) {
        size_t right = pair_right(left, n_);
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t s = 0; s < dist.size(); s++) {
            if (dist[s] == 0.0) {
                continue;
            }
            size_t in = ((s >> left) & 1) | (((s >> right) & 1) << 1);
            size_t base = s & ~((size_t{1} << left) | (size_t{1} << right));
            for (size_t out = 0; out < 4; out++) {
                double w = local_[in][out];
                if (w != 0.0) {
                    size_t to = base | ((out & 1) << left) | (((out >> 1) & 1) << right);
                    next[to] += dist[s] * w;
                }
            }
        }
        dist.swap(next);
    }
}

std::vector<double> MarkovKernel::dense(Parity parity) const {
    if (n_ > 8) {
        throw std::invalid_argument("MarkovKernel::dense: N too large");
    }
    size_t dim = size_t{1} << n_;
    std::vector<double> m(dim * dim);
    for (size_t from = 0; from < dim; from++) {
        std::vector<double> e(dim, 0.0);
        e[from] = 1.0;
        apply(e, parity);
        std::copy(e.begin(), e.end(), m.begin() + static_cast<std::ptrdiff_t>(from * dim));
    }
    return m;
}

ExactCurves exact_density(size_t n, LocalDim q, double p, const InitialCondition &init, size_t t_max) {
    MarkovKernel kernel(n, q, p);
    BitVector occ = initial_occupation(init, n);
    size_t start = 0;
    occ.for_each_set([&](size_t x) { start |= size_t{1} << x; });
    std::vector<double> dist(size_t{1} << n, 0.0);
    dist[start] = 1.0;
    ExactCurves out;
    auto record = [&] {
        double mean = 0;
        for (size_t s = 0; s < dist.size(); s++) {
            mean += dist[s] * static_cast<double>(std::popcount(s));
        }
        out.rho.push_back(mean / static_cast<double>(n));
        out.P.push_back(1.0 - dist[0]);
    };
    record();
    for (size_t t = 1; t <= t_max; t++) {
        kernel.apply(dist, parity_of_layer(t - 1));
        record();
    }
    return out;
}

namespace {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

Mat single_pauli(uint8_t code) {
    Mat m(2, 2);
    switch (code & 3) {
        case 0:
            m << 1, 0, 0, 1;
            break;
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 1, 0, 0, -1;
            break;
        default:
            m << 0, cd(0, -1), cd(0, 1), 0;
            break;
    }
    return m;
}

Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// Site 0 is the leftmost (most significant) tensor factor.
Mat dense_pauli(const PauliString &s) {
    Mat m = Mat::Identity(1, 1);
    for (size_t i = 0; i < s.size(); i++) {
        m = kron(m, single_pauli(s.raw_at(i)));
    }
    return m;
}

PauliString identify(const Mat &m, size_t n) {
    size_t total = size_t{1} << (2 * n);
    double dim = static_cast<double>(size_t{1} << n);
    for (size_t code = 0; code < total; code++) {
        PauliString q(n);
        for (size_t s = 0; s < n; s++) {
            q.set_raw(s, static_cast<uint8_t>((code >> (2 * s)) & 3));
        }
        cd overlap = (dense_pauli(q).adjoint() * m).trace() / dim;
        if (std::abs(std::abs(overlap) - 1.0) < 1e-9) {
            return q;
        }
    }
    throw std::runtime_error("dense conjugation result is not a Pauli string");
}

std::array<TwoSitePauli, 4> dense_images(const Mat &u) {
    std::array<TwoSitePauli, 4> images{};
    const std::array<TwoSitePauli, 4> inputs = {0b0001, 0b0010, 0b0100, 0b1000};
    for (size_t b = 0; b < 4; b++) {
        PauliString in(2);
        in.set_raw(0, inputs[b] & 3);
        in.set_raw(1, (inputs[b] >> 2) & 3);
        PauliString out = identify(u.adjoint() * dense_pauli(in) * u, 2);
        images[b] = static_cast<TwoSitePauli>(out.raw_at(0) | (out.raw_at(1) << 2));
    }
    return images;
}

const std::map<std::array<TwoSitePauli, 4>, Mat> &unitary_table() {
    static const std::map<std::array<TwoSitePauli, 4>, Mat> table = [] {
        Mat h(2, 2);
        double r = 1.0 / std::sqrt(2.0);
        h << r, r, r, -r;
        Mat s(2, 2);
        s << 1, 0, 0, cd(0, 1);
        Mat id = Mat::Identity(2, 2);
        Mat cx = Mat::Zero(4, 4);
        cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1;
        std::vector<Mat> gens = {kron(h, id), kron(id, h), kron(s, id), kron(id, s), cx};

        std::map<std::array<TwoSitePauli, 4>, Mat> out;
        std::deque<Mat> queue;
        Mat start = Mat::Identity(4, 4);
        out.emplace(dense_images(start), start);
        queue.push_back(start);
        while (!queue.empty()) {
            Mat u = queue.front();
            queue.pop_front();
            for (const Mat &g : gens) {
                Mat v = u * g;
                auto key = dense_images(v);
                if (out.emplace(key, v).second) {
                    queue.push_back(v);
                }
            }
        }
        return out;
    }();
    return table;
}

}  // namespace

size_t dense_clifford_group_size() {
    return unitary_table().size();
}

PauliString dense_conjugate(size_t n, const TwoQubitClifford &g, std::pair<size_t, size_t> sites,
                            const PauliString &s) {
    if (n > 3 || s.size() != n) {
        throw std::invalid_argument("dense_conjugate: supports n <= 3 matching the string width");
    }
    auto [i, j] = sites;
    if (i == j || i >= n || j >= n) {
        throw std::invalid_argument("dense_conjugate: invalid sites");
    }
    auto it = unitary_table().find(g.images());
    if (it == unitary_table().end()) {
        throw std::runtime_error("dense_conjugate: gate not reached by the generator closure");
    }
    const Mat &u = it->second;
    size_t dim = size_t{1} << n;
    auto bit = [&](size_t state, size_t site) { return (state >> (n - 1 - site)) & 1; };
    Mat big = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    size_t pair_mask = (size_t{1} << (n - 1 - i)) | (size_t{1} << (n - 1 - j));
    for (size_t a = 0; a < dim; a++) {
        for (size_t b = 0; b < dim; b++) {
            if ((a & ~pair_mask) != (b & ~pair_mask)) {
                continue;
            }
            size_t ua = 2 * bit(a, i) + bit(a, j);
            size_t ub = 2 * bit(b, i) + bit(b, j);
            big(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                u(static_cast<Eigen::Index>(ua), static_cast<Eigen::Index>(ub));
        }
    }
    return identify(big.adjoint() * dense_pauli(s) * big, n);
}

bool dense_commutes(const PauliString &a, const PauliString &b) {
    if (a.size() != b.size() || a.size() > 3) {
        throw std::invalid_argument("dense_commutes: equal widths <= 3 required");
    }
    Mat ma = dense_pauli(a);
    Mat mb = dense_pauli(b);
    return (ma * mb - mb * ma).norm() < 1e-9;
}

size_t naive_rank(std::vector<std::vector<uint8_t>> rows) {
    if (rows.empty()) {
        return 0;
    }
    size_t width = rows.front().size();
    size_t rank = 0;
    for (size_t c = 0; c < width && rank < rows.size(); c++) {
        for (uint8_t b : {uint8_t{1}, uint8_t{2}}) {
            size_t pivot = rank;
            while (pivot < rows.size() && !(rows[pivot][c] & b)) {
                pivot++;
            }
            if (pivot == rows.size()) {
                continue;
            }
            std::swap(rows[pivot], rows[rank]);
            for (size_t r = 0; r < rows.size(); r++) {
                if (r != rank && (rows[r][c] & b)) {
                    for (size_t cc = 0; cc < width; cc++) {
                        rows[r][cc] ^= rows[rank][cc];
                    }
                }
            }
            rank++;
            if (rank == rows.size()) {
                break;
            }
        }
    }
    return rank;
}

FullTableau FullTableau::init(InitCase c, size_t n, size_t k) {
    require_even_ring(n);
    if (k < 1 || k > n) {
        throw std::invalid_argument("FullTableau: need 1 <= k <= N");
    }
    FullTableau t;
    t.case_ = c;
    t.n_ = n;
    t.k_ = k;
    for (size_t i = 0; i < k; i++) {
        std::vector<uint8_t> xx(k + n, 0);
        std::vector<uint8_t> zz(k + n, 0);
        xx[i] = xx[k + i] = 1;
        zz[i] = zz[k + i] = 2;
        t.rows_.push_back(xx);
        t.rows_.push_back(zz);
    }
    if (c != InitCase::MixedS2MixedE) {
        for (size_t j = k; j < n; j++) {
            std::vector<uint8_t> z(k + n, 0);
            z[k + j] = 2;
            t.rows_.push_back(z);
        }
    }
    return t;
}

void FullTableau::apply_gate(const TwoQubitClifford &g, size_t i, size_t j) {
    if (i == j || i >= n_ || j >= n_) {
        throw std::invalid_argument("FullTableau::apply_gate: invalid sites");
    }
    size_t ci = k_ + i;
    size_t cj = k_ + j;
    for (auto &row : rows_) {
        TwoSitePauli in = static_cast<TwoSitePauli>(row[ci] | (row[cj] << 2));
        TwoSitePauli out = g.image(in);
        row[ci] = out & 3;
        row[cj] = (out >> 2) & 3;
    }
}

void FullTableau::apply_swap(size_t site) {
    if (site >= n_) {
        throw std::out_of_range("FullTableau::apply_swap: site outside system");
    }
    for (auto &row : rows_) {
        row.push_back(0);
    }
    size_t e = width();
    n_env_++;
    if (case_ == InitCase::PureAll) {
        std::vector<uint8_t> z(e + 1, 0);
        z[e] = 2;
        rows_.push_back(z);
    }
    size_t col = k_ + site;
    for (auto &row : rows_) {
        std::swap(row[col], row[e]);
    }
}

std::vector<size_t> FullTableau::columns(Region r) const {
    std::vector<size_t> out;
    auto add = [&](size_t lo, size_t hi) {
        for (size_t c = lo; c < hi; c++) {
            out.push_back(c);
        }
    };
    size_t a_end = k_;
    size_t s_end = k_ + n_;
    switch (r) {
        case Region::A:
            add(0, a_end);
            break;
        case Region::S:
            add(a_end, s_end);
            break;
        case Region::AS:
            add(0, s_end);
            break;
        case Region::E:
            add(s_end, width());
            break;
        case Region::AE:
            add(0, a_end);
            add(s_end, width());
            break;
    }
    return out;
}

std::vector<size_t> FullTableau::complement(Region r) const {
    std::vector<size_t> in = columns(r);
    std::vector<bool> mark(width(), false);
    for (size_t c : in) {
        mark[c] = true;
    }
    std::vector<size_t> out;
    for (size_t c = 0; c < width(); c++) {
        if (!mark[c]) {
            out.push_back(c);
        }
    }
    return out;
}

namespace {

std::vector<std::vector<uint8_t>> restrict_rows(const std::vector<std::vector<uint8_t>> &rows,
                                                const std::vector<size_t> &cols) {
    std::vector<std::vector<uint8_t>> out;
    for (const auto &row : rows) {
        std::vector<uint8_t> r;
        for (size_t c : cols) {
            r.push_back(row[c]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

int64_t FullTableau::entropy_by_rank(Region r) const {
    auto n_r = static_cast<int64_t>(columns(r).size());
    auto d = static_cast<int64_t>(rows_.size());
    return n_r - d + static_cast<int64_t>(naive_rank(restrict_rows(rows_, complement(r))));
}

std::vector<std::vector<uint8_t>> FullTableau::subgroup(Region r) const {
    std::vector<size_t> outside = complement(r);
    std::vector<size_t> inside = columns(r);
    size_t d = rows_.size();
    // Reduce the outside-restricted rows while tracking which generators were combined; rows
    // that vanish give the kernel of the projection.
    struct Reduced {
        std::vector<uint8_t> v;
        std::vector<uint8_t> combo;
        size_t pivot_col;
        uint8_t pivot_bit;
    };
    std::vector<Reduced> basis;
    std::vector<std::vector<uint8_t>> kernel;
    auto restricted = restrict_rows(rows_, outside);
    for (size_t i = 0; i < d; i++) {
        std::vector<uint8_t> v = restricted[i];
        std::vector<uint8_t> combo(d, 0);
        combo[i] = 1;
        for (const auto &b : basis) {
            if (v[b.pivot_col] & b.pivot_bit) {
                for (size_t c = 0; c < v.size(); c++) {
                    v[c] ^= b.v[c];
                }
                for (size_t c = 0; c < d; c++) {
                    combo[c] ^= b.combo[c];
                }
            }
        }
        size_t pc = v.size();
        uint8_t pb = 0;
        for (size_t c = 0; c < v.size() && pc == v.size(); c++) {
            if (v[c]) {
                pc = c;
                pb = (v[c] & 1) ? 1 : 2;
            }
        }
        if (pc == v.size()) {
            kernel.push_back(std::move(combo));
        } else {
            // Keep the basis fully reduced on pivots so later rows reduce in one pass.
            for (auto &b : basis) {
                if (b.v[pc] & pb) {
                    for (size_t c = 0; c < v.size(); c++) {
                        b.v[c] ^= v[c];
                    }
                    for (size_t c = 0; c < d; c++) {
                        b.combo[c] ^= combo[c];
                    }
                }
            }
            basis.push_back({std::move(v), std::move(combo), pc, pb});
        }
    }
    std::vector<std::vector<uint8_t>> out;
    for (const auto &combo : kernel) {
        std::vector<uint8_t> prod(width(), 0);
        for (size_t i = 0; i < d; i++) {
            if (combo[i]) {
                for (size_t c = 0; c < width(); c++) {
                    prod[c] ^= rows_[i][c];
                }
            }
        }
        for (size_t c : outside) {
            if (prod[c]) {
                throw std::logic_error("FullTableau::subgroup: kernel element has support outside the region");
            }
        }
        std::vector<uint8_t> r;
        for (size_t c : inside) {
            r.push_back(prod[c]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

int64_t FullTableau::entropy_by_subgroup(Region r) const {
    auto n_r = static_cast<int64_t>(columns(r).size());
    auto g = subgroup(r);
    return n_r - static_cast<int64_t>(naive_rank(g));
}

size_t FullTableau::bell_support_rank() const {
    std::vector<std::vector<uint8_t>> bell(rows_.begin(), rows_.begin() + static_cast<std::ptrdiff_t>(2 * k_));
    return naive_rank(restrict_rows(bell, columns(Region::S)));
}

bool FullTableau::generators_commute() const {
    for (size_t a = 0; a < rows_.size(); a++) {
        for (size_t b = a + 1; b < rows_.size(); b++) {
            int parity = 0;
            for (size_t c = 0; c < width(); c++) {
                uint8_t x = rows_[a][c];
                uint8_t y = rows_[b][c];
                parity ^= ((x & 1) & (y >> 1)) ^ ((x >> 1) & (y & 1));
            }
            if (parity) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace oracle

}  // namespace radperc
