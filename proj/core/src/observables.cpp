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

#include "radperc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "radperc/lattice.hpp"

namespace radperc {

double otoc_prefactor(LocalDim q, double trace_rho_xb2) {
    if (trace_rho_xb2 < 0) {
        throw std::invalid_argument("tr{rho0 [X^b]^2} must be nonnegative");
    }
    if (q.is_infinite()) {
        return 1.0;
    }
    double q2 = static_cast<double>(q.value()) * q.value();
    return (1.0 + trace_rho_xb2) / (q2 - 1.0);
}

double otoc_from_occupation(double mean_occ, LocalDim q, double trace_rho_xb2) {
    return otoc_prefactor(q, trace_rho_xb2) * mean_occ;
}

EnsembleAccumulator::EnsembleAccumulator(size_t n, size_t depth, size_t origin, std::vector<size_t> otoc_times)
    : n_(n),
      depth_(depth),
      origin_(origin % n),
      otoc_times_(std::move(otoc_times)),
      occ_sum_(depth + 1, 0),
      occ_sq_(depth + 1, 0),
      alive_(depth + 1, 0),
      x2_sum_(depth + 1, 0),
      x2_sq_(depth + 1, 0),
      front_sum_(depth + 1, 0),
      front_sq_(depth + 1, 0),
      otoc_counts_(otoc_times_.size(), std::vector<uint64_t>(n, 0)) {
    std::sort(otoc_times_.begin(), otoc_times_.end());
    otoc_times_.erase(std::unique(otoc_times_.begin(), otoc_times_.end()), otoc_times_.end());
    otoc_counts_.resize(otoc_times_.size());
    for (size_t t : otoc_times_) {
        if (t > depth) {
            throw std::invalid_argument("OTOC slice time beyond depth");
        }
    }
}

void EnsembleAccumulator::record(size_t t, const BitVector &occ) {
    if (t > depth_ || occ.size() != n_) {
        throw std::invalid_argument("EnsembleAccumulator::record: time or width out of range");
    }
    uint64_t count = 0;
    uint64_t x2 = 0;
    int64_t front = std::numeric_limits<int64_t>::min();
    auto slice = std::lower_bound(otoc_times_.begin(), otoc_times_.end(), t);
    std::vector<uint64_t> *profile = nullptr;
    if (slice != otoc_times_.end() && *slice == t) {
        profile = &otoc_counts_[static_cast<size_t>(slice - otoc_times_.begin())];
    }
    auto half = static_cast<int64_t>(n_ / 2);
    occ.for_each_set([&](size_t x) {
        int64_t d = signed_displacement(x, origin_, n_);
        count++;
        x2 += static_cast<uint64_t>(d * d);
        front = std::max(front, d);
        if (profile) {
            (*profile)[static_cast<size_t>(d + half)]++;
        }
    });
    occ_sum_[t] += count;
    occ_sq_[t] += count * count;
    x2_sum_[t] += x2;
    x2_sq_[t] += static_cast<uint128>(x2) * x2;
    if (count > 0) {
        alive_[t]++;
        front_sum_[t] += front;
        front_sq_[t] += static_cast<uint64_t>(front * front);
    }
}

void EnsembleAccumulator::merge(const EnsembleAccumulator &other) {
    if (other.n_ != n_ || other.depth_ != depth_ || other.origin_ != origin_ || other.otoc_times_ != otoc_times_) {
        throw std::invalid_argument("EnsembleAccumulator::merge: incompatible accumulators");
    }
    n_traj_ += other.n_traj_;
    for (size_t t = 0; t <= depth_; t++) {
        occ_sum_[t] += other.occ_sum_[t];
        occ_sq_[t] += other.occ_sq_[t];
        alive_[t] += other.alive_[t];
        x2_sum_[t] += other.x2_sum_[t];
        x2_sq_[t] += other.x2_sq_[t];
        front_sum_[t] += other.front_sum_[t];
        front_sq_[t] += other.front_sq_[t];
    }
    for (size_t i = 0; i < otoc_counts_.size(); i++) {
        for (size_t x = 0; x < n_; x++) {
            otoc_counts_[i][x] += other.otoc_counts_[i][x];
        }
    }
}

namespace {

struct MeanSem {
    double mean;
    double sem;
    double sd;
};

// Sample mean, standard error and standard deviation from a sum and a sum of squares.
MeanSem from_sums(long double sum, long double sq, uint64_t n) {
    if (n == 0) {
        double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan, nan};
    }
    long double mean = sum / n;
    if (n == 1) {
        return {static_cast<double>(mean), 0.0, 0.0};
    }
    long double var = (sq - sum * mean) / (n - 1);
    if (var < 0) {
        var = 0;
    }
    return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / n)), static_cast<double>(std::sqrt(var))};
}

}  // namespace

Curves finalize(const EnsembleAccumulator &acc, double prefactor) {
    uint64_t n = acc.n_traj();
    if (n == 0) {
        throw std::invalid_argument("finalize: empty ensemble");
    }
    Curves c;
    c.prefactor = prefactor;
    c.n_traj = n;
    auto sites = static_cast<long double>(acc.num_sites());
    long double scale = prefactor / sites;
    for (size_t t = 0; t <= acc.depth(); t++) {
        c.t.push_back(t);
        MeanSem rho = from_sums(acc.occ_sum()[t], acc.occ_sq()[t], n);
        c.rho.push_back(static_cast<double>(rho.mean * scale));
        c.rho_sem.push_back(static_cast<double>(rho.sem * scale));

        double surv = static_cast<double>(acc.alive()[t]) / static_cast<double>(n);
        c.P.push_back(surv);
        c.P_sem.push_back(std::sqrt(surv * (1.0 - surv) / static_cast<double>(n)));

        MeanSem r2 = from_sums(static_cast<long double>(acc.x2_sum()[t]), static_cast<long double>(acc.x2_sq()[t]), n);
        c.R2.push_back(static_cast<double>(r2.mean * scale));
        c.R2_sem.push_back(static_cast<double>(r2.sem * scale));

        MeanSem front = from_sums(acc.front_sum()[t], acc.front_sq()[t], acc.alive()[t]);
        c.front.push_back(front.mean);
        c.front_sem.push_back(front.sem);
        c.front_std.push_back(front.sd);
        c.alive.push_back(acc.alive()[t]);

        c.R2_mass.push_back(acc.occ_sum()[t] == 0 ? std::numeric_limits<double>::quiet_NaN()
                                                  : static_cast<double>(static_cast<long double>(acc.x2_sum()[t]) /
                                                                        acc.occ_sum()[t]));
    }
    auto half = static_cast<int64_t>(acc.num_sites() / 2);
    for (size_t i = 0; i < acc.otoc_times().size(); i++) {
        OtocSlice s;
        s.t = acc.otoc_times()[i];
        for (size_t idx = 0; idx < acc.num_sites(); idx++) {
            double f = static_cast<double>(acc.otoc_counts()[i][idx]) / static_cast<double>(n);
            s.x.push_back(static_cast<int64_t>(idx) - half);
            s.C_mean.push_back(prefactor * f);
            s.C_sem.push_back(prefactor * std::sqrt(f * (1.0 - f) / static_cast<double>(n)));
        }
        c.otoc.push_back(std::move(s));
    }
    return c;
}

FidelityCurve fidelity_from_survival(const std::vector<double> &p1, const std::vector<double> &pk, size_t k) {
    if (k < 1) {
        throw std::invalid_argument("fidelity_from_survival: k must be >= 1");
    }
    const std::vector<double> &block = k == 1 && pk.empty() ? p1 : pk;
    if (block.size() != p1.size()) {
        throw std::invalid_argument("fidelity_from_survival: survival curves differ in length");
    }
    double weight = 1.0 - std::ldexp(1.0, -2 * static_cast<int>(std::min<size_t>(k, 512)));
    FidelityCurve out;
    for (size_t i = 0; i < p1.size(); i++) {
        if (p1[i] < 0 || p1[i] > 1 || block[i] < 0 || block[i] > 1) {
            throw std::invalid_argument("fidelity_from_survival: survival outside [0, 1]");
        }
        out.lower.push_back(1.0 - weight * block[i]);
        out.upper.push_back(1.0 - weight * p1[i]);
        if (k == 1) {
            out.law.push_back(1.0 - 0.75 * p1[i]);
        }
    }
    return out;
}

}  // namespace radperc
