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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "radperc/bits.hpp"
#include "radperc/dp.hpp"

namespace radperc {

/// Averaged OTOC per unit occupation, (1 + tr{rho0 [X^b]^2}) / (q^2 - 1). In the q -> infinity
/// limit the prefactor vanishes; 1 is returned so that curves report the occupation density.
double otoc_prefactor(LocalDim q, double trace_rho_xb2 = 1.0);

double otoc_from_occupation(double mean_occ, LocalDim q, double trace_rho_xb2 = 1.0);

/// Integer sums over trajectories of one ensemble. Merging is exact and order-independent.
class EnsembleAccumulator {
   public:
    EnsembleAccumulator() = default;
    /// Times t = 0 .. depth on a ring of n sites; displacements measured from `origin`. Full
    /// OTOC profiles are kept only at `otoc_times`.
    EnsembleAccumulator(size_t n, size_t depth, size_t origin, std::vector<size_t> otoc_times = {});

    /// Occupation of the current trajectory at time t. Times not recorded count as empty.
    void record(size_t t, const BitVector &occ);
    void finish_trajectory() {
        n_traj_++;
    }
    void merge(const EnsembleAccumulator &other);

    size_t num_sites() const {
        return n_;
    }
    size_t depth() const {
        return depth_;
    }
    size_t origin() const {
        return origin_;
    }
    uint64_t n_traj() const {
        return n_traj_;
    }
    const std::vector<size_t> &otoc_times() const {
        return otoc_times_;
    }

    const std::vector<uint64_t> &occ_sum() const {
        return occ_sum_;
    }
    const std::vector<uint64_t> &occ_sq() const {
        return occ_sq_;
    }
    const std::vector<uint64_t> &alive() const {
        return alive_;
    }
    const std::vector<uint128> &x2_sum() const {
        return x2_sum_;
    }
    const std::vector<uint128> &x2_sq() const {
        return x2_sq_;
    }
    const std::vector<int64_t> &front_sum() const {
        return front_sum_;
    }
    const std::vector<uint64_t> &front_sq() const {
        return front_sq_;
    }
    /// Occupation counts at otoc_times()[i], indexed by displacement + n/2.
    const std::vector<std::vector<uint64_t>> &otoc_counts() const {
        return otoc_counts_;
    }

    bool operator==(const EnsembleAccumulator &) const = default;

   private:
    size_t n_ = 0;
    size_t depth_ = 0;
    size_t origin_ = 0;
    uint64_t n_traj_ = 0;
    std::vector<size_t> otoc_times_;
    std::vector<uint64_t> occ_sum_;
    std::vector<uint64_t> occ_sq_;
    std::vector<uint64_t> alive_;
    std::vector<uint128> x2_sum_;
    std::vector<uint128> x2_sq_;
    std::vector<int64_t> front_sum_;
    std::vector<uint64_t> front_sq_;
    std::vector<std::vector<uint64_t>> otoc_counts_;
};

struct OtocSlice {
    size_t t = 0;
    std::vector<int64_t> x;
    std::vector<double> C_mean;
    std::vector<double> C_sem;
};

struct Curves {
    double prefactor = 1;
    uint64_t n_traj = 0;
    std::vector<size_t> t;
    std::vector<double> rho, rho_sem;
    std::vector<double> P, P_sem;
    std::vector<double> R2, R2_sem;
    /// Rightmost occupied displacement, averaged over surviving trajectories (NaN if none).
    std::vector<double> front, front_sem;
    /// Sum x^2 n_x / sum n_x over the ensemble.
    std::vector<double> R2_mass;
    std::vector<double> front_std;
    std::vector<uint64_t> alive;
    std::vector<OtocSlice> otoc;
};

/// Means and standard errors. rho and R2 carry the OTOC prefactor; sems are trajectory-level
/// sample errors (binomial for P).
Curves finalize(const EnsembleAccumulator &acc, double prefactor);

struct FidelityCurve {
    /// 1 - (3/4) P1(t); filled for k = 1 only.
    std::vector<double> law;
    /// 1 - (1 - 2^{-2k}) P_k(t).
    std::vector<double> lower;
    /// 1 - (1 - 2^{-2k}) P_1(t).
    std::vector<double> upper;
};

/// Pass an empty `pk` for k = 1.
FidelityCurve fidelity_from_survival(const std::vector<double> &p1, const std::vector<double> &pk, size_t k);

}  // namespace radperc
