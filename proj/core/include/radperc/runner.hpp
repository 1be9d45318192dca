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

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "radperc/analysis.hpp"
#include "radperc/dp.hpp"
#include "radperc/observables.hpp"
#include "radperc/stabilizer.hpp"

namespace radperc {

/// Invalid configuration; the CLI exits with status 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Failure reading or writing files; the CLI exits with status 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Mode { otoc, dp, decode, info, meanfield, fit, collapse };

Mode parse_mode(const std::string &text);
std::string to_string(Mode m);

/// Simulation backend for the fit and collapse modes.
enum class Engine { clifford, dp };

struct ExperimentConfig {
    Mode mode = Mode::otoc;
    size_t N = 64;
    size_t depth = 256;
    std::vector<double> p = {0.2};
    LocalDim q = LocalDim::of(2);
    size_t k = 1;
    /// "single" or "block" (k adjacent particles) for the dp engine.
    std::string init = "single";
    InitCase init_case = InitCase::MixedS2MixedE;
    uint64_t n_traj = 100;
    uint64_t seed = 1;
    size_t workers = 1;
    std::string out = "radperc_out";
    std::vector<size_t> otoc_times;
    /// Entropies are evaluated every `stride` layers in info mode (and at the final layer).
    size_t stride = 1;
    double p_c = 0.206;
    double fit_lo = 16;
    /// 0 selects depth / 4.
    double fit_hi = 0;
    Engine engine = Engine::clifford;

    /// Sets one key from text; `where` prefixes error messages.
    void set(const std::string &key, const std::string &value, const std::string &where);
    /// Throws ConfigError when the combination of values is unusable.
    void validate() const;
    /// Fit window: [fit_lo, fit_hi], with fit_hi = 0 meaning depth / 4.
    Window window() const;
    /// Collapse window: [fit_lo, fit_hi], with fit_hi = 0 meaning depth.
    Window collapse_window() const;
};

/// Flat key = value lines; '#' starts a comment. Errors carry "source:line:".
ExperimentConfig parse_config(std::istream &in, const std::string &source);
ExperimentConfig load_config(const std::filesystem::path &path);

/// Runs `n_traj` trajectories over `workers` threads. Each worker owns an accumulator made by
/// `make`, trajectory i is run by `run(i, acc)`, and the worker accumulators are merged into the
/// first. Merges must be exact so that the result is independent of scheduling.
template <typename Acc>
Acc run_parallel(uint64_t n_traj, size_t workers, const std::function<Acc()> &make,
                 const std::function<void(uint64_t, Acc &)> &run) {
    workers = std::max<size_t>(1, std::min<uint64_t>(workers, std::max<uint64_t>(n_traj, 1)));
    std::vector<Acc> local;
    for (size_t w = 0; w < workers; w++) {
        local.push_back(make());
    }
    std::atomic<uint64_t> next{0};
    auto body = [&](size_t w) {
        for (uint64_t i = next.fetch_add(1); i < n_traj; i = next.fetch_add(1)) {
            run(i, local[w]);
            local[w].finish_trajectory();
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> threads;
        std::exception_ptr error;
        std::mutex error_mutex;
        for (size_t w = 0; w < workers; w++) {
            threads.emplace_back([&, w] {
                try {
                    body(w);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    next.store(n_traj);
                }
            });
        }
        for (auto &t : threads) {
            t.join();
        }
        if (error) {
            std::rethrow_exception(error);
        }
    }
    for (size_t w = 1; w < workers; w++) {
        local[0].merge(local[w]);
    }
    return std::move(local[0]);
}

EnsembleAccumulator run_otoc_ensemble(size_t n, double p, size_t depth, uint64_t n_traj, uint64_t seed,
                                      size_t workers, const std::vector<size_t> &otoc_times = {});

EnsembleAccumulator run_dp_ensemble(const InitialCondition &init, LocalDim q, double p, size_t n, size_t depth,
                                    uint64_t n_traj, uint64_t seed, size_t workers,
                                    const std::vector<size_t> &otoc_times = {});

/// Histograms and sums over stabilizer realizations at a fixed set of times.
class InfoAccumulator {
   public:
    InfoAccumulator() = default;
    /// `with_entropies` false keeps only the fidelity.
    InfoAccumulator(size_t n, size_t k, std::vector<size_t> times, bool with_entropies);

    void record(size_t slot, const GeneratorSet &state);
    void finish_trajectory() {
        n_traj_++;
    }
    void merge(const InfoAccumulator &other);

    const std::vector<size_t> &times() const {
        return times_;
    }
    size_t k() const {
        return k_;
    }
    uint64_t n_traj() const {
        return n_traj_;
    }
    bool with_entropies() const {
        return with_entropies_;
    }
    /// Counts of r = bell_support_rank at times()[slot], r in [0, 2k].
    const std::vector<std::vector<uint64_t>> &rank_hist() const {
        return rank_hist_;
    }
    /// Counts of I_c(A>E) + k, in [0, 2k].
    const std::vector<std::vector<uint64_t>> &ic_e_hist() const {
        return ic_e_hist_;
    }
    const std::vector<std::vector<uint64_t>> &ic_s_hist() const {
        return ic_s_hist_;
    }
    /// Sums of H_A, H_S, H_AS, H_E, H_AE per slot.
    const std::vector<std::array<int64_t, 5>> &entropy_sums() const {
        return entropy_sums_;
    }

    bool operator==(const InfoAccumulator &) const = default;

   private:
    size_t n_ = 0;
    size_t k_ = 0;
    bool with_entropies_ = true;
    uint64_t n_traj_ = 0;
    std::vector<size_t> times_;
    std::vector<std::vector<uint64_t>> rank_hist_;
    std::vector<std::vector<uint64_t>> ic_e_hist_;
    std::vector<std::vector<uint64_t>> ic_s_hist_;
    std::vector<std::array<int64_t, 5>> entropy_sums_;
};

struct InfoCurves {
    std::vector<size_t> t;
    std::vector<double> Ic_E_mean, Ic_E_sem;
    std::vector<double> Ic_S_mean, Ic_S_sem;
    std::vector<double> F_mean, F_sem;
    /// Mean of log2 F.
    std::vector<double> log2_F_mean;
    std::vector<double> H_A, H_S, H_AS, H_E, H_AE;
    /// Mean of -log2 P_succ = N - k + H_E (pure case).
    std::vector<double> neg_log2_P_succ;
    /// Mean and sem of 2^{I_c(A>E) - k} (pure case).
    std::vector<double> F_pure_mean, F_pure_sem;
    /// Fraction of realizations with I_c(A>E) = k.
    std::vector<double> saturated;
};

InfoCurves finalize(const InfoAccumulator &acc, size_t n);

/// Recording times 0, stride, 2 stride, ..., plus depth.
std::vector<size_t> strided_times(size_t depth, size_t stride);

InfoAccumulator run_info_ensemble(InitCase c, size_t n, size_t k, double p, size_t depth,
                                  const std::vector<size_t> &times, bool with_entropies, uint64_t n_traj,
                                  uint64_t seed, size_t workers);

/// Shortest round-trip decimal form of a double.
std::string format_shortest(double v);
/// 17 significant digits.
std::string format_double(double v);
/// Subdirectory name for one swap rate, e.g. "p_0.206".
std::string p_directory(double p);

struct RunReport {
    std::vector<std::filesystem::path> files;
    double wall_seconds = 0;
    /// Analysis steps that could not be completed, copied into the manifest.
    std::vector<std::string> notes;
};

/// Executes the configured experiment and writes its files plus manifest.txt under cfg.out.
RunReport run(const ExperimentConfig &cfg);

std::string sha256_hex(const std::filesystem::path &path);

}  // namespace radperc
