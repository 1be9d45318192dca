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

#include "radperc/runner.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "radperc/clifford.hpp"
#include "radperc/rng.hpp"

#ifndef RADPERC_VERSION
#define RADPERC_VERSION "unknown"
#endif

namespace radperc {

namespace fs = std::filesystem;

Mode parse_mode(const std::string &text) {
    static const std::map<std::string, Mode> modes = {
        {"otoc", Mode::otoc},     {"dp", Mode::dp},   {"decode", Mode::decode},     {"info", Mode::info},
        {"meanfield", Mode::meanfield}, {"fit", Mode::fit}, {"collapse", Mode::collapse},
    };
    auto it = modes.find(text);
    if (it == modes.end()) {
        throw ConfigError("unknown mode '" + text + "' (expected otoc, dp, decode, info, meanfield, fit or collapse)");
    }
    return it->second;
}

std::string to_string(Mode m) {
    switch (m) {
        case Mode::otoc:
            return "otoc";
        case Mode::dp:
            return "dp";
        case Mode::decode:
            return "decode";
        case Mode::info:
            return "info";
        case Mode::meanfield:
            return "meanfield";
        case Mode::fit:
            return "fit";
        case Mode::collapse:
            return "collapse";
    }
    return "?";
}

namespace {

std::string trim(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
        return "";
    }
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(trim(cur));
    }
    return out;
}

uint64_t parse_u64(const std::string &v, const std::string &key, const std::string &where) {
    uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
        throw ConfigError(where + ": " + key + " expects a nonnegative integer, got '" + v + "'");
    }
    return out;
}

double parse_double(const std::string &v, const std::string &key, const std::string &where) {
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() || !std::isfinite(out)) {
        throw ConfigError(where + ": " + key + " expects a number, got '" + v + "'");
    }
    return out;
}

// Removes accumulated representation error from grid arithmetic.
double tidy(double v) {
    return std::round(v * 1e12) / 1e12;
}

std::vector<double> parse_p_grid(const std::string &v, const std::string &where) {
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        auto parts = split(v, ':');
        if (parts.size() != 3) {
            throw ConfigError(where + ": p range must be lo:step:hi, got '" + v + "'");
        }
        double lo = parse_double(parts[0], "p", where);
        double step = parse_double(parts[1], "p", where);
        double hi = parse_double(parts[2], "p", where);
        if (!(step > 0) || hi < lo) {
            throw ConfigError(where + ": p range needs step > 0 and hi >= lo");
        }
        auto count = static_cast<size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (size_t i = 0; i < count; i++) {
            out.push_back(tidy(lo + static_cast<double>(i) * step));
        }
    } else {
        for (const auto &part : split(v, ',')) {
            out.push_back(parse_double(part, "p", where));
        }
    }
    if (out.empty()) {
        throw ConfigError(where + ": empty p grid");
    }
    return out;
}

}  // namespace

void ExperimentConfig::set(const std::string &key, const std::string &raw, const std::string &where) {
    std::string value = trim(raw);
    if (key == "mode") {
        try {
            mode = parse_mode(value);
        } catch (const ConfigError &e) {
            throw ConfigError(where + ": " + e.what());
        }
    } else if (key == "N") {
        N = parse_u64(value, key, where);
    } else if (key == "depth") {
        depth = parse_u64(value, key, where);
    } else if (key == "p") {
        p = parse_p_grid(value, where);
    } else if (key == "q") {
        try {
            q = LocalDim::parse(value);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(where + ": " + e.what());
        }
    } else if (key == "k") {
        k = parse_u64(value, key, where);
    } else if (key == "init") {
        if (value != "single" && value != "block") {
            throw ConfigError(where + ": init must be 'single' or 'block', got '" + value + "'");
        }
        init = value;
    } else if (key == "case") {
        try {
            init_case = parse_init_case(value);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(where + ": " + e.what());
        }
    } else if (key == "traj") {
        n_traj = parse_u64(value, key, where);
    } else if (key == "seed") {
        seed = parse_u64(value, key, where);
    } else if (key == "workers") {
        workers = parse_u64(value, key, where);
    } else if (key == "out") {
        if (value.empty()) {
            throw ConfigError(where + ": out must not be empty");
        }
        out = value;
    } else if (key == "otoc_times") {
        otoc_times.clear();
        if (!value.empty()) {
            for (const auto &part : split(value, ',')) {
                otoc_times.push_back(parse_u64(part, key, where));
            }
        }
    } else if (key == "stride") {
        stride = parse_u64(value, key, where);
    } else if (key == "p_c") {
        p_c = parse_double(value, key, where);
    } else if (key == "fit_lo") {
        fit_lo = parse_double(value, key, where);
    } else if (key == "fit_hi") {
        fit_hi = parse_double(value, key, where);
    } else if (key == "engine") {
        if (value == "clifford") {
            engine = Engine::clifford;
        } else if (value == "dp") {
            engine = Engine::dp;
        } else {
            throw ConfigError(where + ": engine must be 'clifford' or 'dp', got '" + value + "'");
        }
    } else {
        throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

Window ExperimentConfig::window() const {
    return {fit_lo, fit_hi > 0 ? fit_hi : static_cast<double>(depth) / 4.0};
}

Window ExperimentConfig::collapse_window() const {
    return {fit_lo, fit_hi > 0 ? fit_hi : static_cast<double>(depth)};
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string &msg) { throw ConfigError("invalid configuration: " + msg); };
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) {
            fail("p values must lie in [0, 1]");
        }
    }
    if (mode == Mode::meanfield) {
        for (double v : p) {
            if (v >= 1.0) {
                fail("meanfield needs p < 1");
            }
        }
        return;
    }
    if (N < 2 || N % 2) {
        fail("N must be even and >= 2");
    }
    if (depth < 1) {
        fail("depth must be >= 1");
    }
    if (n_traj < 1) {
        fail("traj must be >= 1");
    }
    if (workers < 1) {
        fail("workers must be >= 1");
    }
    if (stride < 1) {
        fail("stride must be >= 1");
    }
    for (size_t t : otoc_times) {
        if (t > depth) {
            fail("otoc_times must not exceed depth");
        }
    }
    bool uses_clifford = mode == Mode::otoc || ((mode == Mode::fit || mode == Mode::collapse) && engine == Engine::clifford);
    if (uses_clifford && !(q == LocalDim::of(2))) {
        fail("the Clifford engine simulates qubits; set q = 2 or use the dp engine");
    }
    if (mode == Mode::decode || mode == Mode::info || (mode == Mode::dp && init == "block")) {
        if (k < 1 || k > N) {
            fail("k must satisfy 1 <= k <= N");
        }
    }
    if (mode == Mode::fit || mode == Mode::collapse) {
        Window w = mode == Mode::fit ? window() : collapse_window();
        if (!(w.lo > 0) || w.hi <= w.lo || w.hi > static_cast<double>(depth)) {
            fail("fit window must satisfy 0 < fit_lo < fit_hi <= depth");
        }
    }
    if (mode == Mode::collapse) {
        bool below = false;
        bool above = false;
        for (double v : p) {
            if (v == p_c) {
                fail("collapse p grid must not contain p_c itself");
            }
            below |= v < p_c;
            above |= v > p_c;
        }
        if (!below || !above) {
            fail("collapse needs swap rates on both sides of p_c");
        }
    }
}

ExperimentConfig parse_config(std::istream &in, const std::string &source) {
    ExperimentConfig cfg;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        std::string where = source + ":" + std::to_string(lineno);
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected key = value, got '" + line + "'");
        }
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError(where + ": missing key before '='");
        }
        cfg.set(key, line.substr(eq + 1), where);
    }
    return cfg;
}

ExperimentConfig load_config(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    return parse_config(in, path.string());
}

EnsembleAccumulator run_otoc_ensemble(size_t n, double p, size_t depth, uint64_t n_traj, uint64_t seed,
                                      size_t workers, const std::vector<size_t> &otoc_times) {
    CircuitParams params{n, p, depth, seed};
    params.validate();
    return run_parallel<EnsembleAccumulator>(
        n_traj, workers, [&] { return EnsembleAccumulator(n, depth, 0, otoc_times); },
        [&](uint64_t i, EnsembleAccumulator &acc) {
            RandomStream rng(seed, stream_id(StreamDomain::trajectory, i));
            evolve_otoc_visit(params, rng, [&](size_t t, const BitVector &occ) { acc.record(t, occ); });
        });
}

EnsembleAccumulator run_dp_ensemble(const InitialCondition &init, LocalDim q, double p, size_t n, size_t depth,
                                    uint64_t n_traj, uint64_t seed, size_t workers,
                                    const std::vector<size_t> &otoc_times) {
    BranchingParams params = branching_probs(q, p);
    StreamDomain domain =
        std::holds_alternative<SingleSite>(init) ? StreamDomain::trajectory : StreamDomain::particle_block;
    size_t origin = initial_origin(init) % n;
    return run_parallel<EnsembleAccumulator>(
        n_traj, workers, [&] { return EnsembleAccumulator(n, depth, origin, otoc_times); },
        [&](uint64_t i, EnsembleAccumulator &acc) {
            RandomStream rng(seed, stream_id(domain, i));
            run_trajectory_visit(init, params, n, depth, rng,
                                 [&](size_t t, const BitVector &occ) { acc.record(t, occ); });
        });
}

InfoAccumulator::InfoAccumulator(size_t n, size_t k, std::vector<size_t> times, bool with_entropies)
    : n_(n),
      k_(k),
      with_entropies_(with_entropies),
      times_(std::move(times)),
      rank_hist_(times_.size(), std::vector<uint64_t>(2 * k + 1, 0)),
      ic_e_hist_(times_.size(), std::vector<uint64_t>(2 * k + 1, 0)),
      ic_s_hist_(times_.size(), std::vector<uint64_t>(2 * k + 1, 0)),
      entropy_sums_(times_.size(), std::array<int64_t, 5>{}) {
}

void InfoAccumulator::record(size_t slot, const GeneratorSet &state) {
    auto k = static_cast<int64_t>(k_);
    size_t r = state.bell_support_rank();
    rank_hist_.at(slot).at(r)++;
    if (!with_entropies_) {
        return;
    }
    InfoResult info = coherent_info(state);
    if (info.Ic_E < -k || info.Ic_E > k || info.Ic_S < -k || info.Ic_S > k) {
        throw std::logic_error("coherent information outside [-k, k]");
    }
    ic_e_hist_[slot][static_cast<size_t>(info.Ic_E + k)]++;
    ic_s_hist_[slot][static_cast<size_t>(info.Ic_S + k)]++;
    auto &sums = entropy_sums_[slot];
    sums[0] += info.H_A;
    sums[1] += info.H_S;
    sums[2] += info.H_AS;
    sums[3] += info.H_E;
    sums[4] += info.H_AE;
}

void InfoAccumulator::merge(const InfoAccumulator &other) {
    if (other.times_ != times_ || other.k_ != k_ || other.n_ != n_ || other.with_entropies_ != with_entropies_) {
        throw std::invalid_argument("InfoAccumulator::merge: incompatible accumulators");
    }
    n_traj_ += other.n_traj_;
    for (size_t s = 0; s < times_.size(); s++) {
        for (size_t i = 0; i <= 2 * k_; i++) {
            rank_hist_[s][i] += other.rank_hist_[s][i];
            ic_e_hist_[s][i] += other.ic_e_hist_[s][i];
            ic_s_hist_[s][i] += other.ic_s_hist_[s][i];
        }
        for (size_t j = 0; j < 5; j++) {
            entropy_sums_[s][j] += other.entropy_sums_[s][j];
        }
    }
}

namespace {

struct HistStats {
    double mean;
    double sem;
};

// Mean and standard error of value(i) weighted by hist[i].
template <typename Fn>
HistStats hist_stats(const std::vector<uint64_t> &hist, uint64_t n, Fn &&value) {
    long double sum = 0;
    long double sq = 0;
    for (size_t i = 0; i < hist.size(); i++) {
        long double v = value(i);
        sum += v * hist[i];
        sq += v * v * hist[i];
    }
    long double mean = sum / n;
    long double var = n > 1 ? (sq - sum * mean) / (n - 1) : 0;
    if (var < 0) {
        var = 0;
    }
    return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / n))};
}

}  // namespace

InfoCurves finalize(const InfoAccumulator &acc, size_t n) {
    uint64_t traj = acc.n_traj();
    if (traj == 0) {
        throw std::invalid_argument("finalize: empty ensemble");
    }
    double nan = std::numeric_limits<double>::quiet_NaN();
    auto k = static_cast<double>(acc.k());
    InfoCurves c;
    for (size_t s = 0; s < acc.times().size(); s++) {
        c.t.push_back(acc.times()[s]);
        auto f = hist_stats(acc.rank_hist()[s], traj, [](size_t r) { return std::ldexp(1.0L, -static_cast<int>(r)); });
        c.F_mean.push_back(f.mean);
        c.F_sem.push_back(f.sem);
        c.log2_F_mean.push_back(
            hist_stats(acc.rank_hist()[s], traj, [](size_t r) { return -static_cast<long double>(r); }).mean);
        if (!acc.with_entropies()) {
            for (auto *v : {&c.Ic_E_mean, &c.Ic_E_sem, &c.Ic_S_mean, &c.Ic_S_sem, &c.H_A, &c.H_S, &c.H_AS, &c.H_E,
                            &c.H_AE, &c.neg_log2_P_succ, &c.F_pure_mean, &c.F_pure_sem, &c.saturated}) {
                v->push_back(nan);
            }
            continue;
        }
        auto shift = [k](size_t i) { return static_cast<long double>(i) - k; };
        auto ie = hist_stats(acc.ic_e_hist()[s], traj, shift);
        auto is = hist_stats(acc.ic_s_hist()[s], traj, shift);
        c.Ic_E_mean.push_back(ie.mean);
        c.Ic_E_sem.push_back(ie.sem);
        c.Ic_S_mean.push_back(is.mean);
        c.Ic_S_sem.push_back(is.sem);
        const auto &sums = acc.entropy_sums()[s];
        auto mean_of = [&](int64_t v) { return static_cast<double>(v) / static_cast<double>(traj); };
        c.H_A.push_back(mean_of(sums[0]));
        c.H_S.push_back(mean_of(sums[1]));
        c.H_AS.push_back(mean_of(sums[2]));
        c.H_E.push_back(mean_of(sums[3]));
        c.H_AE.push_back(mean_of(sums[4]));
        c.neg_log2_P_succ.push_back(static_cast<double>(n) - k + c.H_E.back());
        auto fp = hist_stats(acc.ic_e_hist()[s], traj,
                             [k](size_t i) { return std::ldexp(1.0L, static_cast<int>(i) - 2 * static_cast<int>(k)); });
        c.F_pure_mean.push_back(fp.mean);
        c.F_pure_sem.push_back(fp.sem);
        c.saturated.push_back(static_cast<double>(acc.ic_e_hist()[s].back()) / static_cast<double>(traj));
    }
    return c;
}

std::vector<size_t> strided_times(size_t depth, size_t stride) {
    if (stride == 0) {
        throw std::invalid_argument("stride must be >= 1");
    }
    std::vector<size_t> out;
    for (size_t t = 0; t <= depth; t += stride) {
        out.push_back(t);
    }
    if (out.back() != depth) {
        out.push_back(depth);
    }
    return out;
}

InfoAccumulator run_info_ensemble(InitCase c, size_t n, size_t k, double p, size_t depth,
                                  const std::vector<size_t> &times, bool with_entropies, uint64_t n_traj,
                                  uint64_t seed, size_t workers) {
    if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.back() > depth)) {
        throw std::invalid_argument("run_info_ensemble: times must be sorted and within depth");
    }
    return run_parallel<InfoAccumulator>(
        n_traj, workers, [&] { return InfoAccumulator(n, k, times, with_entropies); },
        [&](uint64_t i, InfoAccumulator &acc) {
            RandomStream rng(seed, stream_id(StreamDomain::stabilizer, i));
            size_t slot = 0;
            evolve_info_visit(c, n, k, p, times.empty() ? 0 : times.back(), rng,
                              [&](size_t t, const GeneratorSet &state) {
                                  while (slot < times.size() && times[slot] == t) {
                                      acc.record(slot, state);
                                      slot++;
                                  }
                              });
        });
}

std::string format_shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw std::runtime_error("format_shortest: conversion failed");
    }
    return std::string(buf, ptr);
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string p_directory(double p) {
    return "p_" + format_shortest(p);
}

std::string sha256_hex(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path.string() + " for checksumming");
    }
    EVP_MD_CTX *ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256: digest initialization failed");
    }
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        EVP_DigestUpdate(ctx, buf.data(), static_cast<size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; i++) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

namespace {

class CsvFile {
   public:
    CsvFile(const fs::path &path, const std::string &header, RunReport &report) : path_(path) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
        out_.open(path, std::ios::binary | std::ios::trunc);
        if (!out_) {
            throw IoError("cannot open " + path.string() + " for writing");
        }
        out_ << header << '\n';
        report.files.push_back(path);
    }
    template <typename... Cells>
    void row(const Cells &...cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }
    ~CsvFile() = default;
    void close() {
        out_.close();
        if (!out_) {
            throw IoError("failed writing " + path_.string());
        }
    }

   private:
    static std::string cell(double v) {
        return format_double(v);
    }
    static std::string cell(const std::string &s) {
        return s;
    }
    static std::string cell(const char *s) {
        return s;
    }
    template <typename T>
        requires std::is_integral_v<T>
    static std::string cell(T v) {
        return std::to_string(v);
    }

    fs::path path_;
    std::ofstream out_;
};

void write_curves(const fs::path &dir, const Curves &c, RunReport &report) {
    CsvFile curves(dir / "curves.csv", "t,rho,rho_sem,P,P_sem,R2,R2_sem,front,front_sem", report);
    for (size_t i = 0; i < c.t.size(); i++) {
        curves.row(c.t[i], c.rho[i], c.rho_sem[i], c.P[i], c.P_sem[i], c.R2[i], c.R2_sem[i], c.front[i],
                   c.front_sem[i]);
    }
    curves.close();
    CsvFile extra(dir / "curves_extra.csv", "t,R2_mass,front_std,alive", report);
    for (size_t i = 0; i < c.t.size(); i++) {
        extra.row(c.t[i], c.R2_mass[i], c.front_std[i], c.alive[i]);
    }
    extra.close();
    CsvFile otoc(dir / "otoc.csv", "t,x,C_mean,C_sem", report);
    for (const auto &slice : c.otoc) {
        for (size_t i = 0; i < slice.x.size(); i++) {
            otoc.row(slice.t, slice.x[i], slice.C_mean[i], slice.C_sem[i]);
        }
    }
    otoc.close();
}

std::vector<size_t> default_otoc_times(const ExperimentConfig &cfg) {
    if (!cfg.otoc_times.empty()) {
        return cfg.otoc_times;
    }
    std::vector<size_t> out;
    for (size_t div : {8, 4, 2, 1}) {
        size_t t = cfg.depth / div;
        if (t > 0 && (out.empty() || out.back() != t)) {
            out.push_back(t);
        }
    }
    return out;
}

Curves simulate_curves(const ExperimentConfig &cfg, double p, bool clifford) {
    std::vector<size_t> times = default_otoc_times(cfg);
    if (clifford) {
        auto acc = run_otoc_ensemble(cfg.N, p, cfg.depth, cfg.n_traj, cfg.seed, cfg.workers, times);
        return finalize(acc, otoc_prefactor(LocalDim::of(2)));
    }
    InitialCondition init = SingleSite{0};
    if (cfg.init == "block") {
        init = Block{cfg.k, 0};
    }
    auto acc = run_dp_ensemble(init, cfg.q, p, cfg.N, cfg.depth, cfg.n_traj, cfg.seed, cfg.workers, times);
    return finalize(acc, otoc_prefactor(cfg.q));
}

std::vector<double> as_double(const std::vector<size_t> &v) {
    return std::vector<double>(v.begin(), v.end());
}

void run_decode(const ExperimentConfig &cfg, const fs::path &root, RunReport &report) {
    std::vector<size_t> times = strided_times(cfg.depth, 1);
    for (double p : cfg.p) {
        auto info = finalize(run_info_ensemble(cfg.init_case, cfg.N, cfg.k, p, cfg.depth, times, false, cfg.n_traj,
                                               cfg.seed, cfg.workers),
                             cfg.N);
        double pref = otoc_prefactor(LocalDim::of(2));
        Curves single = finalize(run_dp_ensemble(SingleSite{0}, LocalDim::of(2), p, cfg.N, cfg.depth, cfg.n_traj,
                                                 cfg.seed, cfg.workers),
                                 pref);
        Curves block = cfg.k == 1 ? single
                                  : finalize(run_dp_ensemble(Block{cfg.k, 0}, LocalDim::of(2), p, cfg.N, cfg.depth,
                                                             cfg.n_traj, cfg.seed, cfg.workers),
                                             pref);
        FidelityCurve law = fidelity_from_survival(single.P, cfg.k == 1 ? std::vector<double>{} : block.P, cfg.k);
        CsvFile out(root / p_directory(p) / "decode.csv", "t,F_mean,F_sem,P1,P1_sem,Pk,Pk_sem,F_law,F_lower,F_upper",
                    report);
        for (size_t i = 0; i < info.t.size(); i++) {
            double f_law = law.law.empty() ? std::numeric_limits<double>::quiet_NaN() : law.law[i];
            out.row(info.t[i], info.F_mean[i], info.F_sem[i], single.P[i], single.P_sem[i], block.P[i],
                    block.P_sem[i], f_law, law.lower[i], law.upper[i]);
        }
        out.close();
    }
}

void run_info(const ExperimentConfig &cfg, const fs::path &root, RunReport &report) {
    std::vector<size_t> times = strided_times(cfg.depth, cfg.stride);
    CsvFile out(root / "info.csv", "p,t,Ic_E_mean,Ic_E_sem,Ic_S_mean,Ic_S_sem,F_mean,F_sem", report);
    CsvFile extra(root / "info_extra.csv",
                  "p,t,H_A,H_S,H_AS,H_E,H_AE,log2_F_mean,saturated,neg_log2_P_succ,F_pure_mean,F_pure_sem", report);
    for (double p : cfg.p) {
        auto c = finalize(run_info_ensemble(cfg.init_case, cfg.N, cfg.k, p, cfg.depth, times, true, cfg.n_traj,
                                            cfg.seed, cfg.workers),
                          cfg.N);
        bool pure = cfg.init_case == InitCase::PureAll;
        double nan = std::numeric_limits<double>::quiet_NaN();
        for (size_t i = 0; i < c.t.size(); i++) {
            out.row(p, c.t[i], c.Ic_E_mean[i], c.Ic_E_sem[i], c.Ic_S_mean[i], c.Ic_S_sem[i], c.F_mean[i],
                    c.F_sem[i]);
            extra.row(p, c.t[i], c.H_A[i], c.H_S[i], c.H_AS[i], c.H_E[i], c.H_AE[i], c.log2_F_mean[i],
                      c.saturated[i], pure ? c.neg_log2_P_succ[i] : nan, pure ? c.F_pure_mean[i] : nan,
                      pure ? c.F_pure_sem[i] : nan);
        }
    }
    out.close();
    extra.close();
}

void run_meanfield(const ExperimentConfig &cfg, const fs::path &root, RunReport &report) {
    CsvFile out(root / "meanfield.csv", "q,p,rho_e,rho_v,P_r,P_l,P_d,v_B,p_c_mf", report);
    for (double p : cfg.p) {
        MeanFieldResult m = mean_field(cfg.q, p);
        out.row(cfg.q.str(), p, m.rho_e, m.rho_v, m.P_r, m.P_l, m.P_d, m.v_B, m.p_c_mf);
    }
    out.close();
}

struct Families {
    std::vector<Curve> rho, P, R2;
};

Families simulate_families(const ExperimentConfig &cfg, const fs::path &root, RunReport &report,
                           std::vector<Curves> *all = nullptr) {
    Families f;
    for (double p : cfg.p) {
        Curves c = simulate_curves(cfg, p, cfg.engine == Engine::clifford);
        write_curves(root / p_directory(p), c, report);
        std::vector<double> t = as_double(c.t);
        f.rho.push_back({p, t, c.rho});
        f.P.push_back({p, t, c.P});
        f.R2.push_back({p, t, c.R2});
        if (all) {
            all->push_back(std::move(c));
        }
    }
    return f;
}

const char *kFitHeader = "observable,window_lo,window_hi,exponent,amplitude,goodness,p_c";

void run_fit(const ExperimentConfig &cfg, const fs::path &root, RunReport &report) {
    Window w = cfg.window();
    Families f = simulate_families(cfg, root, report);
    for (size_t i = 0; i < cfg.p.size(); i++) {
        CsvFile out(root / p_directory(cfg.p[i]) / "fit.csv", kFitHeader, report);
        for (auto [name, curve] : {std::pair{"rho", &f.rho[i]}, std::pair{"P", &f.P[i]}, std::pair{"R2", &f.R2[i]}}) {
            try {
                FitResult r = fit_power_law(curve->t, curve->y, w);
                out.row(name, w.lo, w.hi, r.exponent, r.amplitude, r.goodness, "");
            } catch (const std::invalid_argument &) {
                // Absorbed inside the window: no power law to report.
                double nan = std::numeric_limits<double>::quiet_NaN();
                out.row(name, w.lo, w.hi, nan, nan, nan, "");
            }
        }
        out.close();
    }
    if (cfg.p.size() < 3) {
        return;
    }
    FitResult pc;
    try {
        pc = estimate_pc(f.rho, w);
    } catch (const std::exception &e) {
        report.notes.push_back(std::string("critical point not estimated: ") + e.what());
        return;
    }
    CsvFile out(root / "fit.csv", kFitHeader, report);
    out.row("rho", w.lo, w.hi, pc.exponent, pc.amplitude, pc.goodness, *pc.p_c);
    // Exponents of P and R2 interpolated to the same critical point.
    for (auto [name, fam] : {std::pair{"P", &f.P}, std::pair{"R2", &f.R2}}) {
        std::vector<CurvatureFit> fits = log_curvatures(*fam, w);
        std::vector<double> ps;
        std::vector<double> slopes;
        for (const auto &c : fits) {
            ps.push_back(c.p);
            slopes.push_back(c.slope);
        }
        // Least-squares line of slope against p.
        double mp = 0;
        double ms = 0;
        for (size_t i = 0; i < ps.size(); i++) {
            mp += ps[i];
            ms += slopes[i];
        }
        mp /= static_cast<double>(ps.size());
        ms /= static_cast<double>(ps.size());
        double sxx = 0;
        double sxy = 0;
        for (size_t i = 0; i < ps.size(); i++) {
            sxx += (ps[i] - mp) * (ps[i] - mp);
            sxy += (ps[i] - mp) * (slopes[i] - ms);
        }
        double slope_at_pc = ms + (sxy / sxx) * (*pc.p_c - mp);
        size_t nearest = 0;
        for (size_t i = 1; i < fam->size(); i++) {
            if (std::abs((*fam)[i].p - *pc.p_c) < std::abs((*fam)[nearest].p - *pc.p_c)) {
                nearest = i;
            }
        }
        FitResult near = fit_power_law((*fam)[nearest].t, (*fam)[nearest].y, w);
        out.row(name, w.lo, w.hi, slope_at_pc, near.amplitude, near.goodness, *pc.p_c);
    }
    out.close();
}

void run_collapse(const ExperimentConfig &cfg, const fs::path &root, RunReport &report) {
    Window w = cfg.collapse_window();
    ExponentTable e;
    std::vector<Curves> all;
    Families f = simulate_families(cfg, root, report, &all);
    struct Obs {
        const char *name;
        const std::vector<Curve> *family;
        double y;
    };
    std::vector<Obs> obs = {{"rho", &f.rho, e.theta}, {"P", &f.P, -e.delta}, {"R2", &f.R2, e.spreading_exponent()}};
    CsvFile table(root / "collapse.csv", "observable,branch,p,t,x_scaled,y_scaled", report);
    CsvFile metric(root / "collapse_metric.csv", "observable,branch,metric_collapsed,metric_raw,ratio", report);
    std::vector<CollapsePoint> every_scaled;
    std::vector<CollapsePoint> every_raw;
    for (const Obs &o : obs) {
        auto scaled = rescale_collapse(o.name, *o.family, cfg.p_c, o.y, e.nu_par, w);
        auto raw = raw_points(o.name, *o.family, cfg.p_c, w);
        for (const auto &pt : scaled) {
            table.row(pt.observable, pt.branch < 0 ? "below" : "above", pt.p, pt.t, pt.x, pt.y);
        }
        for (int branch : {-1, 1}) {
            std::vector<CollapsePoint> s;
            std::vector<CollapsePoint> r;
            for (const auto &pt : scaled) {
                if (pt.branch == branch) {
                    s.push_back(pt);
                }
            }
            for (const auto &pt : raw) {
                if (pt.branch == branch) {
                    r.push_back(pt);
                }
            }
            double nan = std::numeric_limits<double>::quiet_NaN();
            double ms = nan;
            double mr = nan;
            try {
                ms = collapse_metric(s);
                mr = collapse_metric(r);
            } catch (const std::invalid_argument &) {
                // Fewer than two overlapping curves on this branch.
            }
            metric.row(o.name, branch < 0 ? "below" : "above", ms, mr, mr / ms);
        }
        every_scaled.insert(every_scaled.end(), scaled.begin(), scaled.end());
        every_raw.insert(every_raw.end(), raw.begin(), raw.end());
    }
    try {
        double ms = collapse_metric(every_scaled);
        double mr = collapse_metric(every_raw);
        metric.row("all", "both", ms, mr, mr / ms);
    } catch (const std::invalid_argument &e) {
        report.notes.push_back(std::string("collapse metric unavailable: ") + e.what());
    }
    table.close();
    metric.close();

    if (cfg.engine == Engine::clifford) {
        size_t nearest = 0;
        for (size_t i = 1; i < cfg.p.size(); i++) {
            if (std::abs(cfg.p[i] - cfg.p_c) < std::abs(cfg.p[nearest] - cfg.p_c)) {
                nearest = i;
            }
        }
        CsvFile oc(root / "otoc_collapse.csv", "p,t,x_scaled,C_scaled", report);
        for (const auto &slice : all[nearest].otoc) {
            if (slice.t == 0) {
                continue;
            }
            std::vector<double> x(slice.x.begin(), slice.x.end());
            for (const auto &pt : rescale_otoc(static_cast<double>(slice.t), x, slice.C_mean, e)) {
                oc.row(cfg.p[nearest], slice.t, pt.x, pt.y);
            }
        }
        oc.close();
    }
}

void write_manifest(const ExperimentConfig &cfg, const fs::path &root, const RunReport &report) {
    fs::path final_path = root / "manifest.txt";
    fs::path tmp = root / "manifest.txt.tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string());
        }
        out << "version = " << RADPERC_VERSION << '\n';
        out << "mode = " << to_string(cfg.mode) << '\n';
        out << "wall_seconds = " << format_double(report.wall_seconds) << '\n';
        out << "time_unit = one gate layer followed by one swap round; site spacing 1\n";
        out << "seed_streams = philox4x32-10 keyed by seed, one stream per trajectory index\n";
        if (cfg.mode == Mode::fit || cfg.mode == Mode::collapse) {
            Window w = cfg.mode == Mode::fit ? cfg.window() : cfg.collapse_window();
            out << "fit_window = " << format_shortest(w.lo) << " " << format_shortest(w.hi) << '\n';
        }
        if (cfg.mode == Mode::collapse) {
            out << "collapse_metric = mean over (observable, branch) of the inter-curve variance of ln y at the "
                   "centres of 20 equal ln x bins; each curve contributes its local least-squares line where its "
                   "points straddle the centre\n";
        }
        for (const auto &note : report.notes) {
            out << "note = " << note << '\n';
        }
        auto join = [](const auto &values, auto &&fmt) {
            std::string text;
            for (const auto &v : values) {
                text += (text.empty() ? "" : ",") + fmt(v);
            }
            return text;
        };
        auto shortest = [](double v) { return format_shortest(v); };
        auto integer = [](size_t v) { return std::to_string(v); };
        const std::vector<std::pair<std::string, std::string>> resolved = {
            {"mode", to_string(cfg.mode)},
            {"N", std::to_string(cfg.N)},
            {"depth", std::to_string(cfg.depth)},
            {"p", join(cfg.p, shortest)},
            {"q", cfg.q.str()},
            {"k", std::to_string(cfg.k)},
            {"init", cfg.init},
            {"case", to_string(cfg.init_case)},
            {"traj", std::to_string(cfg.n_traj)},
            {"seed", std::to_string(cfg.seed)},
            {"workers", std::to_string(cfg.workers)},
            {"out", cfg.out},
            {"otoc_times", join(default_otoc_times(cfg), integer)},
            {"stride", std::to_string(cfg.stride)},
            {"p_c", format_shortest(cfg.p_c)},
            {"fit_lo", format_shortest(cfg.fit_lo)},
            {"fit_hi", format_shortest(cfg.fit_hi)},
            {"engine", cfg.engine == Engine::clifford ? "clifford" : "dp"},
        };
        for (const auto &[key, value] : resolved) {
            out << "config." << key << " = " << value << '\n';
        }
        for (const auto &file : report.files) {
            out << "sha256 " << fs::relative(file, root).generic_string() << " = " << sha256_hex(file) << '\n';
        }
        out.close();
        if (!out) {
            throw IoError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, final_path, ec);
    if (ec) {
        throw IoError("cannot move manifest into place: " + ec.message());
    }
}

}  // namespace

RunReport run(const ExperimentConfig &cfg) {
    cfg.validate();
    auto start = std::chrono::steady_clock::now();
    fs::path root(cfg.out);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) {
        throw IoError("cannot create output directory " + root.string() + ": " + ec.message());
    }
    RunReport report;
    switch (cfg.mode) {
        case Mode::otoc:
        case Mode::dp:
            for (double p : cfg.p) {
                write_curves(root / p_directory(p), simulate_curves(cfg, p, cfg.mode == Mode::otoc), report);
            }
            break;
        case Mode::decode:
            run_decode(cfg, root, report);
            break;
        case Mode::info:
            run_info(cfg, root, report);
            break;
        case Mode::meanfield:
            run_meanfield(cfg, root, report);
            break;
        case Mode::fit:
            run_fit(cfg, root, report);
            break;
        case Mode::collapse:
            run_collapse(cfg, root, report);
            break;
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(cfg, root, report);
    return report;
}

}  // namespace radperc
