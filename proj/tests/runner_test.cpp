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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace radperc;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string &text) {
    std::istringstream in(text);
    return parse_config(in, "test.cfg");
}

std::string first_line(const fs::path &path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

fs::path fresh_dir(const std::string &name) {
    fs::path dir = fs::temp_directory_path() / ("radperc_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(config, parses_keys_and_comments) {
    ExperimentConfig cfg = parse("# comment\nmode = dp\nN = 32\n\np = 0.1, 0.2  # trailing\nq = inf\ncase = iii\n");
    EXPECT_EQ(cfg.mode, Mode::dp);
    EXPECT_EQ(cfg.N, 32u);
    EXPECT_EQ(cfg.p, (std::vector<double>{0.1, 0.2}));
    EXPECT_TRUE(cfg.q.is_infinite());
    EXPECT_EQ(cfg.init_case, InitCase::PureAll);
}

TEST(config, p_range) {
    ExperimentConfig cfg = parse("p = 0.19:0.005:0.22\n");
    ASSERT_EQ(cfg.p.size(), 7u);
    EXPECT_EQ(cfg.p[0], 0.19);
    EXPECT_EQ(cfg.p[2], 0.2);
    EXPECT_EQ(cfg.p[6], 0.22);
}

TEST(config, errors_name_the_line) {
    try {
        parse("N = 8\nbogus = 1\n");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("test.cfg:2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse("N = -3\n"), ConfigError);
    EXPECT_THROW(parse("N 8\n"), ConfigError);
    EXPECT_THROW(parse("p = 0.1:0:0.2\n"), ConfigError);
    EXPECT_THROW(parse("q = 1\n"), ConfigError);
    EXPECT_THROW(parse("mode = nonsense\n"), ConfigError);
}

TEST(config, validation) {
    EXPECT_THROW(parse("mode = otoc\nq = 3\n").validate(), ConfigError);
    EXPECT_THROW(parse("mode = dp\nN = 7\n").validate(), ConfigError);
    EXPECT_THROW(parse("mode = info\nN = 8\nk = 9\n").validate(), ConfigError);
    EXPECT_THROW(parse("mode = collapse\np = 0.1, 0.15\np_c = 0.2\n").validate(), ConfigError);
    EXPECT_THROW(parse("mode = collapse\np = 0.1, 0.2, 0.3\np_c = 0.2\n").validate(), ConfigError);
    EXPECT_NO_THROW(parse("mode = meanfield\nq = 3\np = 0, 0.1\n").validate());
    EXPECT_THROW(load_config("/nonexistent/radperc.cfg"), IoError);
}

TEST(run_parallel, worker_count_does_not_change_result) {
    auto one = run_otoc_ensemble(16, 0.2, 20, 30, 5, 1, {10});
    auto three = run_otoc_ensemble(16, 0.2, 20, 30, 5, 3, {10});
    EXPECT_EQ(one, three);
    auto dp1 = run_dp_ensemble(Block{3, 0}, LocalDim::of(3), 0.1, 16, 20, 30, 5, 1, {});
    auto dp2 = run_dp_ensemble(Block{3, 0}, LocalDim::of(3), 0.1, 16, 20, 30, 5, 2, {});
    EXPECT_EQ(dp1, dp2);
    std::vector<size_t> times{0, 5, 10};
    EXPECT_EQ(run_info_ensemble(InitCase::PureAll, 8, 2, 0.2, 10, times, true, 12, 3, 1),
              run_info_ensemble(InitCase::PureAll, 8, 2, 0.2, 10, times, true, 12, 3, 4));
}

TEST(run_parallel, propagates_exceptions) {
    auto make = [] { return InfoAccumulator(4, 1, {0}, false); };
    EXPECT_THROW(run_parallel<InfoAccumulator>(
                     8, 2, make, [](uint64_t i, InfoAccumulator &) {
                         if (i == 5) {
                             throw std::runtime_error("boom");
                         }
                     }),
                 std::runtime_error);
}

TEST(info, strided_times_and_finalize) {
    EXPECT_EQ(strided_times(10, 4), (std::vector<size_t>{0, 4, 8, 10}));
    EXPECT_EQ(strided_times(8, 4), (std::vector<size_t>{0, 4, 8}));
    auto acc = run_info_ensemble(InitCase::MixedS2MixedE, 8, 2, 0.1, 6, {0, 6}, true, 10, 1, 1);
    InfoCurves c = finalize(acc, 8);
    EXPECT_EQ(c.Ic_E_mean[0], -2.0);
    EXPECT_EQ(c.Ic_S_mean[0], 2.0);
    EXPECT_EQ(c.F_mean[0], 1.0 / 16);
    EXPECT_EQ(c.F_sem[0], 0.0);
}

TEST(format, numbers) {
    EXPECT_EQ(format_shortest(0.2), "0.2");
    EXPECT_EQ(format_shortest(0.2035), "0.2035");
    EXPECT_EQ(p_directory(0.206), "p_0.206");
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(run, dp_mode_writes_exact_headers_and_manifest) {
    fs::path out = fresh_dir("dp");
    ExperimentConfig cfg = parse("mode = dp\nN = 16\ndepth = 16\np = 0.1, 0.3\ntraj = 20\nout = " + out.string());
    RunReport report = run(cfg);
    EXPECT_EQ(report.files.size(), 6u);
    EXPECT_EQ(first_line(out / "p_0.1" / "curves.csv"), "t,rho,rho_sem,P,P_sem,R2,R2_sem,front,front_sem");
    EXPECT_EQ(first_line(out / "p_0.3" / "otoc.csv"), "t,x,C_mean,C_sem");
    std::ifstream manifest(out / "manifest.txt");
    std::stringstream text;
    text << manifest.rdbuf();
    EXPECT_NE(text.str().find("sha256 p_0.1/curves.csv = " + sha256_hex(out / "p_0.1" / "curves.csv")),
              std::string::npos);
    EXPECT_NE(text.str().find("config.N = 16"), std::string::npos);
    // Same seed reproduces byte-identical curves.
    std::string before = sha256_hex(out / "p_0.3" / "curves.csv");
    run(cfg);
    EXPECT_EQ(sha256_hex(out / "p_0.3" / "curves.csv"), before);
    fs::remove_all(out);
}

TEST(run, other_modes_write_their_tables) {
    fs::path out = fresh_dir("modes");
    std::string base = "N = 8\ndepth = 64\ntraj = 30\nk = 1\nout = " + out.string() + "\n";
    run(parse(base + "mode = meanfield\nq = 2\np = 0, 0.1\n"));
    EXPECT_EQ(first_line(out / "meanfield.csv"), "q,p,rho_e,rho_v,P_r,P_l,P_d,v_B,p_c_mf");
    run(parse(base + "mode = info\np = 0.2\nstride = 8\n"));
    EXPECT_EQ(first_line(out / "info.csv"), "p,t,Ic_E_mean,Ic_E_sem,Ic_S_mean,Ic_S_sem,F_mean,F_sem");
    run(parse(base + "mode = decode\np = 0.2\n"));
    EXPECT_TRUE(fs::exists(out / "p_0.2" / "decode.csv"));
    run(parse(base + "mode = fit\nengine = dp\np = 0.15, 0.2, 0.25\nfit_lo = 2\nfit_hi = 16\n"));
    EXPECT_EQ(first_line(out / "p_0.2" / "fit.csv"), "observable,window_lo,window_hi,exponent,amplitude,goodness,p_c");
    std::ifstream manifest(out / "manifest.txt");
    std::stringstream text;
    text << manifest.rdbuf();
    EXPECT_TRUE(fs::exists(out / "fit.csv") || text.str().find("note = critical point") != std::string::npos);
    run(parse(base + "mode = collapse\nN = 16\np = 0.15, 0.3\np_c = 0.206\nfit_lo = 2\n"));
    EXPECT_EQ(first_line(out / "collapse.csv"), "observable,branch,p,t,x_scaled,y_scaled");
    EXPECT_TRUE(fs::exists(out / "collapse_metric.csv"));
    EXPECT_TRUE(fs::exists(out / "otoc_collapse.csv"));
    fs::remove_all(out);
}

TEST(run, unwritable_output_is_io_error) {
    ExperimentConfig cfg = parse("mode = meanfield\nout = /proc/radperc_cannot_write\n");
    EXPECT_THROW(run(cfg), IoError);
}

namespace {

int run_cli(const std::string &args) {
    std::string cmd = std::string(RADPERC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST(cli, exit_codes_and_overrides) {
    fs::path out = fresh_dir("cli");
    EXPECT_EQ(run_cli("meanfield --p 0.1 --q 3 --out " + out.string()), 0);
    EXPECT_TRUE(fs::exists(out / "meanfield.csv"));
    EXPECT_EQ(run_cli("nonsense"), 2);
    EXPECT_EQ(run_cli("dp --N 7 --out " + out.string()), 2);
    EXPECT_EQ(run_cli("dp --config /nonexistent.cfg"), 3);
    fs::path cfg = out / "run.cfg";
    std::ofstream(cfg) << "mode = dp\nN = 8\ndepth = 8\ntraj = 5\np = 0.3\nout = " << (out / "from_cfg").string()
                       << "\n";
    EXPECT_EQ(run_cli("dp --config " + cfg.string() + " --N 12"), 0);
    std::ifstream manifest(out / "from_cfg" / "manifest.txt");
    std::stringstream text;
    text << manifest.rdbuf();
    EXPECT_NE(text.str().find("config.N = 12"), std::string::npos);
    fs::remove_all(out);
}
