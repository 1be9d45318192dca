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

// Command line front end. Exit codes: 0 success, 1 internal error, 2 bad configuration, 3 I/O failure.

#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "radperc/runner.hpp"

namespace {

std::optional<std::string> env_workers() {
    const char *v = std::getenv("RADPERC_WORKERS");
    if (v == nullptr || *v == '\0') {
        return std::nullopt;
    }
    return std::string(v);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Radiative random circuit scrambling toolkit"};
    app.set_version_flag("--version", std::string(RADPERC_VERSION_STRING));

    std::string mode;
    std::string config_path;
    std::map<std::string, std::string> flags;
    app.add_option("mode", mode, "otoc | dp | decode | info | meanfield | fit | collapse")->required();
    app.add_option("-c,--config", config_path, "key = value configuration file");
    for (const char *key : {"N", "p", "q", "k", "depth", "traj", "seed", "workers", "out", "init", "case", "engine",
                            "stride", "otoc_times", "p_c", "fit_lo", "fit_hi"}) {
        app.add_option(std::string("--") + key, flags[key], std::string("override config key ") + key);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        radperc::ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = radperc::load_config(config_path);
        }
        if (auto w = env_workers(); w && app.count("--workers") == 0) {
            cfg.set("workers", *w, "RADPERC_WORKERS");
        }
        cfg.set("mode", mode, "command line");
        for (const auto &[key, value] : flags) {
            if (app.count("--" + key) > 0) {
                cfg.set(key, value, "--" + key);
            }
        }
        radperc::RunReport report = radperc::run(cfg);
        std::cout << "wrote " << report.files.size() << " files to " << cfg.out << " in "
                  << radperc::format_shortest(report.wall_seconds) << " s\n";
        return 0;
    } catch (const radperc::ConfigError &e) {
        std::cerr << "radperc: " << e.what() << '\n';
        return 2;
    } catch (const radperc::IoError &e) {
        std::cerr << "radperc: " << e.what() << '\n';
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "radperc: internal error: " << e.what() << '\n';
        return 1;
    }
}
