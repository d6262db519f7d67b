// SPDX-License-Identifier: Apache-2.0
//
// wavelab: link-level waveform simulation for delay-Doppler alignment modulation
// Copyright (C) 2026 The wavelab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line experiment runner.
//
//   wavelab run --config <path> --out <dir> [--seed-override <u64>] [--validate-only]
//
// Exit status: 0 success, 2 invalid configuration, 3 runtime failure.

#include "wavelab/experiment.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace
{
    constexpr int kExitConfig = 2;
    constexpr int kExitRuntime = 3;

    std::string read_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw wavelab::ConfigError("cannot read config file '" + path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        return text.str();
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"wavelab: delay-Doppler alignment modulation link-level experiments"};
    app.set_version_flag("--version", std::string(wavelab::kLibraryVersion));
    app.require_subcommand(1);

    auto *run = app.add_subcommand("run", "Run the experiment described by a JSON scenario");
    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool validate_only = false;
    run->add_option("--config", config_path, "Scenario file (JSON)")->required();
    auto *out_opt = run->add_option("--out", out_dir, "Directory for CSV results and manifest.json");
    auto *seed_opt = run->add_option("--seed-override", seed, "Replace the scenario's seed");
    run->add_flag("--validate-only", validate_only, "Check the scenario and exit");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try
    {
        const std::string text = read_file(config_path);
        if (validate_only)
        {
            wavelab::validate_config(text);
            std::cout << "ok: " << config_path << '\n';
            return 0;
        }
        if (out_opt->count() == 0)
        {
            std::cerr << "error: --out is required unless --validate-only is given\n";
            return kExitConfig;
        }
        std::optional<std::uint64_t> override_seed;
        if (seed_opt->count() > 0)
            override_seed = seed;
        const auto summary = wavelab::run_experiment(text, out_dir, override_seed);
        std::cout << summary.experiment << " (seed " << summary.seed << ", config " << summary.config_hash
                  << ")\n";
        for (const auto &name : summary.outputs)
            std::cout << "  " << out_dir << '/' << name << '\n';
        return 0;
    }
    catch (const wavelab::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
