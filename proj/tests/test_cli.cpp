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

#include "doctest.h"

#include "wavelab/experiment.hpp"
#include "wavelab/ofdm.hpp"

#include "json.hpp"

#include <sys/wait.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wavelab;
namespace fs = std::filesystem;

namespace
{
    fs::path scratch(const std::string &name)
    {
        const fs::path dir = fs::temp_directory_path() / ("wavelab_cli_test_" + std::to_string(::getpid())) / name;
        fs::remove_all(dir);
        fs::create_directories(dir);
        return dir;
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    void spit(const fs::path &p, const std::string &text)
    {
        std::ofstream(p, std::ios::binary) << text;
    }

    struct CliResult
    {
        int status = -1;
        std::string err;
    };

    // Runs the installed binary; the path comes from the test environment.
    CliResult cli(const std::string &args, const fs::path &dir)
    {
        const char *exe = std::getenv("WAVELAB_CLI");
        REQUIRE_MESSAGE(exe != nullptr, "WAVELAB_CLI is not set");
        const fs::path err = dir / "stderr.txt";
        const std::string cmd = std::string("\"") + exe + "\" " + args + " >/dev/null 2>\"" + err.string() + "\"";
        const int raw = std::system(cmd.c_str());
        CliResult r;
        r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        r.err = slurp(err);
        return r;
    }

    CliResult run_config(const std::string &config, const fs::path &dir, const std::string &extra = "")
    {
        spit(dir / "config.json", config);
        return cli("run --config \"" + (dir / "config.json").string() + "\" --out \"" + (dir / "out").string() + "\" " +
                       extra,
                   dir);
    }

    std::vector<std::vector<std::string>> read_csv(const fs::path &p)
    {
        std::vector<std::vector<std::string>> rows;
        std::istringstream in(slurp(p));
        std::string line;
        while (std::getline(in, line))
        {
            std::vector<std::string> cells;
            std::stringstream ls(line);
            std::string c;
            while (std::getline(ls, c, ','))
                cells.push_back(c);
            rows.push_back(cells);
        }
        return rows;
    }

    double num(const std::string &s)
    {
        double v = 0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        REQUIRE(r.ec == std::errc());
        return v;
    }

    const std::string kFeasibility = R"({
  "experiment": "feasibility_region",
  "seed": 1,
  "thresholds": {"rho_th": [0.5, 0.7, 0.9, 0.95], "k_th": [64, 128, 256, 512, 1024, 2048, 4096]}
})";
}

TEST_CASE("feasibility CSV matches the library row for row")
{
    const auto dir = scratch("feasibility");
    const auto r = run_config(kFeasibility, dir);
    REQUIRE(r.status == 0);
    const auto rows = read_csv(dir / "out" / "feasibility_region.csv");
    REQUIRE(rows.size() == 1 + 4 * 7);
    CHECK(rows[0] == std::vector<std::string>{"rho_th", "k_th", "bandwidth_hz", "xi", "tau_max_s", "nu_max_hz"});
    std::size_t i = 1;
    for (double rho : {0.5, 0.7, 0.9, 0.95})
        for (int k : {64, 128, 256, 512, 1024, 2048, 4096})
        {
            const auto expected = feasible_region(FeasibilityThresholds{rho, k, 1e8, 10.0});
            const auto &row = rows[i++];
            REQUIRE(row.size() == 6);
            CHECK(num(row[0]) == rho);
            CHECK(num(row[1]) == k);
            CHECK(num(row[4]) == expected.tau_max_s);
            CHECK(num(row[5]) == expected.nu_max_hz);
        }
}

TEST_CASE("manifest references the config hash")
{
    const auto dir = scratch("manifest");
    REQUIRE(run_config(kFeasibility, dir).status == 0);
    const auto m = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
    CHECK(m.at("experiment") == "feasibility_region");
    CHECK(m.at("seed") == 1);
    CHECK(m.at("library_version") == kLibraryVersion);
    CHECK(m.at("wall_time_s").get<double>() >= 0.0);
    CHECK(m.at("outputs") == nlohmann::json::array({"feasibility_region.csv"}));
    CHECK(m.at("config") == nlohmann::json::parse(kFeasibility));
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(nlohmann::json::parse(kFeasibility).dump())));
    CHECK(m.at("config_hash") == std::string(hex));

    // formatting does not change the hash, the seed override does
    const auto compact = run_experiment(nlohmann::json::parse(kFeasibility).dump(), dir / "compact");
    CHECK(compact.config_hash == m.at("config_hash").get<std::string>());
    const auto reseeded = run_experiment(kFeasibility, dir / "reseeded", 99);
    CHECK(reseeded.seed == 99);
    CHECK(reseeded.config_hash != compact.config_hash);
    CHECK(nlohmann::json::parse(slurp(dir / "reseeded" / "manifest.json")).at("config").at("seed") == 99);
}

TEST_CASE("fnv1a64 reference values")
{
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("identical runs produce byte-identical CSV files")
{
    const std::vector<std::string> configs = {
        kFeasibility,
        R"({"experiment": "papr_ccdf", "seed": 5, "waveform": ["ofdm", "otfs_zak", "ddam"],
            "papr": {"trials": 200, "num_subcarriers": 64, "delay_bins": 32, "doppler_bins": 4,
                     "num_tx_antennas": 8, "block_len": 128, "max_delay_samples": 8}})",
        R"({"experiment": "se_sweep", "seed": 0, "se": {"n_max": [8, 16, 32]}})",
        R"({"experiment": "ber_vs_snr", "seed": 3, "waveform": ["ddam", "ofdm"],
            "channel": {"random": {"mt": 8, "num_paths": 2, "delay_range_s": [0, 1e-7],
                                   "doppler_range_hz": [-1e4, 1e4], "doppler_grid_hz": 1e5}},
            "ber": {"snr_db": [-2, 6], "num_symbols": 2048, "block_len": 1024}})",
        R"({"experiment": "equivalent_channel_report", "seed": 4,
            "channel": {"random": {"mt": 16, "num_paths": 3, "delay_range_s": [0, 2e-7]}}})",
        R"({"experiment": "complexity_table", "seed": 2, "complexity": {"mt": [8], "k": [256], "l": [2]}})"};
    for (std::size_t c = 0; c < configs.size(); ++c)
    {
        const auto a = scratch("repeat_a" + std::to_string(c)), b = scratch("repeat_b" + std::to_string(c));
        CAPTURE(configs[c]);
        REQUIRE(run_config(configs[c], a).status == 0);
        REQUIRE(run_config(configs[c], b).status == 0);
        std::size_t compared = 0;
        for (const auto &entry : fs::directory_iterator(a / "out"))
        {
            const auto name = entry.path().filename();
            if (name == "manifest.json")
                continue;
            CHECK(slurp(entry.path()) == slurp(b / "out" / name));
            ++compared;
        }
        CHECK(compared >= 1);
    }
}

TEST_CASE("experiment outputs")
{
    const auto dir = scratch("outputs");
    const auto se = run_experiment(R"({"experiment": "se_sweep", "seed": 0, "se": {"n_max": [16]}})", dir / "se");
    CHECK(se.outputs == std::vector<std::string>{"se_sweep.csv"});
    const auto rows = read_csv(dir / "se" / "se_sweep.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"n_max", "waveform", "value"});
    CHECK(rows[1][1] == "ofdm");
    CHECK(rows[2][1] == "otfs");
    CHECK(rows[3][1] == "ddam");

    const auto eq = run_experiment(R"({"experiment": "equivalent_channel_report", "seed": 4,
        "channel": {"array": {"mt": 8}, "sample_rate_hz": 1e8,
                    "paths": [{"gain_re": 1, "gain_im": 0, "delay_s": 0, "doppler_hz": 0, "aod": 0},
                              {"gain_re": 0, "gain_im": 0.5, "delay_s": 3e-8, "doppler_hz": 0, "aod": 0.5}]}})",
                                   dir / "eq");
    CHECK(fs::exists(dir / "eq" / "equivalent_taps.csv"));
    CHECK(fs::exists(dir / "eq" / "channel.json"));
    CHECK(fs::exists(dir / "eq" / "psi.json"));
    const auto summary = read_csv(dir / "eq" / "equivalent_channel.csv");
    bool found = false;
    for (const auto &row : summary)
        if (row[0] == "n_max")
        {
            CHECK(row[1] == "3");
            found = true;
        }
    CHECK(found);

    const auto cx = run_experiment(R"({"experiment": "complexity_table", "seed": 0,
        "complexity": {"mt": [64], "k": [1024], "m": [16], "l": [3], "measured": false}})", dir / "cx");
    const auto table = read_csv(dir / "cx" / "complexity_table.csv");
    CHECK(table[0][0] == "variant");
    bool ofdm = false;
    for (const auto &row : table)
        if (row[0] == "ofdm")
        {
            CHECK(row[6] == "704");
            ofdm = true;
        }
    CHECK(ofdm);
}

TEST_CASE("validation diagnostics and exit codes")
{
    const auto dir = scratch("validation");
    SUBCASE("minimal config validates")
    {
        spit(dir / "ok.json", R"({"experiment": "se_sweep", "seed": 0})");
        CHECK(cli("run --config \"" + (dir / "ok.json").string() + "\" --validate-only", dir).status == 0);
        CHECK_FALSE(fs::exists(dir / "out"));
    }
    SUBCASE("missing seed names the field")
    {
        const auto r = run_config(R"({"experiment": "se_sweep"})", dir);
        CHECK(r.status == 2);
        CHECK(r.err.find("seed") != std::string::npos);
        CHECK_FALSE(fs::exists(dir / "out"));
    }
    SUBCASE("negative SNR is allowed, negative K is not")
    {
        const std::string base = R"({"experiment": "ber_vs_snr", "seed": 1,
            "channel": {"random": {"mt": 4, "num_paths": 1}}, "ber": {"snr_db": [-5, 0], )";
        CHECK_NOTHROW(validate_config(base + R"("num_subcarriers": 64}})"));
        const auto r = run_config(base + R"("num_subcarriers": -64}})", dir);
        CHECK(r.status == 2);
        CHECK(r.err.find("ber.num_subcarriers") != std::string::npos);
    }
    SUBCASE("zero PAPR trials is rejected")
    {
        const auto r = run_config(R"({"experiment": "papr_ccdf", "seed": 1, "papr": {"trials": 0}})", dir);
        CHECK(r.status == 2);
        CHECK(r.err.find("papr.trials") != std::string::npos);
    }
    SUBCASE("unknown experiment and unknown fields")
    {
        CHECK(run_config(R"({"experiment": "bogus", "seed": 1})", dir).status == 2);
        const auto r = run_config(R"({"experiment": "se_sweep", "seed": 1, "se": {"nmax": [4]}})", dir);
        CHECK(r.status == 2);
        CHECK(r.err.find("se.nmax") != std::string::npos);
    }
    SUBCASE("syntax errors carry a position")
    {
        const auto r = run_config("{\n  \"experiment\": \"se_sweep\",\n  \"seed\": 1,,\n}", dir);
        CHECK(r.status == 2);
        CHECK(r.err.find("line 3") != std::string::npos);
    }
    SUBCASE("bad invocations")
    {
        CHECK(cli("run", dir).status == 2);
        CHECK(cli("run --config \"" + (dir / "missing.json").string() + "\" --out x", dir).status == 2);
        CHECK(cli("frobnicate", dir).status == 2);
    }
    SUBCASE("unwritable output directory is a runtime error")
    {
        spit(dir / "blocker", "not a directory");
        spit(dir / "config.json", R"({"experiment": "se_sweep", "seed": 0})");
        const auto r = cli("run --config \"" + (dir / "config.json").string() + "\" --out \"" +
                               (dir / "blocker" / "sub").string() + "\"",
                           dir);
        CHECK(r.status == 3);
    }
    SUBCASE("channel is required for link experiments")
    {
        CHECK_THROWS_WITH_AS(validate_config(R"({"experiment": "ber_vs_snr", "seed": 1})"),
                             doctest::Contains("channel"), ConfigError);
    }
}
