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

#ifndef WAVELAB_EXPERIMENT_HPP
#define WAVELAB_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wavelab
{
    inline constexpr const char *kLibraryVersion = "1.0.0";

    /// Invalid scenario file: JSON syntax (with line and column) or schema
    /// (with the offending field path, e.g. "papr.trials").
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Names accepted in the "experiment" field.
    const std::vector<std::string> &experiment_names();

    // Parses and checks a scenario. Throws ConfigError; no side effects.
    void validate_config(const std::string &text);

    struct RunSummary
    {
        std::string experiment;
        std::uint64_t seed = 0;
        std::string config_hash; // 16 hex digits
        std::vector<std::string> outputs; // file names written to the output directory
    };

    // Validates, runs the experiment and writes its CSV files plus manifest.json
    // into out_dir (created if needed). Result files depend only on the config
    // and the seed.
    RunSummary run_experiment(const std::string &config_text, const std::filesystem::path &out_dir,
                              std::optional<std::uint64_t> seed_override = std::nullopt);

    // 64-bit FNV-1a.
    std::uint64_t fnv1a64(std::string_view bytes);

} // namespace wavelab

#endif
