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

#ifndef WAVELAB_DETAIL_CONFIG_MODEL_HPP
#define WAVELAB_DETAIL_CONFIG_MODEL_HPP

#include "wavelab/channel.hpp"
#include "wavelab/link.hpp"
#include "wavelab/metrics.hpp"
#include "wavelab/ofdm.hpp"

#include "detail/json_codec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wavelab::detail
{
    struct RandomChannelSettings
    {
        ArrayConfig array;
        int num_paths = 3;
        std::pair<double, double> delay_range_s{0.0, 0.0};
        std::pair<double, double> doppler_range_hz{0.0, 0.0};
        double sample_rate = 1e8;
        GridSnap snap;
    };

    struct ChannelSettings
    {
        std::optional<MultipathChannel> fixed;
        RandomChannelSettings random;

        MultipathChannel realize(std::uint64_t seed) const;
    };

    struct FeasibilitySettings
    {
        std::vector<double> rho_th{0.5, 0.7, 0.9, 0.95};
        std::vector<int> k_th{64, 128, 256, 512, 1024, 2048, 4096};
        std::vector<double> bandwidth_hz{1e8};
        std::vector<double> xi{10.0};
    };

    struct PaprSettings
    {
        int trials = 1000;
        std::vector<Waveform> waveforms{Waveform::Ddam, Waveform::OtfsZak, Waveform::Ofdm};
        PaprScenario scenario;
    };

    struct SeSettings
    {
        int num_subcarriers = 64;
        int doppler_bins = 16;
        int block_len = 1024;
        std::vector<int> n_max{8, 16, 32, 64, 128, 256};
    };

    struct BerSettings
    {
        std::vector<double> snr_db{0, 5, 10, 15, 20};
        std::uint64_t num_symbols = 100000;
        std::vector<Waveform> waveforms{Waveform::Ddam, Waveform::Ofdm};
        LinkOptions link;
    };

    struct EquivalentSettings
    {
        BeamCriterion criterion = BeamCriterion::Zf;
        CompensationMode mode = CompensationMode::PathBased;
        PowerAllocation allocation = PowerAllocation::GainProportional;
        double noise_var = 0.0;
        DdamFrameConfig frame;
        DdWindow window;
        PsiPerturbation psi_error;
    };

    struct ComplexitySettings
    {
        std::vector<int> mt{8, 64};
        std::vector<int> k{256, 1024};
        std::vector<int> m{16};
        std::vector<int> l{2, 4};
        double ns = 1e6;
        bool measured = true;
    };

    struct ExperimentConfig
    {
        std::string experiment;
        std::uint64_t seed = 0;
        Modulation modulation = Modulation::Qpsk;
        std::optional<ChannelSettings> channel;
        FeasibilitySettings thresholds;
        PaprSettings papr;
        SeSettings se;
        BerSettings ber;
        EquivalentSettings equivalent;
        ComplexitySettings complexity;
        Json echo; // the parsed document, with the effective seed
    };

    // Throws ConfigError.
    ExperimentConfig parse_config(const std::string &text);
}

#endif
