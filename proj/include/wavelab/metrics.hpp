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

#ifndef WAVELAB_METRICS_HPP
#define WAVELAB_METRICS_HPP

#include "wavelab/constellation.hpp"
#include "wavelab/types.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace wavelab
{
    enum class Waveform
    {
        Ofdm,
        OtfsIsfft,
        OtfsZak,
        Ddam,
        DdamOfdm,
        DdamOtfs
    };

    std::string to_string(Waveform w);
    Waveform waveform_from_string(const std::string &name);

    // ---------------------------------------------------------------------------
    // PAPR
    // ---------------------------------------------------------------------------

    // 10 log10(peak power / mean power) of one row. Throws on an empty or all-zero row.
    double papr_db(const CVector &row);

    // Worst antenna over samples [begin, begin + count); count < 0 runs to the end.
    double papr_db(const Frame &frame, Eigen::Index begin = 0, Eigen::Index count = -1);

    struct PaprCcdf
    {
        std::vector<double> thresholds_db; // ascending
        std::vector<double> exceed_probability;
        std::vector<double> samples_db; // per-trial PAPR, sorted ascending

        // Smallest observed PAPR x with P(PAPR > x) <= probability.
        double papr_at(double probability) const;
    };

    // 0, 0.25, ..., 14 dB
    std::vector<double> default_papr_thresholds();

    // One trial: draws a transmit block from `rng` and returns its PAPR in dB.
    using PaprGenerator = std::function<double(std::mt19937_64 &rng)>;

    // Trials run in parallel with per-trial seeds; the result depends only on
    // the seed and the trial count.
    PaprCcdf papr_ccdf(const PaprGenerator &generator, int num_trials, std::uint64_t seed,
                       std::vector<double> thresholds_db = default_papr_thresholds());

    struct PaprScenario
    {
        Waveform waveform = Waveform::Ddam;
        Modulation modulation = Modulation::Qpsk;
        int num_subcarriers = 512; // OFDM
        int delay_bins = 128;      // OTFS K
        int doppler_bins = 16;     // OTFS M
        int num_paths = 3;         // DDAM
        int num_tx_antennas = 64;  // DDAM
        int block_len = 1024;      // DDAM
        int max_delay_samples = 32;
        double max_doppler_hz = 0.0; // symmetric range, DDAM
        double sample_rate = 1e8;
        int oversampling = 4; // for IDFT-based waveforms
    };

    // Transmit-block generators used for the PAPR comparison. OFDM and the ISFFT
    // variant of OTFS are rendered through an oversampled IDFT; DDAM and Zak-OTFS
    // are single-carrier streams measured at the symbol rate. DDAM blocks use a
    // fresh random channel per trial with genie PSI and ZF beams, and exclude
    // the guard interval.
    PaprGenerator make_papr_generator(const PaprScenario &scenario);

    // ---------------------------------------------------------------------------
    // Spectral efficiency
    // ---------------------------------------------------------------------------

    struct OverheadParams
    {
        int num_subcarriers = 64; // K (OFDM and OTFS delay bins)
        int doppler_bins = 16;    // M (OTFS)
        int cp_len = 0;           // per OFDM symbol or per OTFS frame
        int block_len = 1024;     // N (DDAM)
        int max_delay_samples = 0; // n_max (DDAM guard = 2 n_max)
    };

    // Fraction of transmitted samples carrying information. DDAM-X combinations
    // are rated by their multicarrier part.
    double se_overhead(Waveform w, const OverheadParams &p);

    // ---------------------------------------------------------------------------
    // Error rates
    // ---------------------------------------------------------------------------

    double ber(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits);

    // ---------------------------------------------------------------------------
    // Complexity
    // ---------------------------------------------------------------------------

    enum class ComplexityVariant
    {
        Ofdm,
        OtfsIsfft,
        OtfsZak,
        DdamMrt,
        DdamZf,
        DdamMmse
    };

    std::string to_string(ComplexityVariant v);
    const std::vector<ComplexityVariant> &all_complexity_variants();

    struct ComplexityParams
    {
        int num_tx_antennas = 64; // M_t
        int num_subcarriers = 1024; // K
        int doppler_bins = 16;    // M
        int num_paths = 3;        // L
        double symbols_per_block = 1e6; // N_s, information symbols per coherence block

        void validate() const;
    };

    struct ComplexityCost
    {
        double tx = 0.0; // complex multiplies per information symbol
        double rx = 0.0;
    };

    // Analytic orders of growth with unit constants.
    ComplexityCost complexity_model(ComplexityVariant v, const ComplexityParams &p);

    // Counts the multiplies issued by the library's own transmit and receive
    // paths for one block, amortizing beamformer design over N_s symbols.
    // Channel propagation and equalization are not charged.
    ComplexityCost measured_complexity(ComplexityVariant v, const ComplexityParams &p, std::uint64_t seed = 1);

} // namespace wavelab

#endif
