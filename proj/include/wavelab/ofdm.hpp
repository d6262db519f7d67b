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

#ifndef WAVELAB_OFDM_HPP
#define WAVELAB_OFDM_HPP

#include "wavelab/channel.hpp"
#include "wavelab/types.hpp"

#include <string>
#include <vector>

namespace wavelab
{
    struct OfdmConfig
    {
        int num_subcarriers = 64; // K, power of two
        int cp_len = 0;           // samples
        double sample_rate = 1.0; // B, Hz

        void validate() const;

        double subcarrier_spacing() const { return sample_rate / num_subcarriers; } // B/K
        double symbol_duration() const { return num_subcarriers / sample_rate; }    // K/B
        double cp_duration() const { return cp_len / sample_rate; }
        // T_s / (T_s + T_cp)
        double cp_ratio() const { return double(num_subcarriers) / double(num_subcarriers + cp_len); }
        int symbol_length() const { return num_subcarriers + cp_len; }
    };

    /// Performance targets for the feasibility analysis: CP ratio at least
    /// rho_th and at most k_th subcarriers, with Doppler margin factor xi.
    struct FeasibilityThresholds
    {
        double rho_th = 0.9;
        int k_th = 1024;
        double bandwidth_hz = 1e8;
        double xi = 10.0;

        void validate() const;
    };

    // Rectangle [0, tau_max] x [0, nu_max] of admissible delay/Doppler spreads.
    struct FeasibleRegion
    {
        double tau_max_s = 0.0;
        double nu_max_hz = 0.0;

        bool contains(double tau_d, double nu_d) const
        {
            return tau_d >= 0.0 && nu_d >= 0.0 && tau_d <= tau_max_s && nu_d <= nu_max_hz;
        }
    };

    FeasibleRegion feasible_region(const FeasibilityThresholds &th);

    enum class OfdmConstraint
    {
        CpCoversDelaySpread,     // T_cp >= tau_d
        SpacingAboveDoppler,     // delta_f >= xi * nu_d
        SpacingBelowCoherenceBw, // delta_f <= 1 / tau_d
    };

    struct ConstraintViolation
    {
        OfdmConstraint constraint;
        std::string description;
    };

    struct ParameterVerdict
    {
        std::vector<ConstraintViolation> violations;
        bool feasible() const { return violations.empty(); }
        bool violates(OfdmConstraint c) const;
    };

    // All three constraints are closed inequalities; tau_d = 0 makes the coherence
    // bandwidth bound vacuous.
    ParameterVerdict check_parameters(const OfdmConfig &cfg, double tau_d, double nu_d, double xi = 10.0);

    // Unitary IDFT of K symbols with the last cp_len samples prepended.
    Frame ofdm_modulate(const CVector &freq_symbols, const OfdmConfig &cfg);

    // Same symbol rendered at factor x the sample rate through a zero-padded IDFT
    // (continuous-time envelope for PAPR measurement). The CP is not included.
    Frame ofdm_modulate_oversampled(const CVector &freq_symbols, const OfdmConfig &cfg, int factor);

    // Drops cp_len samples after `offset` and applies the unitary DFT to the next K.
    CVector ofdm_demodulate(const Frame &rx, const OfdmConfig &cfg, Eigen::Index offset = 0);

    struct OneTapResult
    {
        CVector symbols;
        std::vector<bool> erased; // bins whose response magnitude was below 1e-15
    };

    OneTapResult ofdm_equalize_one_tap(const CVector &freq_symbols, const CVector &channel_freq_response);

    // --- MISO baseline -------------------------------------------------------

    // Per-subcarrier MRT toward the composite channel response seen at
    // `reference_time` (samples). Column k is the unit-norm precoder for bin k.
    CMatrix ofdm_mrt_precoders(const MultipathChannel &channel, const OfdmConfig &cfg, double reference_time);

    // Precodes each subcarrier and runs one IDFT per antenna (M_t rows, K+cp samples).
    Frame ofdm_miso_modulate(const CVector &freq_symbols, const CMatrix &precoders, const OfdmConfig &cfg);

    // Diagonal of the post-DFT channel for a symbol whose CP starts at sample
    // `symbol_start`: the ICI-free per-bin gain including the Doppler average over
    // the DFT window. Requires integer path delays no larger than cp_len.
    CVector ofdm_diagonal_response(const MultipathChannel &channel, const CMatrix &precoders,
                                   const OfdmConfig &cfg, Eigen::Index symbol_start);

} // namespace wavelab

#endif
