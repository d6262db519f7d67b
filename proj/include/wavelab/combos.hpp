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

#ifndef WAVELAB_COMBOS_HPP
#define WAVELAB_COMBOS_HPP

#include "wavelab/ddam.hpp"
#include "wavelab/ofdm.hpp"
#include "wavelab/otfs.hpp"

#include <vector>

namespace wavelab
{
    // ---------------------------------------------------------------------------
    // DDAM-OFDM
    // ---------------------------------------------------------------------------

    struct DdamOfdmTransmission
    {
        Frame frame;               // M_t rows: OFDM symbols through the DDAM chain, then the guard
        double power_scale = 1.0;  // unit energy per OFDM sample
        CompensationPlan plan;
        int guard_len = 0;
        long sync_offset = 0;      // n_max - W_tau: where the receiver's first CP starts
        CVector channel_response;  // predicted per-bin equivalent response, relative to the sync point
        CVector subcarrier_weights; // conj(G)/|G| per bin, 1 where G vanishes
    };

    // Stage 1 phase-aligns every subcarrier on the equivalent channel the
    // transmitter predicts from its PSI; stage 2 runs the OFDM stream through
    // path beamforming and windowed delay-Doppler compensation.
    // Requires cfg.cp_len >= window.delay_samples.
    // doppler_resolution_hz <= 0 quantizes Dopplers on the grid of the whole stream.
    DdamOfdmTransmission ddam_ofdm_transmit(const std::vector<CVector> &freq_symbols, const PathStateInfo &psi,
                                            const BeamformerSet &beams, const OfdmConfig &cfg,
                                            const DdWindow &window = {},
                                            CompensationMode mode = CompensationMode::PathBased,
                                            int half_length = 32, double doppler_resolution_hz = 0.0);

    // One-tap equalization against power_scale * |G[k]| per bin.
    std::vector<CVector> ddam_ofdm_receive(const Frame &rx, const DdamOfdmTransmission &tx, const OfdmConfig &cfg,
                                           int num_symbols);

    // ---------------------------------------------------------------------------
    // DDAM-OTFS
    // ---------------------------------------------------------------------------

    struct DdamOtfsTransmission
    {
        Frame frame;
        double power_scale = 1.0; // unit energy per OTFS sample
        CompensationPlan plan;
        BeamformerSet beams;
        int guard_len = 0;
        long sync_offset = 0; // n_max - W_tau
    };

    // OTFS modulation followed by the DDAM chain. The compensation Doppler grid is
    // the OTFS Doppler resolution B/(MK).
    DdamOtfsTransmission ddam_otfs_transmit(const DdGrid &grid, const PathStateInfo &psi, const BeamformerSet &beams,
                                            const OtfsConfig &cfg, OtfsVariant variant, const DdWindow &window = {},
                                            CompensationMode mode = CompensationMode::PathBased,
                                            int half_length = 32);

    // End-to-end DD map of OTFS -> DDAM -> channel -> OTFS demodulation, sampled
    // at the transmission's sync offset and scaled by its power_scale.
    CMatrix ddam_otfs_effective_matrix(const MultipathChannel &channel, const DdamOtfsTransmission &tx,
                                       const OtfsConfig &cfg, OtfsVariant variant, const ApplyOptions &opts = {});

    DdGrid ddam_otfs_receive(const Frame &rx, const CMatrix &effective, double noise_var,
                             const DdamOtfsTransmission &tx, const OtfsConfig &cfg, OtfsVariant variant);

    // Plain MISO OTFS baseline: one MRT beam toward the composite channel,
    // f ~ sum_l conj(gain_l) a(aod_l).
    CVector composite_mrt_beam(const PathStateInfo &psi);

    // DD map of plain MISO OTFS with beam `beam` over the physical channel.
    CMatrix otfs_miso_effective_matrix(const MultipathChannel &channel, const CVector &beam, const OtfsConfig &cfg,
                                       OtfsVariant variant, const ApplyOptions &opts = {});

} // namespace wavelab

#endif
