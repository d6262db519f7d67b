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

#ifndef WAVELAB_LINK_HPP
#define WAVELAB_LINK_HPP

#include "wavelab/channel.hpp"
#include "wavelab/constellation.hpp"
#include "wavelab/ddam.hpp"
#include "wavelab/metrics.hpp"
#include "wavelab/ofdm.hpp"
#include "wavelab/otfs.hpp"

#include <cstdint>

namespace wavelab
{
    /// Uncoded link settings shared by all waveforms; each waveform reads the
    /// fields that apply to it.
    struct LinkOptions
    {
        Modulation modulation = Modulation::Qpsk;

        // DDAM family
        BeamCriterion criterion = BeamCriterion::Zf;
        CompensationMode mode = CompensationMode::PathBased;
        PowerAllocation allocation = PowerAllocation::GainProportional;
        PsiPerturbation psi_error;
        DdWindow window;
        int block_len = 1024;   // DDAM block; B / block_len is also the Doppler grid of DDAM-OFDM
        bool pilot_gain = false; // estimate the gain from a pilot prefix instead of the genie value
        int half_length = 32;

        // OFDM family
        OfdmConfig ofdm{64, 16, 1.0};
        int ofdm_symbols_per_frame = 8; // DDAM-OFDM only

        // OTFS family
        OtfsConfig otfs{16, 64, 0, 1.0};
        OtfsVariant otfs_variant = OtfsVariant::Zak;
    };

    struct BerCount
    {
        std::uint64_t bit_errors = 0;
        std::uint64_t bits = 0;

        double rate() const { return bits == 0 ? 0.0 : double(bit_errors) / double(bits); }
    };

    // Monte Carlo bit error count over at least num_symbols information symbols
    // (rounded up to whole blocks). SNR is the received signal power over the
    // noise variance at the detector input; kNoNoise runs noiseless. Receivers
    // know the physical channel exactly. The OFDM baseline uses per-subcarrier
    // MRT and the ICI-free diagonal equalizer; OTFS uses one composite MRT beam
    // and MMSE detection on the dense DD map.
    BerCount simulate_ber(Waveform waveform, const MultipathChannel &channel, double snr_db,
                          std::uint64_t num_symbols, std::uint64_t seed, const LinkOptions &opts = {});

} // namespace wavelab

#endif
