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

#ifndef WAVELAB_OTFS_HPP
#define WAVELAB_OTFS_HPP

#include "wavelab/channel.hpp"
#include "wavelab/types.hpp"

#include <functional>
#include <iosfwd>

namespace wavelab
{
    /// OTFS frame layout: K delay bins by M Doppler bins, mapped to M*K time
    /// samples with delay varying fastest (time index k + K*m), plus one CP per
    /// frame.
    struct OtfsConfig
    {
        int doppler_bins = 16;  // M
        int delay_bins = 128;   // K
        int cp_len = 0;         // samples, one CP per frame
        double sample_rate = 1.0;

        void validate() const;

        int frame_length() const { return doppler_bins * delay_bins; }
        double delay_resolution() const { return 1.0 / sample_rate; }
        double doppler_resolution() const { return sample_rate / double(frame_length()); }
    };

    // K x M, rows index delay and columns index Doppler.
    using DdGrid = CMatrix;

    enum class OtfsVariant
    {
        Isfft,
        Zak
    };

    // ISFFT (unitary DFT along delay, unitary IDFT along Doppler) followed by a
    // K-point IDFT per time-frequency column with rectangular pulses.
    Frame otfs_modulate_isfft(const DdGrid &grid, const OtfsConfig &cfg);
    DdGrid otfs_demodulate_isfft(const Frame &rx, const OtfsConfig &cfg, Eigen::Index offset = 0);

    // Inverse discrete Zak transform: s[k + K m] = M^-1/2 sum_m' x[k, m'] exp(i 2 pi m m' / M).
    Frame otfs_modulate_zak(const DdGrid &grid, const OtfsConfig &cfg);
    DdGrid otfs_demodulate_zak(const Frame &rx, const OtfsConfig &cfg, Eigen::Index offset = 0);

    Frame otfs_modulate(const DdGrid &grid, const OtfsConfig &cfg, OtfsVariant variant);
    DdGrid otfs_demodulate(const Frame &rx, const OtfsConfig &cfg, OtfsVariant variant, Eigen::Index offset = 0);

    // ISFFT variant rendered per OFDM symbol through a zero-padded IDFT at
    // factor x the sample rate (no CP); used for PAPR of the band-limited envelope.
    Frame otfs_modulate_isfft_oversampled(const DdGrid &grid, const OtfsConfig &cfg, int factor);

    // MISO transmitter: the grid is weighted by beam[m] per antenna and every
    // antenna runs its own transform chain.
    Frame otfs_miso_modulate(const DdGrid &grid, const CVector &beam, const OtfsConfig &cfg, OtfsVariant variant);

    // Column j = k + K*m  <->  grid(k, m)
    CVector grid_to_vector(const DdGrid &grid);
    DdGrid vector_to_grid(const CVector &v, const OtfsConfig &cfg);

    using ScalarChannelOp = std::function<Frame(const Frame &)>;

    inline constexpr int kMaxDenseDdSize = 4096;

    // Brute-force end-to-end DD map: column j is the demodulated response to a unit
    // symbol at DD index j. Requires M*K <= kMaxDenseDdSize.
    CMatrix dd_effective_matrix(const ScalarChannelOp &channel, const OtfsConfig &cfg, OtfsVariant variant,
                                Eigen::Index rx_offset = 0);

    // Convenience overload for a single-antenna channel.
    CMatrix dd_effective_matrix(const MultipathChannel &scalar_channel, const OtfsConfig &cfg, OtfsVariant variant,
                                const ApplyOptions &opts = {});

    // x = (H^H H + noise_var I)^-1 H^H y. Throws when noise_var = 0 and H is singular.
    DdGrid mmse_equalize_dd(const DdGrid &received, const CMatrix &h, double noise_var, const OtfsConfig &cfg);

    // The linear filter W of mmse_equalize_dd (x = W y), for reuse across frames
    // that share one effective matrix.
    CMatrix mmse_dd_filter(const CMatrix &h, double noise_var);

    // Largest number of entries in any column whose power is within threshold_db
    // of that column's peak. Proxy for the equalizer bandwidth.
    int max_dominant_entries_per_column(const CMatrix &h, double threshold_db = -30.0);
    double mean_dominant_entries_per_column(const CMatrix &h, double threshold_db = -30.0);

    // Binary container: "DDG1", K, M, reserved (little-endian u32), then K*M
    // row-major (re, im) pairs as little-endian float64.
    void write_dd_grid(std::ostream &out, const DdGrid &grid);
    DdGrid read_dd_grid(std::istream &in);

} // namespace wavelab

#endif
