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

#ifndef WAVELAB_CHANNEL_HPP
#define WAVELAB_CHANNEL_HPP

#include "wavelab/types.hpp"

#include <limits>
#include <utility>
#include <vector>

namespace wavelab
{
    /// Uniform linear transmit array.
    struct ArrayConfig
    {
        int num_tx_antennas = 1;
        double element_spacing = 0.5; // in carrier wavelengths

        void validate() const;
    };

    /// One propagation path of the sparse channel.
    struct PathParams
    {
        Complex gain{1.0, 0.0};
        double delay_s = 0.0;
        double doppler_hz = 0.0;
        double aod = 0.0; // normalized spatial frequency in [-1, 1)
    };

    /// Ground-truth sparse time-varying multipath MISO channel.
    ///
    /// Immutable after construction. Path delays are quantized on the sample
    /// grid as round(tau * B); the residue is what the fractional-delay filter
    /// in apply_channel() reproduces.
    class MultipathChannel
    {
    public:
        MultipathChannel(ArrayConfig array, std::vector<PathParams> paths, double sample_rate);

        const ArrayConfig &array() const { return array_; }
        const std::vector<PathParams> &paths() const { return paths_; }
        const PathParams &path(std::size_t l) const { return paths_.at(l); }
        std::size_t num_paths() const { return paths_.size(); }
        double sample_rate() const { return sample_rate_; }

        double delay_spread() const;   // seconds
        double doppler_spread() const; // Hz

        double delay_in_samples(std::size_t l) const { return paths_.at(l).delay_s * sample_rate_; }
        long integer_delay(std::size_t l) const;
        double fractional_residue(std::size_t l) const; // delay_in_samples - integer_delay, in [-0.5, 0.5]
        long max_integer_delay() const;

    private:
        ArrayConfig array_;
        std::vector<PathParams> paths_;
        double sample_rate_;
    };

    // element m: exp(i * 2 pi * spacing * m * aod); throws std::domain_error for aod outside [-1, 1)
    CVector steering_vector(double aod, const ArrayConfig &array);

    // Columns are steering_vector(aods[l]).
    CMatrix steering_matrix(const std::vector<double> &aods, const ArrayConfig &array);

    MultipathChannel build_channel(const ArrayConfig &array, std::vector<PathParams> paths, double sample_rate);

    /// Optional on-grid snapping for randomly drawn scenarios.
    struct GridSnap
    {
        bool integer_delays = false;  // round each delay to the 1/B grid
        double doppler_grid_hz = 0.0; // > 0: round each Doppler to a multiple of it
    };

    // L paths, delays and Dopplers uniform in the given closed ranges, AoDs uniform
    // in [-1, 1) with circular pairwise separation >= 2/M_t, CN(0,1) gains scaled
    // to unit total power. Deterministic for a given seed.
    MultipathChannel sample_random_channel(const ArrayConfig &array, int num_paths,
                                           std::pair<double, double> delay_range_s,
                                           std::pair<double, double> doppler_range_hz,
                                           double sample_rate, std::uint64_t seed,
                                           GridSnap snap = {});

    struct ApplyOptions
    {
        int half_length = 32;               // fractional-delay filter half length
        double fractional_tolerance = 1e-9; // residues below this are treated as on-grid
    };

    // y[t] = sum_l alpha_l exp(i 2 pi nu_l t / B) a(aod_l)^H x_l[t], with x_l the input
    // delayed by tau_l. Output length is N + the largest path extent (integer delay, or
    // floor(delay) + half_length for fractional paths). Time index 0 of the output is
    // time index 0 of the input; filter precursors before t = 0 are not represented.
    Frame apply_channel(const MultipathChannel &channel, const Frame &tx, const ApplyOptions &opts = {});

    // Hann-windowed sinc taps h[k] = sinc(k - d) w(k - d), k = -half_length..half_length,
    // normalized to unit sum. Entry k + half_length of the result holds h[k].
    RVector fractional_delay_taps(double fractional_delay, int half_length);

    inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

    // Circular complex Gaussian noise at mean-power / variance = 10^(snr_db/10).
    // snr_db = kNoNoise returns the input unchanged.
    Frame add_awgn(const Frame &frame, double snr_db, std::uint64_t seed);

    // Circular complex Gaussian noise of the given per-sample variance.
    Frame add_noise(const Frame &frame, double noise_var, std::uint64_t seed);

    double mean_power(const Frame &frame);

} // namespace wavelab

#endif
