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

#ifndef WAVELAB_DDAM_HPP
#define WAVELAB_DDAM_HPP

#include "wavelab/channel.hpp"
#include "wavelab/constellation.hpp"
#include "wavelab/types.hpp"

#include <string>
#include <vector>

namespace wavelab
{
    // ---------------------------------------------------------------------------
    // Path state information
    // ---------------------------------------------------------------------------

    struct PsiPath
    {
        long delay_samples = 0;        // floor of the delay in samples
        double fractional_delay = 0.0; // in [0, 1)
        double doppler_hz = 0.0;
        double aod = 0.0;
        Complex gain_estimate{1.0, 0.0};

        double total_delay() const { return double(delay_samples) + fractional_delay; }
        // Delay tap holding most of the path's power.
        long dominant_delay_tap() const { return delay_samples + (fractional_delay >= 0.5 ? 1 : 0); }
    };

    /// What the transmitter knows about each propagation path.
    struct PathStateInfo
    {
        ArrayConfig array;
        double sample_rate = 1.0;
        std::vector<PsiPath> paths;
        bool genie = true;

        std::size_t num_paths() const { return paths.size(); }
        long max_delay_tap() const; // n_max over the dominant delay taps
    };

    /// Standard deviations of independent Gaussian estimation errors.
    struct PsiPerturbation
    {
        double delay_err_samples = 0.0;
        double doppler_err_hz = 0.0;
        double aod_err = 0.0;
        double gain_err = 0.0; // complex circular, total variance gain_err^2

        bool is_zero() const
        {
            return delay_err_samples == 0.0 && doppler_err_hz == 0.0 && aod_err == 0.0 && gain_err == 0.0;
        }
    };

    PathStateInfo psi_from_channel(const MultipathChannel &channel, const PsiPerturbation &perturbation = {},
                                   std::uint64_t seed = 0);

    // The transmitter's model of the physical channel.
    MultipathChannel channel_from_psi(const PathStateInfo &psi);

    // ---------------------------------------------------------------------------
    // Path-based beamforming
    // ---------------------------------------------------------------------------

    enum class BeamCriterion
    {
        Mrt,
        Zf,
        Rzf,
        Mmse
    };

    enum class PowerAllocation
    {
        GainProportional, // p_l proportional to |gain_estimate_l|^2
        Uniform
    };

    std::string to_string(BeamCriterion c);
    BeamCriterion beam_criterion_from_string(const std::string &name);

    struct BeamformerSet
    {
        CMatrix vectors; // M_t x L, unit-norm columns f_l
        BeamCriterion criterion = BeamCriterion::Mrt;
        std::vector<double> power; // per-path weights, sum to 1

        CVector beam(std::size_t l) const { return vectors.col(Eigen::Index(l)); }
    };

    /// ZF could not null the other paths: too many paths or collinear steering.
    class ZfRankError : public std::runtime_error
    {
    public:
        ZfRankError(const std::string &what, std::vector<std::size_t> paths)
            : std::runtime_error(what), offending_paths(std::move(paths)) {}
        std::vector<std::size_t> offending_paths;
    };

    // MRT:  f_l = a_l / |a_l|
    // ZF:   f_l = projection of a_l onto the orthogonal complement of the other paths
    // RZF:  f_l ~ (A A^H + L*noise_var I)^-1 a_l
    // MMSE: f_l ~ (A P A^H + noise_var I)^-1 a_l, P = diag(power)
    BeamformerSet path_beamformers(const PathStateInfo &psi, BeamCriterion criterion, double noise_var = 0.0,
                                   PowerAllocation allocation = PowerAllocation::GainProportional);

    // ---------------------------------------------------------------------------
    // Delay-Doppler compensation
    // ---------------------------------------------------------------------------

    enum class CompensationMode
    {
        PathBased, // one DD tap (the strongest) per path
        TapBased   // every DD tap within -30 dB of the path's strongest
    };

    std::string to_string(CompensationMode m);
    CompensationMode compensation_mode_from_string(const std::string &name);

    inline constexpr double kTapThresholdDb = -30.0;

    struct DdamFrameConfig
    {
        int block_len = 1024;               // N information symbols per block
        int guard_len = -1;                 // trailing zeros; < 0 selects 2 * n_max
        double doppler_resolution_hz = 0.0; // Doppler grid; <= 0 selects sample_rate / block_len
        int half_length = 32;               // fractional-delay filter model for tap-based plans
    };

    /// One time-shifted, phase-rotated copy of the symbol stream sent on the
    /// beam of `path`. Its contribution through that path arrives at
    /// tap_delay + shift with residual Doppler (true Doppler - doppler_comp_hz).
    struct CompensationTerm
    {
        std::size_t path = 0;
        long tap_delay = 0;         // integer DD tap being aligned
        double tap_doppler_hz = 0.0; // on-grid Doppler of that tap
        long shift = 0;             // kappa, samples
        double doppler_comp_hz = 0.0;
        Complex weight{1.0, 0.0};   // amplitude and co-phasing, excluding the Doppler phase term

        Complex coefficient(double sample_rate) const;
    };

    struct DdWindow
    {
        long delay_samples = 0; // W_tau
        double doppler_hz = 0.0; // W_nu
    };

    struct CompensationPlan
    {
        std::vector<CompensationTerm> terms;
        long n_max = 0; // alignment target
        double sample_rate = 1.0;
        double doppler_resolution_hz = 1.0;
        CompensationMode mode = CompensationMode::PathBased;
        DdWindow window;

        long max_shift() const;
    };

    CompensationPlan build_compensation_plan(const PathStateInfo &psi, const BeamformerSet &beams,
                                             const DdamFrameConfig &frame, CompensationMode mode);

    // Relaxes exact alignment: residual delays land in [n_max - W_tau, n_max] with
    // the smallest shifts, residual Dopplers in [-W_nu/2, W_nu/2]. A zero window
    // returns the plan unchanged.
    CompensationPlan delay_doppler_window(const CompensationPlan &plan, const DdWindow &window);

    int resolve_guard_len(const DdamFrameConfig &frame, const CompensationPlan &plan);

    // Unnormalized DDAM chain:
    //   x[n] = sum_terms coeff_t f_{path(t)} exp(-i 2 pi nu_t n / B) s[n - kappa_t]
    // Output has M_t rows and stream.size() + guard_len samples.
    Frame ddam_precode(const CVector &stream, const CompensationPlan &plan, const BeamformerSet &beams,
                       int guard_len);

    struct DdamTransmission
    {
        Frame frame;
        double power_scale = 1.0; // applied to the unnormalized chain
        CompensationPlan plan;
        int guard_len = 0;
    };

    // ddam_precode scaled to unit transmit energy per information symbol.
    DdamTransmission ddam_modulate(const CVector &symbols, const PathStateInfo &psi, const BeamformerSet &beams,
                                   const DdamFrameConfig &frame, CompensationMode mode);
    DdamTransmission ddam_modulate(const CVector &symbols, const CompensationPlan &plan, const BeamformerSet &beams,
                                   const DdamFrameConfig &frame);

    // ---------------------------------------------------------------------------
    // Equivalent channel
    // ---------------------------------------------------------------------------

    struct EquivalentChannel
    {
        std::vector<Complex> taps; // taps[i] is the response at lag first_lag + i
        long first_lag = 0;
        long dominant_lag = 0;
        Complex dominant_gain{};
        double residual_isi_power = 0.0;
        long delay_spread_samples = 0; // spread of the significant path arrivals
        double residual_doppler_hz = 0.0;

        Complex tap(long lag) const;
        long last_lag() const { return first_lag + long(taps.size()) - 1; }
    };

    // End-to-end scalar response of the unnormalized chain (power_scale = 1),
    // measured by driving ddam_precode with unit impulses.
    EquivalentChannel equivalent_channel(const MultipathChannel &channel, const CompensationPlan &plan,
                                         const BeamformerSet &beams, const DdamFrameConfig &frame,
                                         const ApplyOptions &opts = {});

    EquivalentChannel equivalent_channel(const MultipathChannel &channel, const PathStateInfo &psi,
                                         const BeamformerSet &beams, const DdamFrameConfig &frame,
                                         CompensationMode mode, const ApplyOptions &opts = {});

    // ---------------------------------------------------------------------------
    // Receiver
    // ---------------------------------------------------------------------------

    inline constexpr int kPilotLength = 32;

    struct DdamDetection
    {
        CVector soft; // y[n + n_max] / g
        CVector hard; // nearest constellation points
    };

    // Symbol-wise detection: s_hat[n] = slice(y[n + n_max] / g).
    DdamDetection ddam_demodulate(const Frame &rx, Complex gain, long n_max, int num_symbols,
                                  Modulation mod = Modulation::Qpsk);

    // Least-squares gain from known pilots occupying the first symbols of the block.
    Complex estimate_gain_from_pilots(const Frame &rx, const CVector &pilots, long n_max);

    CVector pilot_sequence(int length = kPilotLength);

} // namespace wavelab

#endif
