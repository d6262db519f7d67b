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

#include "wavelab/combos.hpp"

#include <cmath>

namespace wavelab
{
    namespace
    {
        double normalize_energy(Frame &frame, Eigen::Index reference_samples)
        {
            const double energy = frame.samples.squaredNorm();
            if (!(energy > 0.0))
                throw std::invalid_argument("transmit signal has zero energy");
            const double scale = std::sqrt(double(reference_samples) / energy);
            frame.samples *= scale;
            return scale;
        }

        ScalarChannelOp ddam_chain(const MultipathChannel &channel, const CompensationPlan &plan,
                                   const BeamformerSet &beams, int guard_len, double scale, const ApplyOptions &opts)
        {
            return [&channel, &plan, &beams, guard_len, scale, opts](const Frame &scalar) {
                Frame tx = ddam_precode(scalar.samples.row(0).transpose(), plan, beams, guard_len);
                tx.samples *= scale;
                return apply_channel(channel, tx, opts);
            };
        }
    }

    // ---------------------------------------------------------------------------
    // DDAM-OFDM
    // ---------------------------------------------------------------------------

    DdamOfdmTransmission ddam_ofdm_transmit(const std::vector<CVector> &freq_symbols, const PathStateInfo &psi,
                                            const BeamformerSet &beams, const OfdmConfig &cfg, const DdWindow &window,
                                            CompensationMode mode, int half_length, double doppler_resolution_hz)
    {
        cfg.validate();
        if (freq_symbols.empty())
            throw std::invalid_argument("ddam_ofdm_transmit: no OFDM symbols");
        if (cfg.cp_len < window.delay_samples)
            throw std::invalid_argument("ddam_ofdm_transmit: CP of " + std::to_string(cfg.cp_len) +
                                        " samples is shorter than the delay window of " +
                                        std::to_string(window.delay_samples));
        if (psi.sample_rate != cfg.sample_rate)
            throw std::invalid_argument("ddam_ofdm_transmit: PSI and OFDM sample rates differ");
        const int k = cfg.num_subcarriers;
        for (const auto &s : freq_symbols)
            if (s.size() != k)
                throw std::invalid_argument("ddam_ofdm_transmit: every OFDM symbol needs K values");

        const Eigen::Index stream_len = Eigen::Index(freq_symbols.size()) * cfg.symbol_length();
        DdamFrameConfig frame;
        frame.block_len = int(stream_len);
        frame.half_length = half_length;
        frame.doppler_resolution_hz = doppler_resolution_hz;

        DdamOfdmTransmission tx;
        tx.plan = delay_doppler_window(build_compensation_plan(psi, beams, frame, mode), window);
        tx.guard_len = resolve_guard_len(frame, tx.plan);
        tx.sync_offset = std::max(0L, tx.plan.n_max - window.delay_samples);

        // the transmitter's prediction of the scalar channel after the DDAM stage
        ApplyOptions opts;
        opts.half_length = half_length;
        const EquivalentChannel eq = equivalent_channel(channel_from_psi(psi), tx.plan, beams, frame, opts);
        tx.channel_response = CVector::Zero(k);
        tx.subcarrier_weights = CVector::Ones(k);
        for (int bin = 0; bin < k; ++bin)
        {
            Complex g{};
            for (std::size_t i = 0; i < eq.taps.size(); ++i)
            {
                const long lag = eq.first_lag + long(i) - tx.sync_offset;
                g += eq.taps[i] * cis(-kTwoPi * double(bin) * double(lag) / double(k));
            }
            tx.channel_response[bin] = g;
            if (std::abs(g) > 1e-15)
                tx.subcarrier_weights[bin] = std::conj(g) / std::abs(g);
        }

        CVector stream(stream_len);
        for (std::size_t s = 0; s < freq_symbols.size(); ++s)
        {
            const Frame sym = ofdm_modulate(freq_symbols[s].cwiseProduct(tx.subcarrier_weights), cfg);
            stream.segment(Eigen::Index(s) * cfg.symbol_length(), cfg.symbol_length()) = sym.samples.row(0).transpose();
        }
        tx.frame = ddam_precode(stream, tx.plan, beams, tx.guard_len);
        tx.power_scale = normalize_energy(tx.frame, stream_len);
        return tx;
    }

    std::vector<CVector> ddam_ofdm_receive(const Frame &rx, const DdamOfdmTransmission &tx, const OfdmConfig &cfg,
                                           int num_symbols)
    {
        cfg.validate();
        if (num_symbols < 1)
            throw std::invalid_argument("ddam_ofdm_receive: num_symbols must be >= 1");
        const CVector gain = tx.channel_response.cwiseAbs() * tx.power_scale;
        std::vector<CVector> out;
        for (int s = 0; s < num_symbols; ++s)
        {
            const CVector y = ofdm_demodulate(rx, cfg, tx.sync_offset + Eigen::Index(s) * cfg.symbol_length());
            out.push_back(ofdm_equalize_one_tap(y, gain).symbols);
        }
        return out;
    }

    // ---------------------------------------------------------------------------
    // DDAM-OTFS
    // ---------------------------------------------------------------------------

    DdamOtfsTransmission ddam_otfs_transmit(const DdGrid &grid, const PathStateInfo &psi, const BeamformerSet &beams,
                                            const OtfsConfig &cfg, OtfsVariant variant, const DdWindow &window,
                                            CompensationMode mode, int half_length)
    {
        cfg.validate();
        if (psi.sample_rate != cfg.sample_rate)
            throw std::invalid_argument("ddam_otfs_transmit: PSI and OTFS sample rates differ");
        const Frame scalar = otfs_modulate(grid, cfg, variant);

        DdamFrameConfig frame;
        frame.block_len = int(scalar.num_samples());
        frame.doppler_resolution_hz = cfg.doppler_resolution();
        frame.half_length = half_length;

        DdamOtfsTransmission tx;
        tx.beams = beams;
        tx.plan = delay_doppler_window(build_compensation_plan(psi, beams, frame, mode), window);
        tx.guard_len = resolve_guard_len(frame, tx.plan);
        tx.sync_offset = std::max(0L, tx.plan.n_max - window.delay_samples);
        tx.frame = ddam_precode(scalar.samples.row(0).transpose(), tx.plan, beams, tx.guard_len);
        tx.power_scale = normalize_energy(tx.frame, scalar.num_samples());
        return tx;
    }

    CMatrix ddam_otfs_effective_matrix(const MultipathChannel &channel, const DdamOtfsTransmission &tx,
                                       const OtfsConfig &cfg, OtfsVariant variant, const ApplyOptions &opts)
    {
        return dd_effective_matrix(ddam_chain(channel, tx.plan, tx.beams, tx.guard_len, tx.power_scale, opts), cfg,
                                   variant, tx.sync_offset);
    }

    DdGrid ddam_otfs_receive(const Frame &rx, const CMatrix &effective, double noise_var,
                             const DdamOtfsTransmission &tx, const OtfsConfig &cfg, OtfsVariant variant)
    {
        return mmse_equalize_dd(otfs_demodulate(rx, cfg, variant, tx.sync_offset), effective, noise_var, cfg);
    }

    CVector composite_mrt_beam(const PathStateInfo &psi)
    {
        if (psi.paths.empty())
            throw std::invalid_argument("composite_mrt_beam: PSI has no paths");
        CVector f = CVector::Zero(psi.array.num_tx_antennas);
        for (const auto &p : psi.paths)
            f += std::conj(p.gain_estimate) * steering_vector(p.aod, psi.array);
        const double norm = f.norm();
        if (!(norm > 0.0))
            throw std::runtime_error("composite_mrt_beam: path contributions cancel");
        return f / norm;
    }

    CMatrix otfs_miso_effective_matrix(const MultipathChannel &channel, const CVector &beam, const OtfsConfig &cfg,
                                       OtfsVariant variant, const ApplyOptions &opts)
    {
        if (beam.size() != channel.array().num_tx_antennas)
            throw std::invalid_argument("otfs_miso_effective_matrix: beam length does not match M_t");
        return dd_effective_matrix(
            [&](const Frame &scalar) {
                Frame tx(beam * scalar.samples.row(0), scalar.sample_rate);
                return apply_channel(channel, tx, opts);
            },
            cfg, variant);
    }

} // namespace wavelab
