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

#include "wavelab/link.hpp"
#include "wavelab/combos.hpp"
#include "wavelab/parallel.hpp"

#include <cmath>
#include <random>

namespace wavelab
{
    namespace
    {
        double noise_variance(double signal_power, double snr_db)
        {
            if (std::isinf(snr_db) && snr_db > 0)
                return 0.0;
            return signal_power / std::pow(10.0, snr_db / 10.0);
        }

        void count_errors(BerCount &c, const CVector &sent, const CVector &detected, Modulation mod)
        {
            const auto a = demap_hard(sent, mod);
            const auto b = demap_hard(detected, mod);
            for (std::size_t i = 0; i < a.size(); ++i)
                c.bit_errors += a[i] != b[i];
            c.bits += a.size();
        }

        // Runs `blocks` independent trials in parallel and sums the counts.
        template <typename Fn> BerCount accumulate(std::uint64_t blocks, std::uint64_t seed, Fn &&trial)
        {
            std::vector<BerCount> part(blocks);
            parallel_for(std::size_t(blocks), [&](std::size_t b) {
                std::mt19937_64 rng(trial_seed(seed, b));
                part[b] = trial(rng);
            });
            BerCount total;
            for (const auto &p : part)
            {
                total.bit_errors += p.bit_errors;
                total.bits += p.bits;
            }
            return total;
        }

        std::uint64_t blocks_for(std::uint64_t symbols, std::uint64_t per_block)
        {
            return std::max<std::uint64_t>(1, (symbols + per_block - 1) / per_block);
        }

        BerCount ddam_link(const MultipathChannel &channel, double snr_db, std::uint64_t num_symbols,
                           std::uint64_t seed, const LinkOptions &o)
        {
            const auto psi = psi_from_channel(channel, o.psi_error, seed);
            const double beam_noise = std::isinf(snr_db) ? 0.0 : std::pow(10.0, -snr_db / 10.0);
            const auto beams = path_beamformers(psi, o.criterion, beam_noise, o.allocation);
            DdamFrameConfig frame;
            frame.block_len = o.block_len;
            frame.half_length = o.half_length;
            const auto plan =
                delay_doppler_window(build_compensation_plan(psi, beams, frame, o.mode), o.window);
            ApplyOptions apply;
            apply.half_length = o.half_length;
            const EquivalentChannel eq = equivalent_channel(channel, plan, beams, frame, apply);
            const long sample = eq.dominant_lag;
            const int pilots = o.pilot_gain ? kPilotLength : 0;
            if (pilots >= o.block_len)
                throw std::invalid_argument("simulate_ber: block too short for the pilot prefix");
            const CVector pilot = pilot_sequence(kPilotLength);

            return accumulate(blocks_for(num_symbols, std::uint64_t(o.block_len - pilots)), seed,
                              [&](std::mt19937_64 &rng) {
                                  CVector s = random_symbols(std::size_t(o.block_len), o.modulation, rng);
                                  if (pilots > 0)
                                      s.head(pilots) = pilot;
                                  const auto tx = ddam_modulate(s, plan, beams, frame);
                                  Frame rx = apply_channel(channel, tx.frame, apply);
                                  const Complex genie = eq.dominant_gain * tx.power_scale;
                                  rx = add_noise(rx, noise_variance(std::norm(genie), snr_db), rng());
                                  const Complex g =
                                      pilots > 0 ? estimate_gain_from_pilots(rx, pilot, sample) : genie;
                                  const auto det = ddam_demodulate(rx, g, sample, o.block_len, o.modulation);
                                  BerCount c;
                                  count_errors(c, s.tail(o.block_len - pilots), det.hard.tail(o.block_len - pilots),
                                               o.modulation);
                                  return c;
                              });
        }

        BerCount ofdm_link(const MultipathChannel &channel, double snr_db, std::uint64_t num_symbols,
                           std::uint64_t seed, const LinkOptions &o)
        {
            OfdmConfig cfg = o.ofdm;
            cfg.sample_rate = channel.sample_rate();
            cfg.validate();
            const double reference = cfg.cp_len + 0.5 * cfg.num_subcarriers;
            const CMatrix precoders = ofdm_mrt_precoders(channel, cfg, reference);
            const CVector response = ofdm_diagonal_response(channel, precoders, cfg, 0);
            const double signal = response.squaredNorm() / double(cfg.num_subcarriers);

            return accumulate(blocks_for(num_symbols, std::uint64_t(cfg.num_subcarriers)), seed,
                              [&](std::mt19937_64 &rng) {
                                  const CVector x = random_symbols(std::size_t(cfg.num_subcarriers), o.modulation, rng);
                                  Frame rx = apply_channel(channel, ofdm_miso_modulate(x, precoders, cfg));
                                  rx = add_noise(rx, noise_variance(signal, snr_db), rng());
                                  const auto eq = ofdm_equalize_one_tap(ofdm_demodulate(rx, cfg), response);
                                  BerCount c;
                                  count_errors(c, x, slice(eq.symbols, o.modulation), o.modulation);
                                  return c;
                              });
        }

        BerCount ddam_ofdm_link(const MultipathChannel &channel, double snr_db, std::uint64_t num_symbols,
                                std::uint64_t seed, const LinkOptions &o)
        {
            OfdmConfig cfg = o.ofdm;
            cfg.sample_rate = channel.sample_rate();
            cfg.validate();
            const auto psi = psi_from_channel(channel, o.psi_error, seed);
            const auto beams = path_beamformers(psi, o.criterion, 0.0, o.allocation);
            const int per_frame = std::max(1, o.ofdm_symbols_per_frame);
            ApplyOptions apply;
            apply.half_length = o.half_length;

            return accumulate(
                blocks_for(num_symbols, std::uint64_t(per_frame) * std::uint64_t(cfg.num_subcarriers)), seed,
                [&](std::mt19937_64 &rng) {
                    std::vector<CVector> x;
                    for (int s = 0; s < per_frame; ++s)
                        x.push_back(random_symbols(std::size_t(cfg.num_subcarriers), o.modulation, rng));
                    const auto tx = ddam_ofdm_transmit(x, psi, beams, cfg, o.window, o.mode, o.half_length,
                                                       channel.sample_rate() / double(o.block_len));
                    Frame rx = apply_channel(channel, tx.frame, apply);
                    const double signal = tx.channel_response.squaredNorm() / double(cfg.num_subcarriers) *
                                          tx.power_scale * tx.power_scale;
                    rx = add_noise(rx, noise_variance(signal, snr_db), rng());
                    const auto y = ddam_ofdm_receive(rx, tx, cfg, per_frame);
                    BerCount c;
                    for (int s = 0; s < per_frame; ++s)
                        count_errors(c, x[std::size_t(s)], slice(y[std::size_t(s)], o.modulation), o.modulation);
                    return c;
                });
        }

        BerCount otfs_link(Waveform w, const MultipathChannel &channel, double snr_db, std::uint64_t num_symbols,
                           std::uint64_t seed, const LinkOptions &o)
        {
            OtfsConfig cfg = o.otfs;
            cfg.sample_rate = channel.sample_rate();
            cfg.validate();
            const auto psi = psi_from_channel(channel, o.psi_error, seed);
            const bool with_ddam = w == Waveform::DdamOtfs;
            ApplyOptions apply;
            apply.half_length = o.half_length;

            CVector beam;
            BeamformerSet beams;
            CMatrix unit_map;
            DdamOtfsTransmission reference;
            if (with_ddam)
            {
                beams = path_beamformers(psi, o.criterion, 0.0, o.allocation);
                reference = ddam_otfs_transmit(DdGrid::Ones(cfg.delay_bins, cfg.doppler_bins), psi, beams, cfg,
                                               o.otfs_variant, o.window, o.mode, o.half_length);
                reference.power_scale = 1.0;
                unit_map = ddam_otfs_effective_matrix(channel, reference, cfg, o.otfs_variant, apply);
            }
            else
            {
                beam = composite_mrt_beam(psi);
                unit_map = otfs_miso_effective_matrix(channel, beam, cfg, o.otfs_variant, apply);
            }
            const double unit_signal = unit_map.squaredNorm() / double(unit_map.cols());
            // noise scales with the per-frame power, so one filter serves every frame
            const CMatrix filter = mmse_dd_filter(unit_map, noise_variance(unit_signal, snr_db));

            return accumulate(blocks_for(num_symbols, std::uint64_t(cfg.frame_length())), seed,
                              [&](std::mt19937_64 &rng) {
                                  const DdGrid grid = vector_to_grid(
                                      random_symbols(std::size_t(cfg.frame_length()), o.modulation, rng), cfg);
                                  double scale = 1.0;
                                  Frame tx;
                                  long offset = 0;
                                  if (with_ddam)
                                  {
                                      auto t = ddam_otfs_transmit(grid, psi, beams, cfg, o.otfs_variant, o.window,
                                                                  o.mode, o.half_length);
                                      scale = t.power_scale;
                                      offset = t.sync_offset;
                                      tx = std::move(t.frame);
                                  }
                                  else
                                      tx = otfs_miso_modulate(grid, beam, cfg, o.otfs_variant);
                                  Frame rx = apply_channel(channel, tx, apply);
                                  const double nv = noise_variance(unit_signal * scale * scale, snr_db);
                                  rx = add_noise(rx, nv, rng());
                                  const DdGrid y = otfs_demodulate(rx, cfg, o.otfs_variant, offset);
                                  const CVector x = filter * grid_to_vector(y) / scale;
                                  BerCount c;
                                  count_errors(c, grid_to_vector(grid), slice(x, o.modulation), o.modulation);
                                  return c;
                              });
        }
    }

    BerCount simulate_ber(Waveform waveform, const MultipathChannel &channel, double snr_db,
                          std::uint64_t num_symbols, std::uint64_t seed, const LinkOptions &opts)
    {
        if (num_symbols < 1)
            throw std::invalid_argument("simulate_ber: num_symbols must be >= 1");
        switch (waveform)
        {
        case Waveform::Ddam: return ddam_link(channel, snr_db, num_symbols, seed, opts);
        case Waveform::Ofdm: return ofdm_link(channel, snr_db, num_symbols, seed, opts);
        case Waveform::DdamOfdm: return ddam_ofdm_link(channel, snr_db, num_symbols, seed, opts);
        case Waveform::OtfsIsfft:
        case Waveform::OtfsZak:
        case Waveform::DdamOtfs:
        {
            LinkOptions o = opts;
            if (waveform != Waveform::DdamOtfs)
                o.otfs_variant = waveform == Waveform::OtfsZak ? OtfsVariant::Zak : OtfsVariant::Isfft;
            return otfs_link(waveform, channel, snr_db, num_symbols, seed, o);
        }
        }
        throw std::invalid_argument("simulate_ber: unsupported waveform");
    }

} // namespace wavelab
