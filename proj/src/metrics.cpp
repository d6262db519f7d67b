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

#include "wavelab/metrics.hpp"
#include "wavelab/channel.hpp"
#include "wavelab/ddam.hpp"
#include "wavelab/ofdm.hpp"
#include "wavelab/opcount.hpp"
#include "wavelab/otfs.hpp"
#include "wavelab/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace wavelab
{
    std::string to_string(Waveform w)
    {
        switch (w)
        {
        case Waveform::Ofdm: return "ofdm";
        case Waveform::OtfsIsfft: return "otfs_isfft";
        case Waveform::OtfsZak: return "otfs_zak";
        case Waveform::Ddam: return "ddam";
        case Waveform::DdamOfdm: return "ddam_ofdm";
        case Waveform::DdamOtfs: return "ddam_otfs";
        }
        return "?";
    }

    Waveform waveform_from_string(const std::string &name)
    {
        for (auto w : {Waveform::Ofdm, Waveform::OtfsIsfft, Waveform::OtfsZak, Waveform::Ddam, Waveform::DdamOfdm,
                       Waveform::DdamOtfs})
            if (to_string(w) == name)
                return w;
        throw std::invalid_argument("unknown waveform '" + name + "'");
    }

    // ---------------------------------------------------------------------------
    // PAPR
    // ---------------------------------------------------------------------------

    double papr_db(const CVector &row)
    {
        if (row.size() == 0)
            throw std::invalid_argument("papr_db: empty signal");
        const double mean = row.squaredNorm() / double(row.size());
        if (!(mean > 0.0))
            throw std::invalid_argument("papr_db: signal has zero power");
        return 10.0 * std::log10(row.cwiseAbs2().maxCoeff() / mean);
    }

    double papr_db(const Frame &frame, Eigen::Index begin, Eigen::Index count)
    {
        frame.validate();
        if (count < 0)
            count = frame.num_samples() - begin;
        if (begin < 0 || count < 1 || begin + count > frame.num_samples())
            throw std::invalid_argument("papr_db: sample span outside the frame");
        double worst = -std::numeric_limits<double>::infinity();
        bool any = false;
        for (Eigen::Index a = 0; a < frame.num_antennas(); ++a)
        {
            const CVector row = frame.samples.row(a).segment(begin, count).transpose();
            if (row.squaredNorm() == 0.0)
                continue; // an idle antenna has no peak to protect
            worst = std::max(worst, papr_db(row));
            any = true;
        }
        if (!any)
            throw std::invalid_argument("papr_db: frame has zero power");
        return worst;
    }

    double PaprCcdf::papr_at(double probability) const
    {
        if (samples_db.empty())
            throw std::logic_error("PaprCcdf: no samples");
        const double n = double(samples_db.size());
        const double idx = std::ceil(n - 1.0 - probability * n - 1e-9);
        const auto i = std::size_t(std::clamp(idx, 0.0, n - 1.0));
        return samples_db[i];
    }

    std::vector<double> default_papr_thresholds()
    {
        std::vector<double> t;
        for (int i = 0; i <= 56; ++i)
            t.push_back(0.25 * i);
        return t;
    }

    PaprCcdf papr_ccdf(const PaprGenerator &generator, int num_trials, std::uint64_t seed,
                       std::vector<double> thresholds_db)
    {
        if (num_trials < 1)
            throw std::invalid_argument("papr_ccdf: num_trials must be >= 1");
        if (!std::is_sorted(thresholds_db.begin(), thresholds_db.end()))
            throw std::invalid_argument("papr_ccdf: thresholds must be ascending");

        PaprCcdf out;
        out.samples_db.resize(std::size_t(num_trials));
        parallel_for(std::size_t(num_trials), [&](std::size_t i) {
            std::mt19937_64 rng(trial_seed(seed, i));
            out.samples_db[i] = generator(rng);
        });
        std::sort(out.samples_db.begin(), out.samples_db.end());
        out.thresholds_db = std::move(thresholds_db);
        for (double t : out.thresholds_db)
        {
            const auto above = out.samples_db.end() - std::upper_bound(out.samples_db.begin(), out.samples_db.end(), t);
            out.exceed_probability.push_back(double(above) / double(num_trials));
        }
        return out;
    }

    PaprGenerator make_papr_generator(const PaprScenario &s)
    {
        if (s.oversampling < 1)
            throw std::invalid_argument("PAPR oversampling factor must be >= 1");
        switch (s.waveform)
        {
        case Waveform::Ofdm:
        {
            OfdmConfig cfg{s.num_subcarriers, 0, s.sample_rate};
            cfg.validate();
            return [cfg, s](std::mt19937_64 &rng) {
                const CVector x = random_symbols(std::size_t(cfg.num_subcarriers), s.modulation, rng);
                return papr_db(ofdm_modulate_oversampled(x, cfg, s.oversampling));
            };
        }
        case Waveform::OtfsIsfft:
        case Waveform::OtfsZak:
        {
            OtfsConfig cfg{s.doppler_bins, s.delay_bins, 0, s.sample_rate};
            cfg.validate();
            const bool zak = s.waveform == Waveform::OtfsZak;
            return [cfg, s, zak](std::mt19937_64 &rng) {
                const DdGrid grid = vector_to_grid(random_symbols(std::size_t(cfg.frame_length()), s.modulation, rng), cfg);
                return papr_db(zak ? otfs_modulate_zak(grid, cfg) : otfs_modulate_isfft_oversampled(grid, cfg, s.oversampling));
            };
        }
        case Waveform::Ddam:
        {
            ArrayConfig array{s.num_tx_antennas};
            array.validate();
            if (s.num_paths < 1 || s.block_len < 1 || s.max_delay_samples < 0)
                throw std::invalid_argument("DDAM PAPR scenario needs paths, a block length and a delay range");
            return [array, s](std::mt19937_64 &rng) {
                const auto channel = sample_random_channel(
                    array, s.num_paths, {0.0, double(s.max_delay_samples) / s.sample_rate},
                    {-s.max_doppler_hz, s.max_doppler_hz}, s.sample_rate, rng(), GridSnap{true, 0.0});
                const auto psi = psi_from_channel(channel);
                const auto criterion = s.num_paths <= s.num_tx_antennas ? BeamCriterion::Zf : BeamCriterion::Mrt;
                const auto beams = path_beamformers(psi, criterion);
                DdamFrameConfig frame;
                frame.block_len = s.block_len;
                const CVector symbols = random_symbols(std::size_t(s.block_len), s.modulation, rng);
                const auto tx = ddam_modulate(symbols, psi, beams, frame, CompensationMode::PathBased);
                return papr_db(tx.frame, 0, s.block_len);
            };
        }
        case Waveform::DdamOfdm:
        case Waveform::DdamOtfs:
            break;
        }
        throw std::invalid_argument("no PAPR generator for waveform '" + to_string(s.waveform) + "'");
    }

    // ---------------------------------------------------------------------------
    // Spectral efficiency
    // ---------------------------------------------------------------------------

    double se_overhead(Waveform w, const OverheadParams &p)
    {
        if (p.num_subcarriers < 1 || p.doppler_bins < 1 || p.block_len < 1 || p.cp_len < 0 || p.max_delay_samples < 0)
            throw std::invalid_argument("se_overhead: lengths must be positive (CP and delay non-negative)");
        const double k = p.num_subcarriers, m = p.doppler_bins, cp = p.cp_len;
        switch (w)
        {
        case Waveform::Ofdm:
        case Waveform::DdamOfdm:
            return k / (k + cp);
        case Waveform::OtfsIsfft:
        case Waveform::OtfsZak:
        case Waveform::DdamOtfs:
            return m * k / (m * k + cp);
        case Waveform::Ddam:
            return double(p.block_len) / double(p.block_len + 2 * p.max_delay_samples);
        }
        return 0.0;
    }

    // ---------------------------------------------------------------------------
    // Error rates
    // ---------------------------------------------------------------------------

    double ber(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits)
    {
        if (tx_bits.size() != rx_bits.size())
            throw std::invalid_argument("ber: bit streams differ in length (" + std::to_string(tx_bits.size()) +
                                        " vs " + std::to_string(rx_bits.size()) + ")");
        if (tx_bits.empty())
            throw std::invalid_argument("ber: empty bit streams");
        std::size_t errors = 0;
        for (std::size_t i = 0; i < tx_bits.size(); ++i)
            errors += (tx_bits[i] != 0) != (rx_bits[i] != 0);
        return double(errors) / double(tx_bits.size());
    }

    // ---------------------------------------------------------------------------
    // Complexity
    // ---------------------------------------------------------------------------

    std::string to_string(ComplexityVariant v)
    {
        switch (v)
        {
        case ComplexityVariant::Ofdm: return "ofdm";
        case ComplexityVariant::OtfsIsfft: return "otfs_isfft";
        case ComplexityVariant::OtfsZak: return "otfs_zak";
        case ComplexityVariant::DdamMrt: return "ddam_mrt";
        case ComplexityVariant::DdamZf: return "ddam_zf";
        case ComplexityVariant::DdamMmse: return "ddam_mmse";
        }
        return "?";
    }

    const std::vector<ComplexityVariant> &all_complexity_variants()
    {
        static const std::vector<ComplexityVariant> all{ComplexityVariant::Ofdm,    ComplexityVariant::OtfsIsfft,
                                                        ComplexityVariant::OtfsZak, ComplexityVariant::DdamMrt,
                                                        ComplexityVariant::DdamZf,  ComplexityVariant::DdamMmse};
        return all;
    }

    void ComplexityParams::validate() const
    {
        if (num_tx_antennas < 1 || num_subcarriers < 1 || doppler_bins < 1 || num_paths < 1 || !(symbols_per_block >= 1.0))
            throw std::invalid_argument("ComplexityParams: M_t, K, M, L and N_s must all be >= 1");
    }

    ComplexityCost complexity_model(ComplexityVariant v, const ComplexityParams &p)
    {
        p.validate();
        const double mt = p.num_tx_antennas, l = p.num_paths, ns = p.symbols_per_block;
        const double log_k = std::log2(double(p.num_subcarriers));
        const double log_m = std::log2(double(p.doppler_bins));
        const double log_km = log_k + log_m;
        switch (v)
        {
        case ComplexityVariant::Ofdm: return {mt * log_k + mt, log_k + 1.0};
        case ComplexityVariant::OtfsIsfft: return {mt * log_km + log_k + mt, log_k + log_km + 1.0};
        case ComplexityVariant::OtfsZak: return {mt * log_m + mt, log_m + 1.0};
        case ComplexityVariant::DdamMrt: return {mt * l, 1.0};
        case ComplexityVariant::DdamZf: return {mt * l * l / ns + mt * l, 1.0};
        case ComplexityVariant::DdamMmse: return {mt * mt * mt * l * l * l / ns + mt * l, 1.0};
        }
        return {};
    }

    namespace
    {
        constexpr int kMeasuredDdamBlock = 4096;

        MultipathChannel measurement_channel(const ComplexityParams &p, double rate, std::uint64_t seed)
        {
            return sample_random_channel(ArrayConfig{p.num_tx_antennas}, p.num_paths, {0.0, 16.0 / rate},
                                         {-rate / 1e4, rate / 1e4}, rate, seed, GridSnap{true, 0.0});
        }
    }

    ComplexityCost measured_complexity(ComplexityVariant v, const ComplexityParams &p, std::uint64_t seed)
    {
        p.validate();
        std::mt19937_64 rng(seed);
        constexpr double rate = 1e8;
        const int mt = p.num_tx_antennas;
        ComplexityCost cost;
        switch (v)
        {
        case ComplexityVariant::Ofdm:
        {
            const OfdmConfig cfg{p.num_subcarriers, 0, rate};
            const CVector x = random_symbols(std::size_t(cfg.num_subcarriers), Modulation::Qpsk, rng);
            CMatrix precoders = CMatrix::Ones(mt, cfg.num_subcarriers) / std::sqrt(double(mt));
            Frame tx;
            {
                opcount::Scope scope;
                tx = ofdm_miso_modulate(x, precoders, cfg);
                cost.tx = double(scope.count()) / cfg.num_subcarriers;
            }
            const Frame rx = Frame::scalar(tx.samples.row(0).transpose(), rate);
            const CVector response = CVector::Ones(cfg.num_subcarriers);
            opcount::Scope scope;
            ofdm_equalize_one_tap(ofdm_demodulate(rx, cfg), response);
            cost.rx = double(scope.count()) / cfg.num_subcarriers;
            return cost;
        }
        case ComplexityVariant::OtfsIsfft:
        case ComplexityVariant::OtfsZak:
        {
            const OtfsConfig cfg{p.doppler_bins, p.num_subcarriers, 0, rate};
            const auto variant = v == ComplexityVariant::OtfsZak ? OtfsVariant::Zak : OtfsVariant::Isfft;
            const DdGrid grid =
                vector_to_grid(random_symbols(std::size_t(cfg.frame_length()), Modulation::Qpsk, rng), cfg);
            const CVector beam = CVector::Ones(mt) / std::sqrt(double(mt));
            Frame tx;
            {
                opcount::Scope scope;
                tx = otfs_miso_modulate(grid, beam, cfg, variant);
                cost.tx = double(scope.count()) / cfg.frame_length();
            }
            const Frame rx = Frame::scalar(tx.samples.row(0).transpose(), rate);
            opcount::Scope scope;
            otfs_demodulate(rx, cfg, variant);
            cost.rx = double(scope.count()) / cfg.frame_length();
            return cost;
        }
        case ComplexityVariant::DdamMrt:
        case ComplexityVariant::DdamZf:
        case ComplexityVariant::DdamMmse:
        {
            const auto channel = measurement_channel(p, rate, seed);
            const auto psi = psi_from_channel(channel);
            const auto criterion = v == ComplexityVariant::DdamMrt  ? BeamCriterion::Mrt
                                   : v == ComplexityVariant::DdamZf ? BeamCriterion::Zf
                                                                    : BeamCriterion::Mmse;
            BeamformerSet beams;
            double design = 0.0;
            {
                opcount::Scope scope;
                beams = path_beamformers(psi, criterion, criterion == BeamCriterion::Mmse ? 0.1 : 0.0);
                design = double(scope.count());
            }
            DdamFrameConfig frame;
            frame.block_len = kMeasuredDdamBlock;
            const auto plan = build_compensation_plan(psi, beams, frame, CompensationMode::PathBased);
            const CVector s = random_symbols(std::size_t(frame.block_len), Modulation::Qpsk, rng);
            DdamTransmission tx;
            {
                opcount::Scope scope;
                tx = ddam_modulate(s, plan, beams, frame);
                cost.tx = design / p.symbols_per_block + double(scope.count()) / frame.block_len;
            }
            const Frame rx = Frame::scalar(tx.frame.samples.row(0).transpose(), rate);
            opcount::Scope scope;
            ddam_demodulate(rx, Complex(1.0, 0.0), plan.n_max, frame.block_len);
            cost.rx = double(scope.count()) / frame.block_len;
            return cost;
        }
        }
        return cost;
    }

} // namespace wavelab
