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

#include "wavelab/ofdm.hpp"
#include "wavelab/fft.hpp"
#include "wavelab/opcount.hpp"

#include <cmath>
#include <sstream>

namespace wavelab
{
    void OfdmConfig::validate() const
    {
        if (!is_power_of_two(num_subcarriers))
            throw std::invalid_argument("OfdmConfig: num_subcarriers must be a positive power of two");
        if (cp_len < 0)
            throw std::invalid_argument("OfdmConfig: cp_len must be non-negative");
        if (!(sample_rate > 0.0))
            throw std::invalid_argument("OfdmConfig: sample_rate must be positive");
    }

    void FeasibilityThresholds::validate() const
    {
        if (!(rho_th > 0.0 && rho_th < 1.0))
            throw std::invalid_argument("FeasibilityThresholds: rho_th must lie in (0, 1)");
        if (k_th < 1)
            throw std::invalid_argument("FeasibilityThresholds: k_th must be a positive integer");
        if (!(bandwidth_hz > 0.0))
            throw std::invalid_argument("FeasibilityThresholds: bandwidth must be positive");
        if (!(xi > 0.0))
            throw std::invalid_argument("FeasibilityThresholds: xi must be positive");
    }

    FeasibleRegion feasible_region(const FeasibilityThresholds &th)
    {
        th.validate();
        FeasibleRegion r;
        r.tau_max_s = ((1.0 - th.rho_th) / th.rho_th) * (double(th.k_th) / th.bandwidth_hz);
        r.nu_max_hz = th.bandwidth_hz / (th.xi * double(th.k_th));
        return r;
    }

    bool ParameterVerdict::violates(OfdmConstraint c) const
    {
        for (const auto &v : violations)
            if (v.constraint == c)
                return true;
        return false;
    }

    ParameterVerdict check_parameters(const OfdmConfig &cfg, double tau_d, double nu_d, double xi)
    {
        cfg.validate();
        if (tau_d < 0.0 || nu_d < 0.0)
            throw std::invalid_argument("check_parameters: spreads must be non-negative");
        ParameterVerdict v;
        const double df = cfg.subcarrier_spacing();
        if (cfg.cp_duration() < tau_d)
        {
            std::ostringstream s;
            s << "T_cp >= tau_d violated: T_cp = " << cfg.cp_duration() << " s < " << tau_d << " s";
            v.violations.push_back({OfdmConstraint::CpCoversDelaySpread, s.str()});
        }
        if (df < xi * nu_d)
        {
            std::ostringstream s;
            s << "delta_f >= xi*nu_d violated: " << df << " Hz < " << xi * nu_d << " Hz";
            v.violations.push_back({OfdmConstraint::SpacingAboveDoppler, s.str()});
        }
        if (tau_d > 0.0 && df > 1.0 / tau_d)
        {
            std::ostringstream s;
            s << "delta_f <= 1/tau_d violated: " << df << " Hz > " << 1.0 / tau_d << " Hz";
            v.violations.push_back({OfdmConstraint::SpacingBelowCoherenceBw, s.str()});
        }
        return v;
    }

    namespace
    {
        void check_symbol_length(const CVector &x, const OfdmConfig &cfg, const char *who)
        {
            cfg.validate();
            if (x.size() != cfg.num_subcarriers)
                throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(cfg.num_subcarriers) +
                                            " symbols, got " + std::to_string(x.size()));
        }

        CVector add_cp(const CVector &body, int cp)
        {
            CVector out(body.size() + cp);
            out.head(cp) = body.tail(cp);
            out.tail(body.size()) = body;
            return out;
        }
    }

    Frame ofdm_modulate(const CVector &freq_symbols, const OfdmConfig &cfg)
    {
        check_symbol_length(freq_symbols, cfg, "ofdm_modulate");
        return Frame::scalar(add_cp(fft::idft_unitary(freq_symbols), cfg.cp_len), cfg.sample_rate);
    }

    Frame ofdm_modulate_oversampled(const CVector &freq_symbols, const OfdmConfig &cfg, int factor)
    {
        check_symbol_length(freq_symbols, cfg, "ofdm_modulate_oversampled");
        return Frame::scalar(fft::idft_oversampled(freq_symbols, factor), cfg.sample_rate * factor);
    }

    CVector ofdm_demodulate(const Frame &rx, const OfdmConfig &cfg, Eigen::Index offset)
    {
        cfg.validate();
        rx.validate();
        const Eigen::Index need = offset + cfg.num_subcarriers + cfg.cp_len;
        if (offset < 0 || rx.num_samples() < need)
            throw std::invalid_argument("ofdm_demodulate: frame holds " + std::to_string(rx.num_samples()) +
                                        " samples, need " + std::to_string(need));
        CVector body = rx.samples.row(0).segment(offset + cfg.cp_len, cfg.num_subcarriers).transpose();
        return fft::dft_unitary(body);
    }

    OneTapResult ofdm_equalize_one_tap(const CVector &freq_symbols, const CVector &response)
    {
        if (freq_symbols.size() != response.size())
            throw std::invalid_argument("ofdm_equalize_one_tap: symbol and response lengths differ");
        OneTapResult r;
        r.symbols = CVector::Zero(freq_symbols.size());
        r.erased.assign(std::size_t(freq_symbols.size()), false);
        for (Eigen::Index k = 0; k < freq_symbols.size(); ++k)
        {
            if (std::abs(response[k]) < 1e-15)
            {
                r.erased[std::size_t(k)] = true;
                continue;
            }
            r.symbols[k] = freq_symbols[k] / response[k];
        }
        opcount::add(std::uint64_t(freq_symbols.size()));
        return r;
    }

    CMatrix ofdm_mrt_precoders(const MultipathChannel &channel, const OfdmConfig &cfg, double reference_time)
    {
        cfg.validate();
        const int k_count = cfg.num_subcarriers;
        const int mt = channel.array().num_tx_antennas;
        CMatrix f = CMatrix::Zero(mt, k_count);
        for (std::size_t l = 0; l < channel.num_paths(); ++l)
        {
            const auto &p = channel.path(l);
            const CVector a = steering_vector(p.aod, channel.array());
            const double delay = channel.delay_in_samples(l);
            const Complex doppler = cis(kTwoPi * p.doppler_hz * reference_time / channel.sample_rate());
            for (int k = 0; k < k_count; ++k)
            {
                const Complex coeff = p.gain * doppler * cis(-kTwoPi * double(k) * delay / k_count);
                f.col(k) += std::conj(coeff) * a;
            }
        }
        for (int k = 0; k < k_count; ++k)
        {
            const double n = f.col(k).norm();
            if (n > 0.0)
                f.col(k) /= n;
        }
        return f;
    }

    Frame ofdm_miso_modulate(const CVector &freq_symbols, const CMatrix &precoders, const OfdmConfig &cfg)
    {
        check_symbol_length(freq_symbols, cfg, "ofdm_miso_modulate");
        if (precoders.cols() != cfg.num_subcarriers)
            throw std::invalid_argument("ofdm_miso_modulate: precoder matrix needs one column per subcarrier");
        const Eigen::Index mt = precoders.rows();
        Frame out(mt, cfg.symbol_length(), cfg.sample_rate);
        for (Eigen::Index m = 0; m < mt; ++m)
        {
            CVector x = precoders.row(m).transpose().cwiseProduct(freq_symbols);
            out.samples.row(m) = add_cp(fft::idft_unitary(x), cfg.cp_len).transpose();
        }
        opcount::add(std::uint64_t(mt * cfg.num_subcarriers));
        return out;
    }

    CVector ofdm_diagonal_response(const MultipathChannel &channel, const CMatrix &precoders,
                                   const OfdmConfig &cfg, Eigen::Index symbol_start)
    {
        cfg.validate();
        const int k_count = cfg.num_subcarriers;
        CVector h = CVector::Zero(k_count);
        const double rate = channel.sample_rate();
        const Eigen::Index t0 = symbol_start + cfg.cp_len;
        for (std::size_t l = 0; l < channel.num_paths(); ++l)
        {
            const auto &p = channel.path(l);
            const long d = channel.integer_delay(l);
            if (std::abs(channel.fractional_residue(l)) > 1e-9 || d > cfg.cp_len)
                throw std::invalid_argument("ofdm_diagonal_response: path delays must be integers within the CP");
            Complex avg{};
            for (int j = 0; j < k_count; ++j)
                avg += cis(kTwoPi * p.doppler_hz * double(t0 + j) / rate);
            avg /= double(k_count);
            const CVector a = steering_vector(p.aod, channel.array());
            const Eigen::RowVectorXcd proj = a.adjoint() * precoders;
            for (int k = 0; k < k_count; ++k)
                h[k] += p.gain * avg * cis(-kTwoPi * double(k) * double(d) / k_count) * proj[k];
        }
        return h;
    }

} // namespace wavelab
