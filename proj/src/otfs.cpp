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

#include "wavelab/otfs.hpp"
#include "wavelab/fft.hpp"
#include "wavelab/opcount.hpp"

#include <cmath>
#include <span>
#include <string>

namespace wavelab
{
    void OtfsConfig::validate() const
    {
        if (!is_power_of_two(doppler_bins))
            throw std::invalid_argument("OtfsConfig: doppler_bins must be a positive power of two");
        if (!is_power_of_two(delay_bins))
            throw std::invalid_argument("OtfsConfig: delay_bins must be a positive power of two");
        if (cp_len < 0)
            throw std::invalid_argument("OtfsConfig: cp_len must be non-negative");
        if (!(sample_rate > 0.0))
            throw std::invalid_argument("OtfsConfig: sample_rate must be positive");
    }

    namespace
    {
        void check_grid(const DdGrid &grid, const OtfsConfig &cfg, const char *who)
        {
            cfg.validate();
            if (grid.rows() != cfg.delay_bins || grid.cols() != cfg.doppler_bins)
                throw std::invalid_argument(std::string(who) + ": grid is " + std::to_string(grid.rows()) + "x" +
                                            std::to_string(grid.cols()) + ", config expects " +
                                            std::to_string(cfg.delay_bins) + "x" +
                                            std::to_string(cfg.doppler_bins));
        }

        CVector body_of(const Frame &rx, const OtfsConfig &cfg, Eigen::Index offset, const char *who)
        {
            cfg.validate();
            rx.validate();
            const Eigen::Index need = offset + cfg.cp_len + cfg.frame_length();
            if (offset < 0 || rx.num_samples() < need)
                throw std::invalid_argument(std::string(who) + ": frame holds " + std::to_string(rx.num_samples()) +
                                            " samples, need " + std::to_string(need));
            return rx.samples.row(0).segment(offset + cfg.cp_len, cfg.frame_length()).transpose();
        }

        Frame with_cp(const CVector &body, const OtfsConfig &cfg)
        {
            Frame f(1, body.size() + cfg.cp_len, cfg.sample_rate);
            f.samples.row(0).head(cfg.cp_len) = body.tail(cfg.cp_len).transpose();
            f.samples.row(0).tail(body.size()) = body.transpose();
            return f;
        }

        template <typename Fn>
        void each_column(CMatrix &m, Fn fn)
        {
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                fn(std::span<Complex>(m.col(c).data(), std::size_t(m.rows())));
        }

        // Row-wise transforms go through a contiguous copy (storage is column-major).
        template <typename Fn>
        void each_row(CMatrix &m, Fn fn)
        {
            CVector row(m.cols());
            for (Eigen::Index r = 0; r < m.rows(); ++r)
            {
                row = m.row(r).transpose();
                fn(std::span<Complex>(row.data(), std::size_t(row.size())));
                m.row(r) = row.transpose();
            }
        }

        // DD (K x M) -> TF (K subcarriers x M symbols)
        CMatrix isfft(const DdGrid &grid)
        {
            CMatrix tf = grid;
            each_column(tf, [](std::span<Complex> s) { fft::dft_unitary(s); });
            each_row(tf, [](std::span<Complex> s) { fft::idft_unitary(s); });
            return tf;
        }

        DdGrid sfft(const CMatrix &tf)
        {
            CMatrix dd = tf;
            each_column(dd, [](std::span<Complex> s) { fft::idft_unitary(s); });
            each_row(dd, [](std::span<Complex> s) { fft::dft_unitary(s); });
            return dd;
        }

        CVector isfft_time_body(const DdGrid &grid, const OtfsConfig &cfg)
        {
            CMatrix tf = isfft(grid);
            each_column(tf, [](std::span<Complex> s) { fft::idft_unitary(s); });
            return Eigen::Map<const CVector>(tf.data(), cfg.frame_length());
        }

        CVector zak_time_body(const DdGrid &grid, const OtfsConfig &cfg)
        {
            CMatrix rows = grid;
            each_row(rows, [](std::span<Complex> s) { fft::idft_unitary(s); });
            // rows(k, m) is now the sample at time k + K*m, i.e. column-major order
            return Eigen::Map<const CVector>(rows.data(), cfg.frame_length());
        }
    }

    Frame otfs_modulate_isfft(const DdGrid &grid, const OtfsConfig &cfg)
    {
        check_grid(grid, cfg, "otfs_modulate_isfft");
        return with_cp(isfft_time_body(grid, cfg), cfg);
    }

    DdGrid otfs_demodulate_isfft(const Frame &rx, const OtfsConfig &cfg, Eigen::Index offset)
    {
        const CVector body = body_of(rx, cfg, offset, "otfs_demodulate_isfft");
        CMatrix tf = Eigen::Map<const CMatrix>(body.data(), cfg.delay_bins, cfg.doppler_bins);
        each_column(tf, [](std::span<Complex> s) { fft::dft_unitary(s); });
        return sfft(tf);
    }

    Frame otfs_modulate_zak(const DdGrid &grid, const OtfsConfig &cfg)
    {
        check_grid(grid, cfg, "otfs_modulate_zak");
        return with_cp(zak_time_body(grid, cfg), cfg);
    }

    DdGrid otfs_demodulate_zak(const Frame &rx, const OtfsConfig &cfg, Eigen::Index offset)
    {
        const CVector body = body_of(rx, cfg, offset, "otfs_demodulate_zak");
        CMatrix dd = Eigen::Map<const CMatrix>(body.data(), cfg.delay_bins, cfg.doppler_bins);
        each_row(dd, [](std::span<Complex> s) { fft::dft_unitary(s); });
        return dd;
    }

    Frame otfs_modulate(const DdGrid &grid, const OtfsConfig &cfg, OtfsVariant variant)
    {
        return variant == OtfsVariant::Isfft ? otfs_modulate_isfft(grid, cfg) : otfs_modulate_zak(grid, cfg);
    }

    DdGrid otfs_demodulate(const Frame &rx, const OtfsConfig &cfg, OtfsVariant variant, Eigen::Index offset)
    {
        return variant == OtfsVariant::Isfft ? otfs_demodulate_isfft(rx, cfg, offset)
                                             : otfs_demodulate_zak(rx, cfg, offset);
    }

    Frame otfs_modulate_isfft_oversampled(const DdGrid &grid, const OtfsConfig &cfg, int factor)
    {
        check_grid(grid, cfg, "otfs_modulate_isfft_oversampled");
        const CMatrix tf = isfft(grid);
        const Eigen::Index len = Eigen::Index(cfg.delay_bins) * factor;
        Frame out(1, len * cfg.doppler_bins, cfg.sample_rate * factor);
        for (int m = 0; m < cfg.doppler_bins; ++m)
            out.samples.row(0).segment(m * len, len) = fft::idft_oversampled(tf.col(m), factor).transpose();
        return out;
    }

    Frame otfs_miso_modulate(const DdGrid &grid, const CVector &beam, const OtfsConfig &cfg, OtfsVariant variant)
    {
        check_grid(grid, cfg, "otfs_miso_modulate");
        Frame out(beam.size(), cfg.frame_length() + cfg.cp_len, cfg.sample_rate);
        for (Eigen::Index a = 0; a < beam.size(); ++a)
        {
            const DdGrid weighted = grid * beam[a];
            opcount::add(std::uint64_t(grid.size()));
            out.samples.row(a) = otfs_modulate(weighted, cfg, variant).samples.row(0);
        }
        return out;
    }

    CVector grid_to_vector(const DdGrid &grid) { return Eigen::Map<const CVector>(grid.data(), grid.size()); }

    DdGrid vector_to_grid(const CVector &v, const OtfsConfig &cfg)
    {
        if (v.size() != cfg.frame_length())
            throw std::invalid_argument("vector_to_grid: length does not match M*K");
        return Eigen::Map<const CMatrix>(v.data(), cfg.delay_bins, cfg.doppler_bins);
    }

    CMatrix dd_effective_matrix(const ScalarChannelOp &channel, const OtfsConfig &cfg, OtfsVariant variant,
                                Eigen::Index rx_offset)
    {
        cfg.validate();
        const int n = cfg.frame_length();
        if (n > kMaxDenseDdSize)
            throw std::invalid_argument("dd_effective_matrix: M*K = " + std::to_string(n) +
                                        " exceeds the dense limit of " + std::to_string(kMaxDenseDdSize));
        CMatrix h(n, n);
        for (int j = 0; j < n; ++j)
        {
            CVector e = CVector::Zero(n);
            e[j] = 1.0;
            const Frame tx = otfs_modulate(vector_to_grid(e, cfg), cfg, variant);
            const Frame rx = channel(tx);
            h.col(j) = grid_to_vector(otfs_demodulate(rx, cfg, variant, rx_offset));
        }
        return h;
    }

    CMatrix dd_effective_matrix(const MultipathChannel &scalar_channel, const OtfsConfig &cfg, OtfsVariant variant,
                                const ApplyOptions &opts)
    {
        if (scalar_channel.array().num_tx_antennas != 1)
            throw std::invalid_argument("dd_effective_matrix: channel must have a single transmit antenna");
        return dd_effective_matrix([&](const Frame &tx) { return apply_channel(scalar_channel, tx, opts); }, cfg,
                                   variant);
    }

    DdGrid mmse_equalize_dd(const DdGrid &received, const CMatrix &h, double noise_var, const OtfsConfig &cfg)
    {
        check_grid(received, cfg, "mmse_equalize_dd");
        if (h.rows() != received.size() || h.cols() != received.size())
            throw std::invalid_argument("mmse_equalize_dd: effective matrix size does not match the grid");
        if (!(noise_var >= 0.0))
            throw std::invalid_argument("mmse_equalize_dd: noise variance must be non-negative");
        const CVector y = grid_to_vector(received);
        CVector x;
        if (noise_var == 0.0)
        {
            Eigen::ColPivHouseholderQR<CMatrix> qr(h);
            if (qr.rank() < h.cols())
                throw std::runtime_error("mmse_equalize_dd: effective matrix is singular; "
                                         "use a positive noise variance to regularize");
            x = qr.solve(y);
        }
        else
        {
            CMatrix gram = h.adjoint() * h;
            gram.diagonal().array() += noise_var;
            x = gram.ldlt().solve(h.adjoint() * y);
        }
        return vector_to_grid(x, cfg);
    }

    CMatrix mmse_dd_filter(const CMatrix &h, double noise_var)
    {
        if (h.rows() != h.cols() || h.rows() < 1)
            throw std::invalid_argument("mmse_dd_filter: effective matrix must be square and non-empty");
        if (!(noise_var >= 0.0))
            throw std::invalid_argument("mmse_dd_filter: noise variance must be non-negative");
        const CMatrix identity = CMatrix::Identity(h.rows(), h.cols());
        if (noise_var == 0.0)
        {
            Eigen::ColPivHouseholderQR<CMatrix> qr(h);
            if (qr.rank() < h.cols())
                throw std::runtime_error("mmse_dd_filter: effective matrix is singular; "
                                         "use a positive noise variance to regularize");
            return qr.solve(identity);
        }
        CMatrix gram = h.adjoint() * h;
        gram.diagonal().array() += noise_var;
        return gram.ldlt().solve(h.adjoint());
    }

    namespace
    {
        int dominant_in_column(const CMatrix &h, Eigen::Index c, double threshold_db)
        {
            const double peak = h.col(c).cwiseAbs2().maxCoeff();
            if (peak == 0.0)
                return 0;
            const double floor = peak * std::pow(10.0, threshold_db / 10.0);
            return int((h.col(c).cwiseAbs2().array() >= floor).count());
        }
    }

    int max_dominant_entries_per_column(const CMatrix &h, double threshold_db)
    {
        int worst = 0;
        for (Eigen::Index c = 0; c < h.cols(); ++c)
            worst = std::max(worst, dominant_in_column(h, c, threshold_db));
        return worst;
    }

    double mean_dominant_entries_per_column(const CMatrix &h, double threshold_db)
    {
        if (h.cols() == 0)
            return 0.0;
        double total = 0.0;
        for (Eigen::Index c = 0; c < h.cols(); ++c)
            total += dominant_in_column(h, c, threshold_db);
        return total / double(h.cols());
    }

} // namespace wavelab
