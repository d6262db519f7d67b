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

#include "wavelab/channel.hpp"
#include "wavelab/opcount.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

namespace wavelab
{
    void ArrayConfig::validate() const
    {
        if (num_tx_antennas < 1)
            throw std::invalid_argument("ArrayConfig: num_tx_antennas must be >= 1");
        if (!(element_spacing > 0.0))
            throw std::invalid_argument("ArrayConfig: element_spacing must be positive");
    }

    MultipathChannel::MultipathChannel(ArrayConfig array, std::vector<PathParams> paths, double sample_rate)
        : array_(array), paths_(std::move(paths)), sample_rate_(sample_rate)
    {
        array_.validate();
        if (paths_.empty())
            throw std::invalid_argument("MultipathChannel: path list is empty");
        if (!(sample_rate_ > 0.0))
            throw std::invalid_argument("MultipathChannel: sample_rate must be positive");
        for (std::size_t l = 0; l < paths_.size(); ++l)
        {
            const auto &p = paths_[l];
            if (!(std::abs(p.gain) > 0.0))
                throw std::invalid_argument("MultipathChannel: path " + std::to_string(l) + " has zero gain");
            if (!(p.delay_s >= 0.0))
                throw std::invalid_argument("MultipathChannel: path " + std::to_string(l) + " has negative delay");
            if (!(p.aod >= -1.0 && p.aod < 1.0))
                throw std::domain_error("MultipathChannel: path " + std::to_string(l) + " aod outside [-1, 1)");
        }
    }

    double MultipathChannel::delay_spread() const
    {
        auto [lo, hi] = std::minmax_element(paths_.begin(), paths_.end(),
                                            [](const auto &a, const auto &b) { return a.delay_s < b.delay_s; });
        return hi->delay_s - lo->delay_s;
    }

    double MultipathChannel::doppler_spread() const
    {
        auto [lo, hi] = std::minmax_element(paths_.begin(), paths_.end(),
                                            [](const auto &a, const auto &b) { return a.doppler_hz < b.doppler_hz; });
        return hi->doppler_hz - lo->doppler_hz;
    }

    long MultipathChannel::integer_delay(std::size_t l) const { return std::lround(delay_in_samples(l)); }

    double MultipathChannel::fractional_residue(std::size_t l) const
    {
        return delay_in_samples(l) - double(integer_delay(l));
    }

    long MultipathChannel::max_integer_delay() const
    {
        long m = 0;
        for (std::size_t l = 0; l < paths_.size(); ++l)
            m = std::max(m, integer_delay(l));
        return m;
    }

    CVector steering_vector(double aod, const ArrayConfig &array)
    {
        array.validate();
        if (!(aod >= -1.0 && aod < 1.0))
            throw std::domain_error("steering_vector: aod must lie in [-1, 1)");
        CVector a(array.num_tx_antennas);
        for (int m = 0; m < array.num_tx_antennas; ++m)
            a[m] = cis(kPi * double(m) * 2.0 * array.element_spacing * aod);
        return a;
    }

    CMatrix steering_matrix(const std::vector<double> &aods, const ArrayConfig &array)
    {
        CMatrix a(array.num_tx_antennas, Eigen::Index(aods.size()));
        for (std::size_t l = 0; l < aods.size(); ++l)
            a.col(Eigen::Index(l)) = steering_vector(aods[l], array);
        return a;
    }

    MultipathChannel build_channel(const ArrayConfig &array, std::vector<PathParams> paths, double sample_rate)
    {
        return MultipathChannel(array, std::move(paths), sample_rate);
    }

    namespace
    {
        double circular_distance(double a, double b)
        {
            const double d = std::abs(a - b);
            return std::min(d, 2.0 - d);
        }

        double uniform_in(std::mt19937_64 &rng, std::pair<double, double> range)
        {
            if (range.first == range.second)
                return range.first;
            std::uniform_real_distribution<double> u(range.first, range.second);
            return u(rng);
        }
    }

    MultipathChannel sample_random_channel(const ArrayConfig &array, int num_paths,
                                           std::pair<double, double> delay_range_s,
                                           std::pair<double, double> doppler_range_hz,
                                           double sample_rate, std::uint64_t seed, GridSnap snap)
    {
        array.validate();
        if (num_paths < 1)
            throw std::invalid_argument("sample_random_channel: need at least one path");
        if (delay_range_s.first > delay_range_s.second || delay_range_s.first < 0.0)
            throw std::invalid_argument("sample_random_channel: invalid delay range");
        if (doppler_range_hz.first > doppler_range_hz.second)
            throw std::invalid_argument("sample_random_channel: invalid Doppler range");

        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> aod_dist(-1.0, 1.0);
        const double min_sep = 2.0 / double(array.num_tx_antennas);

        constexpr int kMaxRestarts = 100;
        constexpr int kMaxDrawsPerPath = 1000;
        std::vector<double> aods;
        bool placed = false;
        for (int restart = 0; restart < kMaxRestarts && !placed; ++restart)
        {
            aods.clear();
            placed = true;
            for (int l = 0; l < num_paths && placed; ++l)
            {
                bool ok = false;
                for (int draw = 0; draw < kMaxDrawsPerPath && !ok; ++draw)
                {
                    const double cand = aod_dist(rng);
                    ok = std::all_of(aods.begin(), aods.end(),
                                     [&](double o) { return circular_distance(o, cand) >= min_sep; });
                    if (ok)
                        aods.push_back(cand);
                }
                placed = ok;
            }
        }
        if (!placed)
        {
            std::ostringstream msg;
            msg << "sample_random_channel: could not place " << num_paths << " paths with AoD separation "
                << min_sep << "; use fewer paths or more transmit antennas";
            throw std::runtime_error(msg.str());
        }

        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        std::vector<PathParams> paths(static_cast<std::size_t>(num_paths));
        double total = 0.0;
        for (int l = 0; l < num_paths; ++l)
        {
            auto &p = paths[std::size_t(l)];
            p.aod = aods[std::size_t(l)];
            p.delay_s = uniform_in(rng, delay_range_s);
            if (snap.integer_delays)
                p.delay_s = std::round(p.delay_s * sample_rate) / sample_rate;
            p.doppler_hz = uniform_in(rng, doppler_range_hz);
            if (snap.doppler_grid_hz > 0.0)
                p.doppler_hz = std::round(p.doppler_hz / snap.doppler_grid_hz) * snap.doppler_grid_hz;
            double re = normal(rng);
            double im = normal(rng);
            p.gain = Complex(re, im);
            total += std::norm(p.gain);
        }
        const double scale = 1.0 / std::sqrt(total);
        for (auto &p : paths)
            p.gain *= scale;
        return MultipathChannel(array, std::move(paths), sample_rate);
    }

    RVector fractional_delay_taps(double d, int half_length)
    {
        if (half_length < 1)
            throw std::invalid_argument("fractional_delay_taps: half_length must be >= 1");
        if (!(d >= 0.0 && d < 1.0))
            throw std::invalid_argument("fractional_delay_taps: fractional delay must lie in [0, 1)");
        const int n = 2 * half_length + 1;
        RVector h(n);
        const double support = double(half_length + 1);
        for (int i = 0; i < n; ++i)
        {
            const double x = double(i - half_length) - d;
            const double sinc = x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
            const double w = 0.5 * (1.0 + std::cos(kPi * x / support));
            h[i] = sinc * w;
        }
        if (d == 0.0)
        {
            // sinc vanishes at the nonzero integers; avoid round-off residue there
            h.setZero();
            h[half_length] = 1.0;
        }
        return h / h.sum();
    }

    namespace
    {
        struct PathShift
        {
            long start = 0;   // output index of input sample 0 through tap 0
            RVector taps;     // empty for pure integer shifts
            int half_length = 0;
        };

        PathShift path_shift(double delay_samples, const ApplyOptions &opts)
        {
            PathShift s;
            const double rounded = std::round(delay_samples);
            if (std::abs(delay_samples - rounded) <= opts.fractional_tolerance)
            {
                s.start = long(rounded);
                return s;
            }
            const double fl = std::floor(delay_samples);
            s.start = long(fl);
            s.half_length = opts.half_length;
            s.taps = fractional_delay_taps(delay_samples - fl, opts.half_length);
            return s;
        }
    }

    Frame apply_channel(const MultipathChannel &channel, const Frame &tx, const ApplyOptions &opts)
    {
        tx.validate();
        if (tx.num_antennas() != channel.array().num_tx_antennas)
            throw std::invalid_argument("apply_channel: frame has " + std::to_string(tx.num_antennas()) +
                                        " rows but the channel has " +
                                        std::to_string(channel.array().num_tx_antennas) + " transmit antennas");
        if (std::abs(tx.sample_rate - channel.sample_rate()) > 1e-9 * channel.sample_rate())
            throw std::invalid_argument("apply_channel: frame and channel sample rates differ");

        const Eigen::Index n_in = tx.num_samples();
        const double rate = channel.sample_rate();
        std::vector<PathShift> shifts;
        long extent = 0;
        for (std::size_t l = 0; l < channel.num_paths(); ++l)
        {
            shifts.push_back(path_shift(channel.delay_in_samples(l), opts));
            extent = std::max(extent, shifts.back().start + shifts.back().half_length);
        }

        const Eigen::Index n_out = n_in + extent;
        CVector y = CVector::Zero(n_out);
        CVector delayed(n_out);
        for (std::size_t l = 0; l < channel.num_paths(); ++l)
        {
            const auto &p = channel.path(l);
            // spatial projection a^H x, one scalar per input sample
            const CVector a = steering_vector(p.aod, channel.array());
            const CVector z = (a.adjoint() * tx.samples).transpose();
            opcount::add(std::uint64_t(a.size() * n_in));

            const PathShift &s = shifts[l];
            delayed.setZero();
            if (s.taps.size() == 0)
            {
                delayed.segment(s.start, n_in) = z;
            }
            else
            {
                for (Eigen::Index k = 0; k < s.taps.size(); ++k)
                {
                    const long off = s.start + long(k) - s.half_length;
                    for (Eigen::Index m = 0; m < n_in; ++m)
                    {
                        const long t = off + long(m);
                        if (t >= 0)
                            delayed[t] += s.taps[k] * z[m];
                    }
                }
            }

            for (Eigen::Index t = 0; t < n_out; ++t)
            {
                if (delayed[t] == Complex{})
                    continue;
                const double cycles = p.doppler_hz * double(t) / rate;
                y[t] += p.gain * cis(kTwoPi * (cycles - std::floor(cycles))) * delayed[t];
            }
        }
        return Frame::scalar(y, rate);
    }

    double mean_power(const Frame &frame)
    {
        if (frame.samples.size() == 0)
            return 0.0;
        return frame.samples.squaredNorm() / double(frame.samples.size());
    }

    Frame add_noise(const Frame &frame, double noise_var, std::uint64_t seed)
    {
        frame.validate();
        if (!(noise_var >= 0.0))
            throw std::invalid_argument("add_noise: noise variance must be non-negative");
        Frame out = frame;
        if (noise_var == 0.0)
            return out;
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, std::sqrt(noise_var / 2.0));
        for (Eigen::Index c = 0; c < out.samples.cols(); ++c)
            for (Eigen::Index r = 0; r < out.samples.rows(); ++r)
            {
                const double re = normal(rng);
                const double im = normal(rng);
                out.samples(r, c) += Complex(re, im);
            }
        return out;
    }

    Frame add_awgn(const Frame &frame, double snr_db, std::uint64_t seed)
    {
        frame.validate();
        if (std::isinf(snr_db) && snr_db > 0.0)
            return frame;
        const double noise_var = mean_power(frame) / std::pow(10.0, snr_db / 10.0);
        return add_noise(frame, noise_var, seed);
    }

} // namespace wavelab
