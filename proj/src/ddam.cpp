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

#include "wavelab/ddam.hpp"
#include "wavelab/opcount.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace wavelab
{
    // ---------------------------------------------------------------------------
    // PSI
    // ---------------------------------------------------------------------------

    long PathStateInfo::max_delay_tap() const
    {
        long m = 0;
        for (const auto &p : paths)
            m = std::max(m, p.dominant_delay_tap());
        return m;
    }

    namespace
    {
        void split_delay(double delay_samples, long &integer, double &fraction)
        {
            const double rounded = std::round(delay_samples);
            if (std::abs(delay_samples - rounded) < 1e-9)
                delay_samples = rounded;
            integer = long(std::floor(delay_samples));
            fraction = delay_samples - double(integer);
        }

        double wrap_aod(double aod)
        {
            double w = std::fmod(aod + 1.0, 2.0);
            if (w < 0.0)
                w += 2.0;
            w -= 1.0;
            return w >= 1.0 ? -1.0 : w;
        }
    }

    PathStateInfo psi_from_channel(const MultipathChannel &channel, const PsiPerturbation &perturbation,
                                   std::uint64_t seed)
    {
        if (perturbation.delay_err_samples < 0.0 || perturbation.doppler_err_hz < 0.0 ||
            perturbation.aod_err < 0.0 || perturbation.gain_err < 0.0)
            throw std::invalid_argument("psi_from_channel: perturbation standard deviations must be non-negative");

        PathStateInfo psi;
        psi.array = channel.array();
        psi.sample_rate = channel.sample_rate();
        psi.genie = perturbation.is_zero();

        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t l = 0; l < channel.num_paths(); ++l)
        {
            const auto &p = channel.path(l);
            // draw every error even when its deviation is zero, so that the
            // sequence for one parameter does not depend on the others
            const double e_delay = normal(rng);
            const double e_doppler = normal(rng);
            const double e_aod = normal(rng);
            const double e_re = normal(rng);
            const double e_im = normal(rng);

            PsiPath q;
            const double delay = std::max(0.0, channel.delay_in_samples(l) + perturbation.delay_err_samples * e_delay);
            split_delay(delay, q.delay_samples, q.fractional_delay);
            q.doppler_hz = p.doppler_hz + perturbation.doppler_err_hz * e_doppler;
            q.aod = perturbation.aod_err > 0.0 ? wrap_aod(p.aod + perturbation.aod_err * e_aod) : p.aod;
            q.gain_estimate = p.gain + perturbation.gain_err * std::sqrt(0.5) * Complex(e_re, e_im);
            if (std::abs(q.gain_estimate) == 0.0)
                q.gain_estimate = p.gain;
            psi.paths.push_back(q);
        }
        return psi;
    }

    MultipathChannel channel_from_psi(const PathStateInfo &psi)
    {
        std::vector<PathParams> paths;
        for (const auto &p : psi.paths)
            paths.push_back({p.gain_estimate, p.total_delay() / psi.sample_rate, p.doppler_hz, p.aod});
        return MultipathChannel(psi.array, std::move(paths), psi.sample_rate);
    }

    // ---------------------------------------------------------------------------
    // Beamforming
    // ---------------------------------------------------------------------------

    std::string to_string(BeamCriterion c)
    {
        switch (c)
        {
        case BeamCriterion::Mrt: return "mrt";
        case BeamCriterion::Zf: return "zf";
        case BeamCriterion::Rzf: return "rzf";
        case BeamCriterion::Mmse: return "mmse";
        }
        return "?";
    }

    BeamCriterion beam_criterion_from_string(const std::string &name)
    {
        if (name == "mrt") return BeamCriterion::Mrt;
        if (name == "zf") return BeamCriterion::Zf;
        if (name == "rzf") return BeamCriterion::Rzf;
        if (name == "mmse") return BeamCriterion::Mmse;
        throw std::invalid_argument("unknown beamforming criterion '" + name + "'");
    }

    namespace
    {
        std::vector<std::size_t> dependent_paths(const CMatrix &a)
        {
            std::vector<std::size_t> bad;
            const Eigen::Index l_count = a.cols();
            for (Eigen::Index l = 0; l < l_count; ++l)
            {
                CMatrix others(a.rows(), l_count - 1);
                for (Eigen::Index j = 0, c = 0; j < l_count; ++j)
                    if (j != l)
                        others.col(c++) = a.col(j);
                if (others.cols() == 0)
                    continue;
                const CVector coef = others.colPivHouseholderQr().solve(a.col(l));
                const double residual = (a.col(l) - others * coef).norm();
                if (residual < 1e-6 * a.col(l).norm())
                    bad.push_back(std::size_t(l));
            }
            return bad;
        }

        // A (D A^H A + lambda I)^-1 for lambda = 0 with full column rank A
        CMatrix zero_forcing_columns(const CMatrix &a)
        {
            const std::uint64_t mt = std::uint64_t(a.rows()), l = std::uint64_t(a.cols());
            const CMatrix gram = a.adjoint() * a;
            opcount::add(2 * mt * l * l + l * l * l);
            return a * gram.inverse();
        }
    }

    BeamformerSet path_beamformers(const PathStateInfo &psi, BeamCriterion criterion, double noise_var,
                                   PowerAllocation allocation)
    {
        if (psi.paths.empty())
            throw std::invalid_argument("path_beamformers: PSI has no paths");
        if (!(noise_var >= 0.0))
            throw std::invalid_argument("path_beamformers: noise variance must be non-negative");

        const Eigen::Index l_count = Eigen::Index(psi.paths.size());
        const int mt = psi.array.num_tx_antennas;

        BeamformerSet set;
        set.criterion = criterion;
        set.power.resize(std::size_t(l_count));
        double total = 0.0;
        for (Eigen::Index l = 0; l < l_count; ++l)
        {
            const double w = allocation == PowerAllocation::Uniform ? 1.0 : std::norm(psi.paths[std::size_t(l)].gain_estimate);
            set.power[std::size_t(l)] = w;
            total += w;
        }
        for (auto &p : set.power)
            p /= total;

        std::vector<double> aods;
        for (const auto &p : psi.paths)
            aods.push_back(p.aod);
        const CMatrix a = steering_matrix(aods, psi.array);

        CMatrix f;
        const double lambda = criterion == BeamCriterion::Rzf ? double(l_count) * noise_var : noise_var;
        switch (criterion)
        {
        case BeamCriterion::Mrt:
            f = a;
            break;
        case BeamCriterion::Zf:
        case BeamCriterion::Rzf:
        case BeamCriterion::Mmse:
            if (criterion == BeamCriterion::Zf || lambda == 0.0)
            {
                if (l_count > mt)
                {
                    std::vector<std::size_t> all(static_cast<std::size_t>(l_count));
                    for (std::size_t i = 0; i < all.size(); ++i)
                        all[i] = i;
                    throw ZfRankError("path_beamformers: ZF needs L <= M_t (L = " + std::to_string(l_count) +
                                          ", M_t = " + std::to_string(mt) + ")",
                                      all);
                }
                Eigen::JacobiSVD<CMatrix> svd(a);
                const auto &sv = svd.singularValues();
                if (sv.minCoeff() < 1e-10 * sv.maxCoeff())
                {
                    auto bad = dependent_paths(a);
                    std::ostringstream msg;
                    msg << "path_beamformers: steering vectors are linearly dependent; offending paths:";
                    for (auto b : bad)
                        msg << ' ' << b;
                    throw ZfRankError(msg.str(), bad);
                }
                f = zero_forcing_columns(a);
            }
            else
            {
                // (A P A^H + lambda I)^-1 A = A (P A^H A + lambda I)^-1, solved in the L x L domain
                CMatrix gram = a.adjoint() * a;
                if (criterion == BeamCriterion::Mmse)
                    for (Eigen::Index l = 0; l < l_count; ++l)
                        gram.row(l) *= set.power[std::size_t(l)];
                gram.diagonal().array() += lambda;
                f = a * gram.partialPivLu().inverse();
                const std::uint64_t m = std::uint64_t(mt), l = std::uint64_t(l_count);
                opcount::add(2 * m * l * l + l * l * l);
            }
            break;
        }
        for (Eigen::Index l = 0; l < l_count; ++l)
            f.col(l).normalize();
        opcount::add(std::uint64_t(mt) * std::uint64_t(l_count));
        set.vectors = std::move(f);
        return set;
    }

    // ---------------------------------------------------------------------------
    // Compensation plans
    // ---------------------------------------------------------------------------

    std::string to_string(CompensationMode m) { return m == CompensationMode::PathBased ? "path_based" : "tap_based"; }

    CompensationMode compensation_mode_from_string(const std::string &name)
    {
        if (name == "path_based") return CompensationMode::PathBased;
        if (name == "tap_based") return CompensationMode::TapBased;
        throw std::invalid_argument("unknown compensation mode '" + name + "'");
    }

    Complex CompensationTerm::coefficient(double sample_rate) const
    {
        // removes the constant phase exp(i 2 pi nu_comp d / B) the aligned path picks up
        return weight * cis(-kTwoPi * doppler_comp_hz * double(tap_delay) / sample_rate);
    }

    long CompensationPlan::max_shift() const
    {
        long m = 0;
        for (const auto &t : terms)
            m = std::max(m, t.shift);
        return m;
    }

    namespace
    {
        struct Leak
        {
            long offset;  // tap index relative to the base
            Complex coeff;
        };

        // Power leakage of a fractional delay onto the integer delay grid.
        std::vector<Leak> delay_leakage(const PsiPath &p, int half_length)
        {
            if (p.fractional_delay < 1e-9)
                return {{0, 1.0}};
            const RVector h = fractional_delay_taps(p.fractional_delay, half_length);
            std::vector<Leak> out;
            for (int i = 0; i < h.size(); ++i)
                out.push_back({long(i - half_length), h[i]});
            return out;
        }

        // DFT coefficients of exp(i 2 pi u n / N) over one block, u in Doppler bins.
        std::vector<Leak> doppler_leakage(double u, double block)
        {
            const double nearest = std::round(u);
            if (std::abs(u - nearest) < 1e-9)
                return {{long(nearest), 1.0}};
            constexpr int kSpan = 16;
            std::vector<Leak> out;
            for (long q = long(nearest) - kSpan; q <= long(nearest) + kSpan; ++q)
            {
                const double x = u - double(q);
                // (1/N) sum_{n<N} exp(i 2 pi x n / N)
                const Complex num = 1.0 - cis(kTwoPi * x);
                const Complex den = 1.0 - cis(kTwoPi * x / block);
                out.push_back({q, num / (den * block)});
            }
            return out;
        }
    }

    CompensationPlan build_compensation_plan(const PathStateInfo &psi, const BeamformerSet &beams,
                                             const DdamFrameConfig &frame, CompensationMode mode)
    {
        if (psi.paths.empty())
            throw std::invalid_argument("build_compensation_plan: PSI has no paths");
        if (beams.vectors.cols() != Eigen::Index(psi.paths.size()) || beams.power.size() != psi.paths.size())
            throw std::invalid_argument("build_compensation_plan: beamformer set does not match the PSI path count");
        if (beams.vectors.rows() != psi.array.num_tx_antennas)
            throw std::invalid_argument("build_compensation_plan: beamformer length does not match M_t");
        if (frame.block_len < 1)
            throw std::invalid_argument("build_compensation_plan: block_len must be >= 1");

        CompensationPlan plan;
        plan.mode = mode;
        plan.sample_rate = psi.sample_rate;
        plan.doppler_resolution_hz =
            frame.doppler_resolution_hz > 0.0 ? frame.doppler_resolution_hz : psi.sample_rate / frame.block_len;
        const double grid_len = psi.sample_rate / plan.doppler_resolution_hz;

        for (std::size_t l = 0; l < psi.paths.size(); ++l)
        {
            const auto &p = psi.paths[l];
            const Complex cophase = std::conj(p.gain_estimate) / std::abs(p.gain_estimate);
            const double amp = std::sqrt(beams.power[l]);
            const double u = p.doppler_hz / plan.doppler_resolution_hz;

            if (mode == CompensationMode::PathBased)
            {
                CompensationTerm t;
                t.path = l;
                t.tap_delay = p.dominant_delay_tap();
                t.tap_doppler_hz = std::round(u) * plan.doppler_resolution_hz;
                if (std::abs(u - std::round(u)) < 1e-9)
                    t.tap_doppler_hz = p.doppler_hz;
                t.weight = amp * cophase;
                plan.terms.push_back(t);
                continue;
            }

            const auto dl = delay_leakage(p, frame.half_length);
            const auto nl = doppler_leakage(u, grid_len);
            std::vector<CompensationTerm> taps;
            double peak = 0.0;
            for (const auto &d : dl)
            {
                const long delay = p.delay_samples + d.offset;
                if (delay < 0)
                    continue;
                for (const auto &n : nl)
                {
                    CompensationTerm t;
                    t.path = l;
                    t.tap_delay = delay;
                    t.tap_doppler_hz = nl.size() == 1 ? p.doppler_hz : double(n.offset) * plan.doppler_resolution_hz;
                    t.weight = d.coeff * n.coeff; // leakage, replaced below
                    peak = std::max(peak, std::norm(t.weight));
                    taps.push_back(t);
                }
            }
            const double floor = peak * std::pow(10.0, kTapThresholdDb / 10.0);
            double kept = 0.0;
            std::vector<CompensationTerm> strong;
            for (const auto &t : taps)
                if (std::norm(t.weight) >= floor)
                {
                    kept += std::norm(t.weight);
                    strong.push_back(t);
                }
            // matched weights across the path's taps, total power p_l
            for (auto &t : strong)
            {
                t.weight = amp * cophase * std::conj(t.weight) / std::sqrt(kept);
                plan.terms.push_back(t);
            }
        }

        for (const auto &t : plan.terms)
            plan.n_max = std::max(plan.n_max, t.tap_delay);
        for (auto &t : plan.terms)
        {
            t.shift = plan.n_max - t.tap_delay;
            t.doppler_comp_hz = t.tap_doppler_hz;
        }
        return plan;
    }

    CompensationPlan delay_doppler_window(const CompensationPlan &plan, const DdWindow &window)
    {
        if (window.delay_samples < 0 || window.doppler_hz < 0.0)
            throw std::invalid_argument("delay_doppler_window: window sizes must be non-negative");
        CompensationPlan out = plan;
        out.window = window;
        const long start = plan.n_max - window.delay_samples;
        const double half = window.doppler_hz / 2.0;
        for (auto &t : out.terms)
        {
            t.shift = std::max(0L, start - t.tap_delay);
            t.doppler_comp_hz = t.tap_doppler_hz - std::clamp(t.tap_doppler_hz, -half, half);
        }
        return out;
    }

    int resolve_guard_len(const DdamFrameConfig &frame, const CompensationPlan &plan)
    {
        const int guard = frame.guard_len >= 0 ? frame.guard_len : int(2 * plan.n_max);
        if (guard < plan.max_shift())
            throw std::invalid_argument("DDAM guard of " + std::to_string(guard) +
                                        " samples is shorter than the largest delay shift " +
                                        std::to_string(plan.max_shift()));
        return guard;
    }

    Frame ddam_precode(const CVector &stream, const CompensationPlan &plan, const BeamformerSet &beams,
                       int guard_len)
    {
        if (stream.size() < 1)
            throw std::invalid_argument("ddam_precode: empty symbol stream");
        if (guard_len < plan.max_shift())
            throw std::invalid_argument("ddam_precode: guard shorter than the largest delay shift");
        const Eigen::Index n = stream.size();
        const Eigen::Index mt = beams.vectors.rows();
        Frame out(mt, n + guard_len, plan.sample_rate);
        CVector v(n);
        for (const auto &t : plan.terms)
        {
            if (t.path >= std::size_t(beams.vectors.cols()))
                throw std::invalid_argument("ddam_precode: plan references a path without a beamformer");
            const Complex c = t.coefficient(plan.sample_rate);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                const Eigen::Index time = i + t.shift;
                const double cycles = t.doppler_comp_hz * double(time) / plan.sample_rate;
                v[i] = c * cis(-kTwoPi * (cycles - std::floor(cycles))) * stream[i];
            }
            out.samples.middleCols(t.shift, n).noalias() += beams.vectors.col(Eigen::Index(t.path)) * v.transpose();
        }
        opcount::add(std::uint64_t(plan.terms.size()) * std::uint64_t(n) * std::uint64_t(mt + 1));
        return out;
    }

    DdamTransmission ddam_modulate(const CVector &symbols, const CompensationPlan &plan, const BeamformerSet &beams,
                                   const DdamFrameConfig &frame)
    {
        if (symbols.size() < 1)
            throw std::invalid_argument("ddam_modulate: empty symbol stream");
        if (symbols.size() != frame.block_len)
            throw std::invalid_argument("ddam_modulate: got " + std::to_string(symbols.size()) +
                                        " symbols for a block of " + std::to_string(frame.block_len));
        DdamTransmission tx;
        tx.plan = plan;
        tx.guard_len = resolve_guard_len(frame, plan);
        tx.frame = ddam_precode(symbols, plan, beams, tx.guard_len);
        const double energy = tx.frame.samples.squaredNorm();
        if (!(energy > 0.0))
            throw std::invalid_argument("ddam_modulate: transmit signal has zero energy");
        tx.power_scale = std::sqrt(double(frame.block_len) / energy);
        tx.frame.samples *= tx.power_scale;
        return tx;
    }

    DdamTransmission ddam_modulate(const CVector &symbols, const PathStateInfo &psi, const BeamformerSet &beams,
                                   const DdamFrameConfig &frame, CompensationMode mode)
    {
        return ddam_modulate(symbols, build_compensation_plan(psi, beams, frame, mode), beams, frame);
    }

    // ---------------------------------------------------------------------------
    // Equivalent channel
    // ---------------------------------------------------------------------------

    Complex EquivalentChannel::tap(long lag) const
    {
        const long i = lag - first_lag;
        if (i < 0 || i >= long(taps.size()))
            return {};
        return taps[std::size_t(i)];
    }

    namespace
    {
        CVector impulse_response(const MultipathChannel &channel, const CompensationPlan &plan,
                                 const BeamformerSet &beams, long at, const ApplyOptions &opts)
        {
            CVector s = CVector::Zero(at + 1);
            s[at] = 1.0;
            const Frame tx = ddam_precode(s, plan, beams, int(plan.max_shift()));
            return apply_channel(channel, tx, opts).samples.row(0).transpose();
        }

        // Spread of rounded arrival delays over all (term, physical path)
        // contributions within the tap threshold of the strongest one.
        long contribution_delay_spread(const MultipathChannel &channel, const CompensationPlan &plan,
                                       const BeamformerSet &beams)
        {
            struct Arrival
            {
                double power;
                long lag;
            };
            std::vector<Arrival> arrivals;
            double peak = 0.0;
            for (const auto &t : plan.terms)
            {
                const CVector f = beams.vectors.col(Eigen::Index(t.path));
                for (std::size_t p = 0; p < channel.num_paths(); ++p)
                {
                    const auto &path = channel.path(p);
                    const Complex proj = steering_vector(path.aod, channel.array()).dot(f);
                    const double power = std::norm(t.weight * path.gain * proj);
                    const long lag = std::lround(double(t.shift) + channel.delay_in_samples(p));
                    arrivals.push_back({power, lag});
                    peak = std::max(peak, power);
                }
            }
            const double floor = peak * std::pow(10.0, kTapThresholdDb / 10.0);
            long lo = 0, hi = 0;
            bool any = false;
            for (const auto &a : arrivals)
            {
                if (a.power < floor)
                    continue;
                lo = any ? std::min(lo, a.lag) : a.lag;
                hi = any ? std::max(hi, a.lag) : a.lag;
                any = true;
            }
            return hi - lo;
        }
    }

    EquivalentChannel equivalent_channel(const MultipathChannel &channel, const CompensationPlan &plan,
                                         const BeamformerSet &beams, const DdamFrameConfig &frame,
                                         const ApplyOptions &opts)
    {
        if (plan.terms.empty())
            throw std::invalid_argument("equivalent_channel: empty compensation plan");
        // the impulse sits after a lead-in so filter precursors are observable
        const long lead = opts.half_length;
        const long span = std::max(1, frame.block_len);

        const CVector y1 = impulse_response(channel, plan, beams, lead, opts);
        const CVector y2 = impulse_response(channel, plan, beams, lead + span, opts);

        EquivalentChannel eq;
        long first = -1, last = -1;
        for (Eigen::Index i = 0; i < y1.size(); ++i)
            if (y1[i] != Complex{})
            {
                if (first < 0)
                    first = long(i);
                last = long(i);
            }
        if (first < 0)
            throw std::runtime_error("equivalent_channel: the chain delivers no energy to the receiver");
        first = std::min(first, lead); // index == lag when there are no precursors
        eq.first_lag = first - lead;
        for (long i = first; i <= last; ++i)
            eq.taps.push_back(y1[i]);

        std::size_t best = 0;
        for (std::size_t i = 1; i < eq.taps.size(); ++i)
            if (std::norm(eq.taps[i]) > std::norm(eq.taps[best]))
                best = i;
        eq.dominant_lag = eq.first_lag + long(best);
        eq.dominant_gain = eq.taps[best];
        double rest = 0.0;
        for (std::size_t i = 0; i < eq.taps.size(); ++i)
            if (i != best)
                rest += std::norm(eq.taps[i]);
        eq.residual_isi_power = rest / std::norm(eq.dominant_gain);

        const Eigen::Index second = lead + span + eq.dominant_lag;
        if (second < y2.size() && y2[second] != Complex{})
            eq.residual_doppler_hz =
                std::arg(y2[second] / eq.dominant_gain) * plan.sample_rate / (kTwoPi * double(span));
        eq.delay_spread_samples = contribution_delay_spread(channel, plan, beams);
        return eq;
    }

    EquivalentChannel equivalent_channel(const MultipathChannel &channel, const PathStateInfo &psi,
                                         const BeamformerSet &beams, const DdamFrameConfig &frame,
                                         CompensationMode mode, const ApplyOptions &opts)
    {
        return equivalent_channel(channel, build_compensation_plan(psi, beams, frame, mode), beams, frame, opts);
    }

    // ---------------------------------------------------------------------------
    // Receiver
    // ---------------------------------------------------------------------------

    DdamDetection ddam_demodulate(const Frame &rx, Complex gain, long n_max, int num_symbols, Modulation mod)
    {
        rx.validate();
        if (std::abs(gain) == 0.0)
            throw std::invalid_argument("ddam_demodulate: equivalent gain is zero");
        if (n_max < 0 || num_symbols < 1 || rx.num_samples() < n_max + num_symbols)
            throw std::invalid_argument("ddam_demodulate: frame too short for the requested symbols");
        DdamDetection d;
        const Complex inv = 1.0 / gain;
        d.soft = rx.samples.row(0).segment(n_max, num_symbols).transpose() * inv;
        d.hard = slice(d.soft, mod);
        opcount::add(std::uint64_t(num_symbols));
        return d;
    }

    Complex estimate_gain_from_pilots(const Frame &rx, const CVector &pilots, long n_max)
    {
        rx.validate();
        if (rx.num_samples() < n_max + pilots.size())
            throw std::invalid_argument("estimate_gain_from_pilots: frame too short");
        const CVector y = rx.samples.row(0).segment(n_max, pilots.size()).transpose();
        return pilots.dot(y) / pilots.squaredNorm();
    }

    CVector pilot_sequence(int length)
    {
        // fixed QPSK pattern from a seeded generator
        std::mt19937_64 rng(0x5eed9117ULL);
        const auto bits = random_bits(std::size_t(2 * length), rng);
        return map_bits(bits, Modulation::Qpsk);
    }

} // namespace wavelab
