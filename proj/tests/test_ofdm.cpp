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

#include "doctest.h"

#include "wavelab/constellation.hpp"
#include "wavelab/ofdm.hpp"

#include <random>

using namespace wavelab;

namespace
{
    CVector qpsk(int n, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        return random_symbols(std::size_t(n), Modulation::Qpsk, rng);
    }

    // direct DFT sum, unitary
    Complex dft_bin(const CVector &x, int k)
    {
        Complex acc{};
        const auto n = x.size();
        for (Eigen::Index t = 0; t < n; ++t)
            acc += x[t] * std::polar(1.0, -kTwoPi * double(k * t % n) / double(n));
        return acc / std::sqrt(double(n));
    }

    // linear convolution with real-valued lag taps
    CVector convolve(const CVector &x, const std::vector<Complex> &taps)
    {
        CVector y = CVector::Zero(x.size() + Eigen::Index(taps.size()) - 1);
        for (Eigen::Index n = 0; n < x.size(); ++n)
            for (std::size_t d = 0; d < taps.size(); ++d)
                y[n + Eigen::Index(d)] += taps[d] * x[n];
        return y;
    }

    Complex freq_response(const std::vector<Complex> &taps, int k, int n)
    {
        Complex h{};
        for (std::size_t d = 0; d < taps.size(); ++d)
            h += taps[d] * std::polar(1.0, -kTwoPi * double(k) * double(d) / n);
        return h;
    }
}

TEST_CASE("feasible region spot value and product identity")
{
    const auto r = feasible_region({0.9, 1024, 1e8, 10.0});
    CHECK(r.tau_max_s == doctest::Approx(0.1 / 0.9 * 1024 / 1e8).epsilon(1e-15));
    CHECK(r.tau_max_s * 1e6 == doctest::Approx(1.1378).epsilon(1e-4));
    CHECK(r.nu_max_hz == 9765.625);

    for (double rho : {0.3, 0.5, 0.8, 0.99})
        for (int k : {16, 1000, 4096})
            for (double xi : {1.0, 10.0, 33.0})
            {
                const auto q = feasible_region({rho, k, 3.7e7, xi});
                const double target = (1 - rho) / (xi * rho);
                CHECK(std::abs(q.tau_max_s * q.nu_max_hz - target) <= 1e-14 * target);
            }

    const auto tight = feasible_region({1.0 - 1e-9, 1024, 1e8, 10.0});
    CHECK(tight.tau_max_s == doctest::Approx(1024 * 1e-9 / 1e8).epsilon(1e-6)); // K (1 - rho) / (rho B)
    CHECK_THROWS_AS(feasible_region({1.0, 1024, 1e8, 10.0}), std::invalid_argument);
    CHECK_THROWS_AS(feasible_region({0.5, 0, 1e8, 10.0}), std::invalid_argument);
}

TEST_CASE("feasible region monotonicity")
{
    double prev_tau = 1e300;
    for (double rho = 0.05; rho < 1.0; rho += 0.05)
    {
        const auto r = feasible_region({rho, 512, 1e8, 10});
        CHECK(r.tau_max_s < prev_tau);
        prev_tau = r.tau_max_s;
    }
    double prev_t = 0, prev_nu = 1e300;
    for (int k = 16; k <= 8192; k *= 2)
    {
        const auto r = feasible_region({0.8, k, 1e8, 10});
        CHECK(r.tau_max_s > prev_t);
        CHECK(r.nu_max_hz < prev_nu);
        prev_t = r.tau_max_s;
        prev_nu = r.nu_max_hz;
    }
    const auto r = feasible_region({0.8, 64, 1e8, 10});
    CHECK(r.contains(r.tau_max_s, r.nu_max_hz));
    CHECK_FALSE(r.contains(r.tau_max_s * (1 + 1e-12), 0));
}

TEST_CASE("check_parameters examples")
{
    const OfdmConfig cfg{1024, 200, 1e8};
    CHECK(check_parameters(cfg, 1e-6, 5e3, 10).feasible());
    CHECK(check_parameters(cfg, 0, 0, 10).feasible());
    const auto v = check_parameters(cfg, 1e-6, 20e3, 10);
    CHECK_FALSE(v.feasible());
    CHECK(v.violates(OfdmConstraint::SpacingAboveDoppler));
    CHECK(v.violations.size() == 1);

    const auto cp = check_parameters(cfg, 3e-6, 0, 10);
    CHECK(cp.violates(OfdmConstraint::CpCoversDelaySpread));
    const auto bc = check_parameters(OfdmConfig{64, 2000, 1e8}, 1e-5, 0, 10);
    CHECK(bc.violates(OfdmConstraint::SpacingBelowCoherenceBw));
    // boundary values are feasible
    CHECK(check_parameters(cfg, 2e-6, cfg.subcarrier_spacing() / 10, 10).feasible());
}

TEST_CASE("modulate examples")
{
    const OfdmConfig cfg{64, 16, 1.0};
    CHECK(ofdm_modulate(CVector::Zero(64), cfg).samples.norm() == 0.0);
    CHECK(ofdm_modulate(CVector::Zero(64), cfg).num_samples() == 80);

    CVector impulse = CVector::Zero(64);
    impulse[0] = 1.0;
    const Frame f = ofdm_modulate(impulse, OfdmConfig{64, 0, 1.0});
    for (Eigen::Index n = 0; n < 64; ++n)
        CHECK(std::abs(f.samples(0, n) - 1.0 / 8.0) < 1e-15);

    const CVector x = qpsk(64, 1);
    const Frame g = ofdm_modulate(x, cfg);
    CHECK((g.samples.leftCols(16) - g.samples.rightCols(16)).norm() == 0.0); // cyclic prefix
    for (int t = 0; t < 64; t += 9)
    {
        Complex acc{};
        for (int k = 0; k < 64; ++k)
            acc += x[k] * std::polar(1.0, kTwoPi * k * t / 64.0);
        CHECK(std::abs(g.samples(0, 16 + t) - acc / 8.0) < 1e-12);
    }
    CHECK_THROWS_AS(ofdm_modulate(CVector::Zero(63), cfg), std::invalid_argument);
    CHECK_THROWS_AS(OfdmConfig({48, 0, 1.0}).validate(), std::invalid_argument);
}

TEST_CASE("modulate/demodulate round trip over the configuration grid")
{
    for (int k = 16; k <= 4096; k *= 2)
        for (int cp : {0, 3, k / 4})
        {
            const OfdmConfig cfg{k, cp, 1e6};
            const CVector x = qpsk(k, std::uint64_t(k + cp));
            CHECK((ofdm_demodulate(ofdm_modulate(x, cfg), cfg) - x).cwiseAbs().maxCoeff() < 1e-12);
        }
    CHECK_THROWS_AS(ofdm_demodulate(Frame(1, 70, 1.0), OfdmConfig{64, 16, 1.0}), std::invalid_argument);
}

TEST_CASE("static two-tap channel: diagonal with enough CP, ISI without")
{
    const int k = 64;
    const std::vector<Complex> taps{{0.8, 0.1}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {-0.3, 0.4}};
    const CVector prev = qpsk(k, 10), cur = qpsk(k, 11);
    for (int cp : {8, 2})
    {
        const OfdmConfig cfg{k, cp, 1.0};
        CVector stream(2 * cfg.symbol_length());
        stream << ofdm_modulate(prev, cfg).samples.row(0).transpose(), ofdm_modulate(cur, cfg).samples.row(0).transpose();
        const CVector rx = convolve(stream, taps);
        const CVector y = ofdm_demodulate(Frame::scalar(rx, 1.0), cfg, cfg.symbol_length());
        double worst = 0;
        for (int b = 0; b < k; ++b)
            worst = std::max(worst, std::abs(y[b] - freq_response(taps, b, k) * cur[b]));
        if (cp >= 5)
            CHECK(worst < 1e-12);
        else
            CHECK(worst > 1e-3);
    }
}

TEST_CASE("post-DFT matrix is diagonal when the CP covers the delay spread")
{
    const int k = 32;
    const OfdmConfig cfg{k, 4, 1.0};
    const std::vector<Complex> taps{{1, 0}, {0.2, -0.5}, {0, 0}, {0.1, 0.1}};
    CMatrix h(k, k);
    for (int j = 0; j < k; ++j)
    {
        CVector e = CVector::Zero(k);
        e[j] = 1.0;
        h.col(j) = ofdm_demodulate(Frame::scalar(convolve(ofdm_modulate(e, cfg).samples.row(0).transpose(), taps), 1.0), cfg);
    }
    const double total = h.squaredNorm();
    const double off = total - h.diagonal().squaredNorm();
    CHECK(off / total < 1e-20);
    for (int b = 0; b < k; ++b)
        CHECK(std::abs(h(b, b) - freq_response(taps, b, k)) < 1e-12);
    CHECK(std::abs(dft_bin(CVector::Ones(k), 0) - std::sqrt(double(k))) < 1e-12);
}

TEST_CASE("one-tap equalizer")
{
    const CVector x = qpsk(16, 4);
    const Complex g{0.3, -2.0};
    const auto flat = ofdm_equalize_one_tap(x, CVector::Constant(16, g));
    CHECK((flat.symbols - x / g).norm() < 1e-15);

    const int k = 64;
    const OfdmConfig cfg{k, 8, 1.0};
    const std::vector<Complex> taps{{0.5, 0.5}, {0.0, 0.0}, {0.3, -0.1}};
    const CVector s = qpsk(k, 5);
    const CVector y = ofdm_demodulate(Frame::scalar(convolve(ofdm_modulate(s, cfg).samples.row(0).transpose(), taps), 1.0), cfg);
    CVector resp(k);
    for (int b = 0; b < k; ++b)
        resp[b] = freq_response(taps, b, k);
    CHECK((ofdm_equalize_one_tap(y, resp).symbols - s).cwiseAbs().maxCoeff() < 1e-10);

    CVector hole = CVector::Ones(16);
    hole[3] = 0.0;
    const auto e = ofdm_equalize_one_tap(x, hole);
    CHECK(e.erased[3]);
    CHECK(std::count(e.erased.begin(), e.erased.end(), true) == 1);
    CHECK_THROWS_AS(ofdm_equalize_one_tap(x, CVector::Ones(15)), std::invalid_argument);
}

TEST_CASE("MISO diagonal response matches the brute-force channel in the absence of Doppler")
{
    const int k = 32;
    const OfdmConfig cfg{k, 6, 1e6};
    const auto ch = build_channel(ArrayConfig{4}, {{Complex(0.7, 0.2), 0, 0, 0.1}, {Complex(-0.2, 0.4), 3e-6, 0, -0.5}}, 1e6);
    const CMatrix f = ofdm_mrt_precoders(ch, cfg, 0.0);
    for (int b = 0; b < k; ++b)
        CHECK(f.col(b).norm() == doctest::Approx(1.0));
    const CVector x = qpsk(k, 8);
    const CVector y = ofdm_demodulate(apply_channel(ch, ofdm_miso_modulate(x, f, cfg)), cfg);
    const CVector h = ofdm_diagonal_response(ch, f, cfg, 0);
    CHECK((y - h.cwiseProduct(x)).norm() < 1e-12);
    // MRT co-phases the paths: every bin gain is real and positive
    for (int b = 0; b < k; ++b)
    {
        CHECK(std::abs(h[b].imag()) < 1e-12);
        CHECK(h[b].real() > 0);
    }
}
