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

#include "wavelab/metrics.hpp"
#include "wavelab/ofdm.hpp"

#include <cmath>

using namespace wavelab;

TEST_CASE("PAPR of simple signals")
{
    CHECK(papr_db(CVector::Constant(16, Complex(0.3, -0.4))) == doctest::Approx(0.0));
    CVector qpsk(4);
    qpsk << Complex(1, 1), Complex(-1, 1), Complex(1, -1), Complex(-1, -1);
    CHECK(papr_db(qpsk) == doctest::Approx(0.0));

    const Frame impulse = ofdm_modulate(CVector::Ones(64), OfdmConfig{64, 0, 1.0});
    CHECK(papr_db(impulse) == doctest::Approx(10 * std::log10(64.0)).epsilon(1e-12));
    CHECK(papr_db(impulse) == doctest::Approx(18.06).epsilon(1e-3));

    CVector two(4);
    two << 2.0, 0.0, 0.0, 0.0;
    CHECK(papr_db(two) == doctest::Approx(10 * std::log10(4.0)));
    CHECK_THROWS_AS(papr_db(CVector()), std::invalid_argument);
    CHECK_THROWS_AS(papr_db(CVector::Zero(8)), std::invalid_argument);
}

TEST_CASE("frame PAPR takes the worst antenna over the requested span")
{
    Frame f(2, 6, 1.0);
    f.samples.row(0) << 1, 1, 1, 1, 9, 9;
    f.samples.row(1) << 2, 0, 0, 0, 0, 0;
    CHECK(papr_db(f, 0, 4) == doctest::Approx(10 * std::log10(4.0)));
    CHECK(papr_db(f) > papr_db(f, 0, 4));
    // an idle antenna does not make the frame invalid
    f.samples.row(1).setZero();
    CHECK(papr_db(f, 0, 4) == doctest::Approx(0.0));
    CHECK_THROWS_AS(papr_db(f, 4, 4), std::invalid_argument);
}

TEST_CASE("CCDF is deterministic and monotone")
{
    const auto th = default_papr_thresholds();
    REQUIRE(th.size() == 57);
    CHECK(th.front() == 0.0);
    CHECK(th.back() == 14.0);

    const auto constant = papr_ccdf([](std::mt19937_64 &) { return 0.0; }, 100, 1);
    for (std::size_t i = 1; i < th.size(); ++i)
        CHECK(constant.exceed_probability[i] == 0.0);

    PaprScenario ofdm;
    ofdm.waveform = Waveform::Ofdm;
    ofdm.num_subcarriers = 64;
    const auto gen = make_papr_generator(ofdm);
    const auto a = papr_ccdf(gen, 300, 7), b = papr_ccdf(gen, 300, 7), c = papr_ccdf(gen, 300, 8);
    CHECK(a.exceed_probability == b.exceed_probability);
    CHECK(a.samples_db == b.samples_db);
    CHECK(a.samples_db != c.samples_db);
    for (std::size_t i = 1; i < th.size(); ++i)
        CHECK(a.exceed_probability[i] <= a.exceed_probability[i - 1]);
    CHECK(a.exceed_probability.front() == 1.0);
    // papr_at is consistent with the empirical exceed probability
    const double x = a.papr_at(0.1);
    std::size_t above = 0;
    for (double v : a.samples_db)
        above += v > x;
    CHECK(double(above) / 300 <= 0.1);
    CHECK_THROWS_AS(papr_ccdf(gen, 0, 1), std::invalid_argument);
}

TEST_CASE("DDAM PAPR grows with the number of paths")
{
    PaprScenario s;
    s.waveform = Waveform::Ddam;
    s.num_tx_antennas = 16;
    s.block_len = 256;
    s.max_delay_samples = 16;
    double prev = -1;
    for (int l = 1; l <= 4; ++l)
    {
        s.num_paths = l;
        const auto ccdf = papr_ccdf(make_papr_generator(s), 1000, 11);
        const double p999 = ccdf.papr_at(1e-3);
        if (l == 1)
            CHECK(std::abs(p999) < 1e-9);
        CHECK(p999 >= prev);
        prev = p999;
    }
}

TEST_CASE("spectral-efficiency overhead")
{
    OverheadParams p;
    p.num_subcarriers = 64;
    p.cp_len = 16;
    CHECK(se_overhead(Waveform::Ofdm, p) == 0.8);
    p.block_len = 1000;
    p.max_delay_samples = 16;
    CHECK(se_overhead(Waveform::Ddam, p) == doctest::Approx(1000.0 / 1032).epsilon(1e-15));
    CHECK(se_overhead(Waveform::Ddam, p) == doctest::Approx(0.9690).epsilon(1e-4));
    p.doppler_bins = 16;
    CHECK(se_overhead(Waveform::OtfsZak, p) == doctest::Approx(1024.0 / 1040));
    CHECK(se_overhead(Waveform::OtfsIsfft, p) == se_overhead(Waveform::OtfsZak, p));

    OverheadParams zero;
    zero.cp_len = 0;
    zero.max_delay_samples = 0;
    for (auto w : {Waveform::Ofdm, Waveform::OtfsIsfft, Waveform::OtfsZak, Waveform::Ddam, Waveform::DdamOfdm,
                   Waveform::DdamOtfs})
        CHECK(se_overhead(w, zero) == 1.0);

    OverheadParams bad;
    bad.num_subcarriers = 0;
    CHECK_THROWS_AS(se_overhead(Waveform::Ofdm, bad), std::invalid_argument);
}

TEST_CASE("DDAM beats OFDM on overhead once blocks are long")
{
    for (int k : {64, 256, 1024})
        for (int n_max = 1; n_max <= 256; n_max *= 2)
            for (int n : {2 * k + 1, 4 * k, 16 * k})
            {
                OverheadParams p;
                p.num_subcarriers = k;
                p.cp_len = n_max;
                p.block_len = n;
                p.max_delay_samples = n_max;
                const double ddam = se_overhead(Waveform::Ddam, p), ofdm = se_overhead(Waveform::Ofdm, p);
                CHECK(ddam == doctest::Approx(double(n) / (n + 2 * n_max)));
                CHECK(ddam > ofdm);
            }
}

TEST_CASE("bit error ratio")
{
    std::vector<std::uint8_t> a(1000, 0), b(1000, 0);
    CHECK(ber(a, b) == 0.0);
    b[17] = 1;
    CHECK(ber(a, b) == 0.001);
    std::fill(b.begin(), b.end(), 1);
    CHECK(ber(a, b) == 1.0);
    CHECK_THROWS_AS(ber(a, std::vector<std::uint8_t>(999)), std::invalid_argument);
}

TEST_CASE("complexity model cells")
{
    ComplexityParams p;
    p.num_tx_antennas = 64;
    p.num_subcarriers = 1024;
    p.doppler_bins = 16;
    p.num_paths = 3;
    p.symbols_per_block = 1e6;
    CHECK(complexity_model(ComplexityVariant::Ofdm, p).tx == 704);
    CHECK(complexity_model(ComplexityVariant::Ofdm, p).rx == 11);
    CHECK(complexity_model(ComplexityVariant::DdamMrt, p).tx == 192);
    CHECK(complexity_model(ComplexityVariant::DdamMrt, p).rx == 1);
    CHECK(complexity_model(ComplexityVariant::OtfsIsfft, p).tx == 64 * 14 + 10 + 64);
    CHECK(complexity_model(ComplexityVariant::OtfsIsfft, p).rx == 10 + 14 + 1);
    CHECK(complexity_model(ComplexityVariant::OtfsZak, p).tx == 64 * 4 + 64);
    CHECK(complexity_model(ComplexityVariant::OtfsZak, p).rx == 5);
    CHECK(complexity_model(ComplexityVariant::DdamZf, p).tx == doctest::Approx(64 * 9 / 1e6 + 192));
    CHECK(complexity_model(ComplexityVariant::DdamMmse, p).tx == doctest::Approx(64.0 * 64 * 64 * 27 / 1e6 + 192));
    CHECK(complexity_model(ComplexityVariant::DdamZf, p).rx == 1);
    CHECK(complexity_model(ComplexityVariant::DdamMmse, p).rx == 1);

    p.symbols_per_block = 1e300;
    CHECK(complexity_model(ComplexityVariant::DdamZf, p).tx == doctest::Approx(192));

    ComplexityParams bad;
    bad.num_paths = 0;
    CHECK_THROWS_AS(complexity_model(ComplexityVariant::Ofdm, bad), std::invalid_argument);
}

TEST_CASE("DDAM-ZF is cheaper than OFDM when paths are few")
{
    for (int mt : {1, 8, 64, 256})
        for (int k : {64, 256, 1024, 4096})
            for (int l = 1; l <= 16; ++l)
                for (double ns : {256.0, 1e4, 1e6})
                {
                    if (ns < double(l) * l || !(l < std::log2(double(k)) + 1))
                        continue;
                    ComplexityParams p{mt, k, 16, l, ns};
                    CHECK(complexity_model(ComplexityVariant::DdamZf, p).tx <
                          complexity_model(ComplexityVariant::Ofdm, p).tx);
                }
}

TEST_CASE("measured multiply counts track the model")
{
    for (int mt : {8, 64})
        for (int k : {256, 1024})
            for (int l : {2, 4})
            {
                const ComplexityParams p{mt, k, 16, l, 1e6};
                for (auto v : all_complexity_variants())
                {
                    const auto model = complexity_model(v, p);
                    const auto measured = measured_complexity(v, p);
                    CAPTURE(to_string(v));
                    CAPTURE(mt);
                    CAPTURE(k);
                    CAPTURE(l);
                    CHECK(measured.tx / model.tx <= 4.0);
                    CHECK(measured.tx / model.tx >= 0.25);
                    CHECK(measured.rx / model.rx <= 4.0);
                    CHECK(measured.rx / model.rx >= 0.25);
                }
            }
}

TEST_CASE("waveform names")
{
    for (auto w : {Waveform::Ofdm, Waveform::OtfsIsfft, Waveform::OtfsZak, Waveform::Ddam, Waveform::DdamOfdm,
                   Waveform::DdamOtfs})
        CHECK(waveform_from_string(to_string(w)) == w);
    CHECK(to_string(Waveform::OtfsZak) == "otfs_zak");
    CHECK_THROWS_AS(waveform_from_string("fbmc"), std::invalid_argument);
}
