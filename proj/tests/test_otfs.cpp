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
#include "wavelab/otfs.hpp"

#include <random>
#include <cstring>
#include <sstream>

using namespace wavelab;

namespace
{
    DdGrid random_grid(const OtfsConfig &cfg, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        return vector_to_grid(random_symbols(std::size_t(cfg.frame_length()), Modulation::Qpsk, rng), cfg);
    }

    // s[k + K m] = M^-1/2 sum_m' x[k, m'] exp(i 2 pi m m' / M), evaluated directly
    CVector zak_reference(const DdGrid &x)
    {
        const auto k_bins = x.rows(), m_bins = x.cols();
        CVector s = CVector::Zero(k_bins * m_bins);
        for (Eigen::Index k = 0; k < k_bins; ++k)
            for (Eigen::Index m = 0; m < m_bins; ++m)
                for (Eigen::Index q = 0; q < m_bins; ++q)
                    s[k + k_bins * m] += x(k, q) * std::polar(1.0, kTwoPi * double(m * q) / double(m_bins));
        return s / std::sqrt(double(m_bins));
    }

    int count_dominant(const CVector &col, double rel)
    {
        const double peak = col.cwiseAbs2().maxCoeff();
        return int((col.cwiseAbs2().array() >= rel * peak).count());
    }
}

TEST_CASE("zero grid gives a zero frame")
{
    const OtfsConfig cfg{4, 8, 3, 1.0};
    for (auto v : {OtfsVariant::Isfft, OtfsVariant::Zak})
    {
        const Frame f = otfs_modulate(DdGrid::Zero(8, 4), cfg, v);
        CHECK(f.num_samples() == 35);
        CHECK(f.samples.norm() == 0.0);
    }
}

TEST_CASE("round trips over the configuration grid")
{
    for (int m : {1, 2, 16})
        for (int k : {1, 8, 128})
            for (int cp : {0, 5})
            {
                const OtfsConfig cfg{m, k, cp, 1e6};
                const DdGrid x = random_grid(cfg, std::uint64_t(m * 1000 + k + cp));
                for (auto v : {OtfsVariant::Isfft, OtfsVariant::Zak})
                    CHECK((otfs_demodulate(otfs_modulate(x, cfg, v), cfg, v) - x).cwiseAbs().maxCoeff() < 1e-12);
            }
}

TEST_CASE("Zak modulation follows the inverse Zak sum; M = 1 is the identity")
{
    const OtfsConfig cfg{8, 16, 0, 1.0};
    const DdGrid x = random_grid(cfg, 3);
    CHECK((otfs_modulate_zak(x, cfg).samples.row(0).transpose() - zak_reference(x)).norm() < 1e-12);

    const OtfsConfig flat{1, 32, 0, 1.0};
    const DdGrid v = random_grid(flat, 4);
    CHECK((otfs_modulate_zak(v, flat).samples.row(0).transpose() - grid_to_vector(v)).norm() < 1e-15);
}

TEST_CASE("both variants are unitary and agree under rectangular pulses")
{
    const OtfsConfig cfg{16, 32, 7, 1.0};
    const DdGrid x = random_grid(cfg, 5);
    const Frame a = otfs_modulate_isfft(x, cfg), b = otfs_modulate_zak(x, cfg);
    CHECK(std::abs(a.samples.rightCols(cfg.frame_length()).squaredNorm() - x.squaredNorm()) < 1e-12 * x.squaredNorm());
    CHECK(std::abs(b.samples.rightCols(cfg.frame_length()).squaredNorm() - x.squaredNorm()) < 1e-12 * x.squaredNorm());
    CHECK((a.samples - b.samples).norm() < 1e-12);
    // the CP copies the frame tail
    CHECK((a.samples.leftCols(7) - a.samples.rightCols(7)).norm() == 0.0);
}

TEST_CASE("DD impulse spreads to average power 1/(MK) per sample")
{
    const OtfsConfig cfg{8, 16, 0, 1.0};
    DdGrid x = DdGrid::Zero(16, 8);
    x(0, 0) = 1.0;
    for (auto v : {OtfsVariant::Isfft, OtfsVariant::Zak})
    {
        const CVector s = otfs_modulate(x, cfg, v).samples.row(0).transpose();
        CHECK(s.squaredNorm() / double(s.size()) == doctest::Approx(1.0 / 128).epsilon(1e-12));
        // energy sits on the first delay bin of every Doppler block, M^-1/2 each
        for (Eigen::Index t = 0; t < s.size(); ++t)
            CHECK(std::abs(s[t]) == doctest::Approx(t % 16 == 0 ? 1.0 / std::sqrt(8.0) : 0.0));
    }
}

TEST_CASE("effective matrix: identity, integer delay and two taps")
{
    const OtfsConfig cfg{4, 8, 4, 1.0};
    const auto identity = build_channel(ArrayConfig{1}, {{1.0, 0, 0, 0}}, 1.0);
    for (auto v : {OtfsVariant::Isfft, OtfsVariant::Zak})
        CHECK((dd_effective_matrix(identity, cfg, v) - CMatrix::Identity(32, 32)).norm() < 1e-12);

    const auto shift = build_channel(ArrayConfig{1}, {{1.0, 3.0, 0, 0}}, 1.0);
    for (auto v : {OtfsVariant::Isfft, OtfsVariant::Zak})
    {
        const CMatrix h = dd_effective_matrix(shift, cfg, v);
        for (Eigen::Index j = 0; j < h.cols(); ++j)
        {
            CHECK(count_dominant(h.col(j), 1e-20) == 1);
            CHECK(h.col(j).cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(max_dominant_entries_per_column(h) == 1);
    }

    const auto two = build_channel(ArrayConfig{1}, {{0.8, 0.0, 0, 0}, {Complex(0.2, 0.4), 2.0, 1.0 / 32, 0}}, 1.0);
    const CMatrix h2 = dd_effective_matrix(two, cfg, OtfsVariant::Zak);
    CHECK(max_dominant_entries_per_column(h2) == 2); // on-grid Doppler: no leakage
    const auto frac = build_channel(ArrayConfig{1}, {{0.8, 0.0, 0, 0}, {Complex(0.2, 0.4), 2.0, 0.4 / 32, 0}}, 1.0);
    const int spread = max_dominant_entries_per_column(dd_effective_matrix(frac, cfg, OtfsVariant::Zak));
    CHECK(spread > 2);
    CHECK(spread <= 1 + cfg.doppler_bins);

    CHECK_THROWS_AS(dd_effective_matrix(identity, OtfsConfig{64, 128, 0, 1.0}, OtfsVariant::Zak), std::invalid_argument);
}

TEST_CASE("effective matrix is linear and predicts the channel output")
{
    const OtfsConfig cfg{4, 16, 6, 1e4};
    const auto ch = build_channel(ArrayConfig{1}, {{Complex(0.6, 0.3), 0, 120.0, 0}, {Complex(-0.4, 0.2), 4e-4, -300.0, 0}}, 1e4);
    const CMatrix h = dd_effective_matrix(ch, cfg, OtfsVariant::Isfft);
    const DdGrid x = random_grid(cfg, 6), y = random_grid(cfg, 7);
    const Complex a{0.3, -1.1}, b{2.0, 0.5};
    const DdGrid combo = a * x + b * y;
    const DdGrid out = otfs_demodulate_isfft(apply_channel(ch, otfs_modulate_isfft(combo, cfg)), cfg);
    CHECK((grid_to_vector(out) - h * grid_to_vector(combo)).norm() < 1e-12 * grid_to_vector(out).norm());
    CHECK((h * grid_to_vector(combo) - (a * h * grid_to_vector(x) + b * h * grid_to_vector(y))).norm() < 1e-12 * out.norm());
}

TEST_CASE("MMSE equalizer")
{
    const OtfsConfig cfg{2, 4, 0, 1.0};
    const DdGrid y = random_grid(cfg, 8);
    CHECK((mmse_equalize_dd(y, CMatrix::Identity(8, 8), 0.0, cfg) - y).norm() < 1e-15);

    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    CMatrix h(8, 8);
    for (Eigen::Index i = 0; i < 64; ++i)
        h(i) = {g(rng), g(rng)};
    const DdGrid x = random_grid(cfg, 9);
    const DdGrid rx = vector_to_grid(h * grid_to_vector(x), cfg);
    CHECK((mmse_equalize_dd(rx, h, 0.0, cfg) - x).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(mmse_equalize_dd(rx, h, 1e12, cfg).norm() < 1e-9);

    CHECK_THROWS_AS(mmse_equalize_dd(rx, CMatrix::Zero(8, 8), 0.0, cfg), std::runtime_error);
    CHECK_NOTHROW(mmse_equalize_dd(rx, CMatrix::Zero(8, 8), 0.1, cfg));
}

TEST_CASE("static single-tap channel: MMSE BER follows AWGN theory")
{
    const OtfsConfig cfg{8, 16, 0, 1.0};
    const Complex gain = std::polar(0.7, 1.1);
    const auto ch = build_channel(ArrayConfig{1}, {{gain, 0, 0, 0}}, 1.0);
    const CMatrix h = dd_effective_matrix(ch, cfg, OtfsVariant::Zak);
    for (double snr_db : {20.0, 7.0})
    {
        const double nv = std::norm(gain) / std::pow(10.0, snr_db / 10);
        std::mt19937_64 rng(11);
        std::size_t errors = 0, bits = 0;
        for (int f = 0; f < 400; ++f)
        {
            const DdGrid x = random_grid(cfg, rng());
            Frame rx = add_noise(apply_channel(ch, otfs_modulate_zak(x, cfg)), nv, rng());
            const DdGrid est = mmse_equalize_dd(otfs_demodulate_zak(rx, cfg), h, nv, cfg);
            const auto a = demap_hard(grid_to_vector(x), Modulation::Qpsk);
            const auto b = demap_hard(grid_to_vector(est), Modulation::Qpsk);
            for (std::size_t i = 0; i < a.size(); ++i)
                errors += a[i] != b[i];
            bits += a.size();
        }
        const double p = qpsk_ber_awgn(std::pow(10.0, snr_db / 10));
        const double sigma = std::sqrt(p * (1 - p) / double(bits));
        CAPTURE(snr_db);
        CHECK(std::abs(double(errors) / double(bits) - p) <= 3 * sigma + 1e-12);
    }
}

TEST_CASE("DDG1 container")
{
    const OtfsConfig cfg{4, 8, 0, 1.0};
    const DdGrid x = random_grid(cfg, 12);
    std::stringstream buf;
    write_dd_grid(buf, x);
    const std::string bytes = buf.str();
    REQUIRE(bytes.size() == 16 + 32 * 16);
    CHECK(bytes.substr(0, 4) == "DDG1");
    std::uint32_t k = 0, m = 0;
    std::memcpy(&k, bytes.data() + 4, 4);
    std::memcpy(&m, bytes.data() + 8, 4);
    CHECK(k == 8);
    CHECK(m == 4);
    double first[2];
    std::memcpy(first, bytes.data() + 16 + 16, 16); // row-major: element (0, 1)
    CHECK(first[0] == x(0, 1).real());
    CHECK(first[1] == x(0, 1).imag());
    std::stringstream in(bytes);
    CHECK(read_dd_grid(in) == x);

    std::stringstream bad("XXXX");
    CHECK_THROWS(read_dd_grid(bad));
}
