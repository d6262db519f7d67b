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

#include "wavelab/constellation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wavelab
{
    namespace
    {
        // Gray order along one axis for 4-PAM: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
        double pam4_level(std::uint8_t b0, std::uint8_t b1)
        {
            if (b0 == 0)
                return b1 == 0 ? -3.0 : -1.0;
            return b1 == 0 ? 3.0 : 1.0;
        }

        void pam4_bits(double v, std::uint8_t &b0, std::uint8_t &b1)
        {
            b0 = v > 0.0 ? 1 : 0;
            b1 = std::abs(v) < 2.0 ? 1 : 0;
        }

        const double kQpskScale = 1.0 / std::sqrt(2.0);
        const double kQam16Scale = 1.0 / std::sqrt(10.0);
    }

    int bits_per_symbol(Modulation mod) { return mod == Modulation::Qpsk ? 2 : 4; }

    Modulation modulation_from_string(std::string_view name)
    {
        if (name == "qpsk")
            return Modulation::Qpsk;
        if (name == "qam16" || name == "16qam")
            return Modulation::Qam16;
        throw std::invalid_argument("unknown modulation '" + std::string(name) + "'");
    }

    CVector map_bits(std::span<const std::uint8_t> bits, Modulation mod)
    {
        const std::size_t bps = std::size_t(bits_per_symbol(mod));
        if (bits.size() % bps != 0)
            throw std::invalid_argument("map_bits: bit count is not a multiple of bits per symbol");
        CVector out(Eigen::Index(bits.size() / bps));
        for (Eigen::Index i = 0; i < out.size(); ++i)
        {
            const auto *b = bits.data() + std::size_t(i) * bps;
            if (mod == Modulation::Qpsk)
                out[i] = Complex(1.0 - 2.0 * b[0], 1.0 - 2.0 * b[1]) * kQpskScale;
            else
                out[i] = Complex(pam4_level(b[0], b[1]), pam4_level(b[2], b[3])) * kQam16Scale;
        }
        return out;
    }

    std::vector<std::uint8_t> demap_hard(const CVector &symbols, Modulation mod)
    {
        std::vector<std::uint8_t> bits;
        bits.reserve(std::size_t(symbols.size()) * std::size_t(bits_per_symbol(mod)));
        for (const Complex &s : symbols)
        {
            if (mod == Modulation::Qpsk)
            {
                bits.push_back(s.real() < 0.0 ? 1 : 0);
                bits.push_back(s.imag() < 0.0 ? 1 : 0);
            }
            else
            {
                std::uint8_t b[4];
                pam4_bits(s.real() / kQam16Scale, b[0], b[1]);
                pam4_bits(s.imag() / kQam16Scale, b[2], b[3]);
                bits.insert(bits.end(), b, b + 4);
            }
        }
        return bits;
    }

    CVector random_symbols(std::size_t count, Modulation mod, std::mt19937_64 &rng)
    {
        return map_bits(random_bits(count * std::size_t(bits_per_symbol(mod)), rng), mod);
    }

    CVector slice(const CVector &symbols, Modulation mod)
    {
        const auto bits = demap_hard(symbols, mod);
        return map_bits(bits, mod);
    }

    std::vector<std::uint8_t> random_bits(std::size_t count, std::mt19937_64 &rng)
    {
        std::vector<std::uint8_t> bits(count);
        std::uint64_t word = 0;
        for (std::size_t i = 0; i < count; ++i)
        {
            if (i % 64 == 0)
                word = rng();
            bits[i] = std::uint8_t((word >> (i % 64)) & 1u);
        }
        return bits;
    }

    double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

    double qpsk_ber_awgn(double es_n0) { return q_function(std::sqrt(es_n0)); }

} // namespace wavelab
