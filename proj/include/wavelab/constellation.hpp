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

#ifndef WAVELAB_CONSTELLATION_HPP
#define WAVELAB_CONSTELLATION_HPP

#include "wavelab/types.hpp"

#include <random>
#include <span>
#include <string_view>

namespace wavelab
{
    /// Gray-mapped square constellations with unit average symbol energy.
    enum class Modulation
    {
        Qpsk,
        Qam16
    };

    int bits_per_symbol(Modulation mod);
    Modulation modulation_from_string(std::string_view name);

    // bits.size() must be a multiple of bits_per_symbol(mod)
    CVector map_bits(std::span<const std::uint8_t> bits, Modulation mod);

    // Nearest-point decisions, returned as bits.
    std::vector<std::uint8_t> demap_hard(const CVector &symbols, Modulation mod);

    // Nearest constellation point for each input.
    CVector slice(const CVector &symbols, Modulation mod);

    std::vector<std::uint8_t> random_bits(std::size_t count, std::mt19937_64 &rng);

    // count symbols drawn from uniformly random bits
    CVector random_symbols(std::size_t count, Modulation mod, std::mt19937_64 &rng);

    // Q(x) = P(N(0,1) > x)
    double q_function(double x);

    // Uncoded Gray QPSK bit error rate on an AWGN channel at the given Es/N0 (linear).
    double qpsk_ber_awgn(double es_n0);

} // namespace wavelab

#endif
