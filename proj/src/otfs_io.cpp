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

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

namespace wavelab
{
    namespace
    {
        static_assert(std::endian::native == std::endian::little, "DDG1 I/O assumes a little-endian host");

        constexpr std::array<char, 4> kMagic{'D', 'D', 'G', '1'};

        void put_u32(std::ostream &out, std::uint32_t v) { out.write(reinterpret_cast<const char *>(&v), 4); }

        void put_f64(std::ostream &out, double v) { out.write(reinterpret_cast<const char *>(&v), 8); }

        std::uint32_t get_u32(std::istream &in)
        {
            std::uint32_t v = 0;
            in.read(reinterpret_cast<char *>(&v), 4);
            return v;
        }

        double get_f64(std::istream &in)
        {
            double v = 0;
            in.read(reinterpret_cast<char *>(&v), 8);
            return v;
        }
    }

    void write_dd_grid(std::ostream &out, const DdGrid &grid)
    {
        out.write(kMagic.data(), 4);
        put_u32(out, std::uint32_t(grid.rows()));
        put_u32(out, std::uint32_t(grid.cols()));
        put_u32(out, 0);
        for (Eigen::Index k = 0; k < grid.rows(); ++k)
            for (Eigen::Index m = 0; m < grid.cols(); ++m)
            {
                put_f64(out, grid(k, m).real());
                put_f64(out, grid(k, m).imag());
            }
        if (!out)
            throw std::runtime_error("write_dd_grid: stream write failed");
    }

    DdGrid read_dd_grid(std::istream &in)
    {
        std::array<char, 4> magic{};
        in.read(magic.data(), 4);
        if (!in || magic != kMagic)
            throw std::runtime_error("read_dd_grid: missing DDG1 magic");
        const std::uint32_t k = get_u32(in);
        const std::uint32_t m = get_u32(in);
        get_u32(in);
        if (!in || k == 0 || m == 0)
            throw std::runtime_error("read_dd_grid: malformed header");
        DdGrid grid(k, m);
        for (std::uint32_t r = 0; r < k; ++r)
            for (std::uint32_t c = 0; c < m; ++c)
            {
                const double re = get_f64(in);
                const double im = get_f64(in);
                grid(r, c) = Complex(re, im);
            }
        if (!in)
            throw std::runtime_error("read_dd_grid: truncated payload");
        return grid;
    }

} // namespace wavelab
