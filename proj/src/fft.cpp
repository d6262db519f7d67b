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

#include "wavelab/fft.hpp"
#include "wavelab/opcount.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <memory>

namespace wavelab
{
    std::uint64_t &opcount::counter()
    {
        thread_local std::uint64_t n = 0;
        return n;
    }
}

namespace wavelab::fft
{
    namespace
    {
        struct Radix2Plan
        {
            std::size_t n = 0;
            std::vector<Complex> twiddle; // exp(-i 2 pi k / n), k < n/2
            std::vector<std::uint32_t> bitrev;

            explicit Radix2Plan(std::size_t size) : n(size), twiddle(size / 2), bitrev(size)
            {
                for (std::size_t k = 0; k < n / 2; ++k)
                    twiddle[k] = cis(-kTwoPi * double(k) / double(n));
                const int bits = std::countr_zero(n);
                for (std::size_t i = 0; i < n; ++i)
                {
                    std::uint32_t r = 0;
                    for (int b = 0; b < bits; ++b)
                        if (i & (std::size_t(1) << b))
                            r |= std::uint32_t(1) << (bits - 1 - b);
                    bitrev[i] = r;
                }
            }

            void run(std::span<Complex> a, Direction dir) const
            {
                for (std::size_t i = 0; i < n; ++i)
                    if (i < bitrev[i])
                        std::swap(a[i], a[bitrev[i]]);

                const bool inverse = dir == Direction::Inverse;
                for (std::size_t len = 2; len <= n; len <<= 1)
                {
                    const std::size_t half = len / 2;
                    const std::size_t stride = n / len;
                    for (std::size_t start = 0; start < n; start += len)
                    {
                        for (std::size_t k = 0; k < half; ++k)
                        {
                            Complex w = twiddle[k * stride];
                            if (inverse)
                                w = std::conj(w);
                            const Complex u = a[start + k];
                            const Complex v = a[start + k + half] * w;
                            a[start + k] = u + v;
                            a[start + k + half] = u - v;
                        }
                    }
                }
                if (n > 1)
                    opcount::add(std::uint64_t(n / 2) * std::uint64_t(std::countr_zero(n)));
            }
        };

        struct BluesteinPlan
        {
            std::size_t n = 0;
            std::size_t m = 0; // power-of-two convolution size >= 2n-1
            std::vector<Complex> chirp;      // exp(-i pi k^2 / n)
            std::vector<Complex> kernel_fft; // FFT of conj chirp, wrapped

            explicit BluesteinPlan(std::size_t size);
            void run(std::span<Complex> a, Direction dir) const;
        };

        const Radix2Plan &radix2_plan(std::size_t n)
        {
            thread_local std::map<std::size_t, std::unique_ptr<Radix2Plan>> cache;
            auto &slot = cache[n];
            if (!slot)
                slot = std::make_unique<Radix2Plan>(n);
            return *slot;
        }

        const BluesteinPlan &bluestein_plan(std::size_t n)
        {
            thread_local std::map<std::size_t, std::unique_ptr<BluesteinPlan>> cache;
            auto &slot = cache[n];
            if (!slot)
                slot = std::make_unique<BluesteinPlan>(n);
            return *slot;
        }

        BluesteinPlan::BluesteinPlan(std::size_t size) : n(size), m(std::bit_ceil(2 * size - 1)), chirp(size)
        {
            for (std::size_t k = 0; k < n; ++k)
            {
                // k^2 mod 2n keeps the phase argument small for large k
                const std::uint64_t k2 = (std::uint64_t(k) * k) % (2 * n);
                chirp[k] = cis(-kPi * double(k2) / double(n));
            }
            kernel_fft.assign(m, Complex{});
            kernel_fft[0] = std::conj(chirp[0]);
            for (std::size_t k = 1; k < n; ++k)
            {
                kernel_fft[k] = std::conj(chirp[k]);
                kernel_fft[m - k] = std::conj(chirp[k]);
            }
            const std::uint64_t before = opcount::counter();
            radix2_plan(m).run(kernel_fft, Direction::Forward);
            opcount::counter() = before; // plan construction is not charged
        }

        void BluesteinPlan::run(std::span<Complex> a, Direction dir) const
        {
            const bool inverse = dir == Direction::Inverse;
            std::vector<Complex> buf(m, Complex{});
            for (std::size_t k = 0; k < n; ++k)
            {
                const Complex c = inverse ? std::conj(chirp[k]) : chirp[k];
                buf[k] = a[k] * c;
            }
            const auto &plan = radix2_plan(m);
            plan.run(buf, Direction::Forward);
            for (std::size_t k = 0; k < m; ++k)
                buf[k] *= inverse ? std::conj(kernel_fft[(m - k) % m]) : kernel_fft[k];
            plan.run(buf, Direction::Inverse);
            const double scale = 1.0 / double(m);
            for (std::size_t k = 0; k < n; ++k)
            {
                const Complex c = inverse ? std::conj(chirp[k]) : chirp[k];
                a[k] = buf[k] * c * scale;
            }
            opcount::add(3 * n + m);
        }
    } // namespace

    void transform(std::span<Complex> data, Direction dir)
    {
        const std::size_t n = data.size();
        if (n <= 1)
            return;
        if (std::has_single_bit(n))
            radix2_plan(n).run(data, dir);
        else
            bluestein_plan(n).run(data, dir);
    }

    void dft_unitary(std::span<Complex> data)
    {
        transform(data, Direction::Forward);
        const double s = 1.0 / std::sqrt(double(data.size()));
        for (auto &v : data)
            v *= s;
    }

    void idft_unitary(std::span<Complex> data)
    {
        transform(data, Direction::Inverse);
        const double s = 1.0 / std::sqrt(double(data.size()));
        for (auto &v : data)
            v *= s;
    }

    CVector dft_unitary(const CVector &x)
    {
        CVector y = x;
        dft_unitary(std::span<Complex>(y.data(), std::size_t(y.size())));
        return y;
    }

    CVector idft_unitary(const CVector &x)
    {
        CVector y = x;
        idft_unitary(std::span<Complex>(y.data(), std::size_t(y.size())));
        return y;
    }

    CVector idft_oversampled(const CVector &freq, int factor)
    {
        if (factor < 1)
            throw std::invalid_argument("idft_oversampled: factor must be >= 1");
        const Eigen::Index k = freq.size();
        if (factor == 1)
            return idft_unitary(freq);
        const Eigen::Index big = k * factor;
        CVector padded = CVector::Zero(big);
        const Eigen::Index pos = (k + 1) / 2; // bins 0..pos-1 are non-negative frequencies
        padded.head(pos) = freq.head(pos);
        padded.tail(k - pos) = freq.tail(k - pos);
        transform(std::span<Complex>(padded.data(), std::size_t(big)), Direction::Inverse);
        // same scaling as the unitary IDFT, so every factor-th sample matches it
        padded /= std::sqrt(double(k));
        return padded;
    }

} // namespace wavelab::fft
