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

#ifndef WAVELAB_TYPES_HPP
#define WAVELAB_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace wavelab
{
    using Complex = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;
    using RVector = Eigen::VectorXd;

    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
    inline constexpr Complex kJ{0.0, 1.0};

    // exp(i * phase)
    inline Complex cis(double phase) { return {std::cos(phase), std::sin(phase)}; }

    /// Block of complex baseband samples, one row per transmit antenna.
    ///
    /// Scalar signals (a single receive antenna, or a waveform before spatial
    /// precoding) use a single row.
    struct Frame
    {
        CMatrix samples;          // num_antennas x num_samples
        double sample_rate = 1.0; // Hz

        Frame() = default;
        Frame(Eigen::Index rows, Eigen::Index cols, double rate)
            : samples(CMatrix::Zero(rows, cols)), sample_rate(rate) {}
        Frame(CMatrix s, double rate) : samples(std::move(s)), sample_rate(rate) {}

        Eigen::Index num_antennas() const { return samples.rows(); }
        Eigen::Index num_samples() const { return samples.cols(); }

        // Throws if the frame is empty or the rate is not positive.
        void validate() const
        {
            if (samples.rows() < 1 || samples.cols() < 1)
                throw std::invalid_argument("Frame: must contain at least one antenna row and one sample");
            if (!(sample_rate > 0.0))
                throw std::invalid_argument("Frame: sample_rate must be positive");
        }

        static Frame scalar(const CVector &row, double rate)
        {
            Frame f(1, row.size(), rate);
            f.samples.row(0) = row.transpose();
            return f;
        }
    };

    inline bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace wavelab

#endif
