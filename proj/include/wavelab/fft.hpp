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

#ifndef WAVELAB_FFT_HPP
#define WAVELAB_FFT_HPP

#include "wavelab/types.hpp"

#include <span>

namespace wavelab::fft
{
    enum class Direction
    {
        Forward, // exp(-i 2 pi k n / N)
        Inverse  // exp(+i 2 pi k n / N)
    };

    // In-place unnormalized transform of any length. Power-of-two sizes use an
    // iterative radix-2 kernel; other sizes go through Bluestein's chirp-z.
    void transform(std::span<Complex> data, Direction dir);

    // Unitary DFT / IDFT (scaled by 1/sqrt(N)).
    void dft_unitary(std::span<Complex> data);
    void idft_unitary(std::span<Complex> data);

    CVector dft_unitary(const CVector &x);
    CVector idft_unitary(const CVector &x);

    // Zero-padded inverse transform: places the K bins of `freq` symmetrically
    // around DC in a K*factor grid and returns factor-times oversampled time
    // samples with the same average power as the critically sampled IDFT.
    CVector idft_oversampled(const CVector &freq, int factor);

} // namespace wavelab::fft

#endif
