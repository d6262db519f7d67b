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

#ifndef WAVELAB_PARALLEL_HPP
#define WAVELAB_PARALLEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>

namespace wavelab
{
    // Worker threads for Monte Carlo loops: WAVELAB_THREADS if set to a positive
    // integer, otherwise the hardware concurrency.
    int worker_count();

    // Runs body(i) for i in [0, n) on up to worker_count() threads. The first
    // exception thrown by any iteration is rethrown after all workers stop.
    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

    // Independent per-trial seed so results do not depend on the thread count.
    std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

} // namespace wavelab

#endif
