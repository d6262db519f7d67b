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

#ifndef WAVELAB_OPCOUNT_HPP
#define WAVELAB_OPCOUNT_HPP

#include <cstdint>

namespace wavelab::opcount
{
    // Complex multiplications performed on the calling thread. The modem code
    // paths report their multiplies here so measured costs can be compared
    // against the analytic complexity model.
    std::uint64_t &counter();

    inline void add(std::uint64_t n) { counter() += n; }

    /// Reads the multiplies issued on this thread while the scope is alive.
    class Scope
    {
    public:
        Scope() : start_(counter()) {}
        std::uint64_t count() const { return counter() - start_; }

    private:
        std::uint64_t start_;
    };

} // namespace wavelab::opcount

#endif
