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

#include "wavelab/io.hpp"

#include <ostream>

namespace wavelab
{
    void write_equivalent_taps_csv(std::ostream &out, const EquivalentChannel &eq)
    {
        out << "index,re,im\n";
        for (std::size_t i = 0; i < eq.taps.size(); ++i)
            out << eq.first_lag + long(i) << ',' << format_double(eq.taps[i].real()) << ','
                << format_double(eq.taps[i].imag()) << '\n';
    }

} // namespace wavelab
