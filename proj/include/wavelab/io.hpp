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

#ifndef WAVELAB_IO_HPP
#define WAVELAB_IO_HPP

#include "wavelab/channel.hpp"
#include "wavelab/ddam.hpp"

#include <iosfwd>
#include <string>

namespace wavelab
{
    // Channel scenario as JSON:
    //   {"array": {"mt": 64, "spacing": 0.5}, "sample_rate_hz": 1e8,
    //    "paths": [{"gain_re", "gain_im", "delay_s", "doppler_hz", "aod"}, ...]}
    std::string channel_to_json(const MultipathChannel &channel);
    MultipathChannel channel_from_json(const std::string &text);

    // Same schema as the channel, plus "genie". Delays are written in seconds.
    std::string psi_to_json(const PathStateInfo &psi);
    PathStateInfo psi_from_json(const std::string &text);

    // CSV with header "index,re,im"; index is the lag in samples.
    void write_equivalent_taps_csv(std::ostream &out, const EquivalentChannel &eq);

    // Shortest decimal text that reads back to the same double.
    std::string format_double(double v);

} // namespace wavelab

#endif
