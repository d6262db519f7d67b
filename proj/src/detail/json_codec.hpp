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

#ifndef WAVELAB_DETAIL_JSON_CODEC_HPP
#define WAVELAB_DETAIL_JSON_CODEC_HPP

#include "wavelab/channel.hpp"
#include "wavelab/ddam.hpp"

#include "json.hpp"

namespace wavelab::detail
{
    using Json = nlohmann::ordered_json;

    Json channel_to_json_value(const MultipathChannel &channel);

    // Throws std::invalid_argument naming the offending field relative to `where`.
    MultipathChannel channel_from_json_value(const Json &j, const std::string &where = "channel");

    Json psi_to_json_value(const PathStateInfo &psi);
    PathStateInfo psi_from_json_value(const Json &j, const std::string &where = "psi");

    double require_number(const Json &j, const char *key, const std::string &where);
}

#endif
