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
#include "detail/json_codec.hpp"

#include <charconv>
#include <cmath>

namespace wavelab
{
    namespace detail
    {
        double require_number(const Json &j, const char *key, const std::string &where)
        {
            if (!j.is_object() || !j.contains(key))
                throw std::invalid_argument(where + "." + key + ": required field is missing");
            const auto &v = j.at(key);
            if (!v.is_number())
                throw std::invalid_argument(where + "." + key + ": expected a number");
            return v.get<double>();
        }

        namespace
        {
            ArrayConfig array_from(const Json &j, const std::string &where)
            {
                if (!j.is_object() || !j.contains("array"))
                    throw std::invalid_argument(where + ".array: required field is missing");
                const auto &a = j.at("array");
                const std::string at = where + ".array";
                ArrayConfig array;
                const double mt = require_number(a, "mt", at);
                if (mt < 1 || mt != std::floor(mt))
                    throw std::invalid_argument(at + ".mt: must be a positive integer");
                array.num_tx_antennas = int(mt);
                if (a.contains("spacing"))
                    array.element_spacing = require_number(a, "spacing", at);
                if (!(array.element_spacing > 0.0))
                    throw std::invalid_argument(at + ".spacing: must be positive");
                return array;
            }

            const Json &paths_of(const Json &j, const std::string &where)
            {
                if (!j.contains("paths") || !j.at("paths").is_array() || j.at("paths").empty())
                    throw std::invalid_argument(where + ".paths: expected a non-empty array");
                return j.at("paths");
            }

            Json array_json(const ArrayConfig &a) { return Json{{"mt", a.num_tx_antennas}, {"spacing", a.element_spacing}}; }
        }

        Json channel_to_json_value(const MultipathChannel &channel)
        {
            Json paths = Json::array();
            for (const auto &p : channel.paths())
                paths.push_back(Json{{"gain_re", p.gain.real()},
                                     {"gain_im", p.gain.imag()},
                                     {"delay_s", p.delay_s},
                                     {"doppler_hz", p.doppler_hz},
                                     {"aod", p.aod}});
            return Json{{"array", array_json(channel.array())},
                        {"sample_rate_hz", channel.sample_rate()},
                        {"paths", paths}};
        }

        MultipathChannel channel_from_json_value(const Json &j, const std::string &where)
        {
            if (!j.is_object())
                throw std::invalid_argument(where + ": expected an object");
            const ArrayConfig array = array_from(j, where);
            const double rate = require_number(j, "sample_rate_hz", where);
            if (!(rate > 0.0))
                throw std::invalid_argument(where + ".sample_rate_hz: must be positive");
            const auto &list = paths_of(j, where);
            std::vector<PathParams> paths;
            for (std::size_t i = 0; i < list.size(); ++i)
            {
                const std::string at = where + ".paths[" + std::to_string(i) + "]";
                const auto &p = list[i];
                PathParams q;
                q.gain = {require_number(p, "gain_re", at), require_number(p, "gain_im", at)};
                q.delay_s = require_number(p, "delay_s", at);
                q.doppler_hz = require_number(p, "doppler_hz", at);
                q.aod = require_number(p, "aod", at);
                if (std::abs(q.gain) == 0.0)
                    throw std::invalid_argument(at + ": gain must be nonzero");
                if (q.delay_s < 0.0)
                    throw std::invalid_argument(at + ".delay_s: must be non-negative");
                if (q.aod < -1.0 || q.aod >= 1.0)
                    throw std::invalid_argument(at + ".aod: must lie in [-1, 1)");
                paths.push_back(q);
            }
            return MultipathChannel(array, std::move(paths), rate);
        }

        Json psi_to_json_value(const PathStateInfo &psi)
        {
            Json paths = Json::array();
            for (const auto &p : psi.paths)
                paths.push_back(Json{{"gain_re", p.gain_estimate.real()},
                                     {"gain_im", p.gain_estimate.imag()},
                                     {"delay_s", p.total_delay() / psi.sample_rate},
                                     {"doppler_hz", p.doppler_hz},
                                     {"aod", p.aod}});
            return Json{{"array", array_json(psi.array)},
                        {"sample_rate_hz", psi.sample_rate},
                        {"paths", paths},
                        {"genie", psi.genie}};
        }

        PathStateInfo psi_from_json_value(const Json &j, const std::string &where)
        {
            PathStateInfo psi = psi_from_channel(channel_from_json_value(j, where));
            if (j.contains("genie"))
            {
                if (!j.at("genie").is_boolean())
                    throw std::invalid_argument(where + ".genie: expected a boolean");
                psi.genie = j.at("genie").get<bool>();
            }
            return psi;
        }
    }

    namespace
    {
        detail::Json parse(const std::string &text, const char *what)
        {
            try
            {
                return detail::Json::parse(text);
            }
            catch (const detail::Json::parse_error &e)
            {
                throw std::invalid_argument(std::string(what) + ": " + e.what());
            }
        }
    }

    std::string channel_to_json(const MultipathChannel &channel)
    {
        return detail::channel_to_json_value(channel).dump(2) + "\n";
    }

    MultipathChannel channel_from_json(const std::string &text)
    {
        return detail::channel_from_json_value(parse(text, "channel JSON"));
    }

    std::string psi_to_json(const PathStateInfo &psi) { return detail::psi_to_json_value(psi).dump(2) + "\n"; }

    PathStateInfo psi_from_json(const std::string &text)
    {
        return detail::psi_from_json_value(parse(text, "PSI JSON"));
    }

    std::string format_double(double v)
    {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    }

} // namespace wavelab
