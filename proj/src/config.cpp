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

#include "wavelab/experiment.hpp"
#include "wavelab/io.hpp"
#include "detail/config_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace wavelab
{
    const std::vector<std::string> &experiment_names()
    {
        static const std::vector<std::string> names{"feasibility_region", "papr_ccdf",
                                                    "se_sweep",           "ber_vs_snr",
                                                    "equivalent_channel_report", "complexity_table"};
        return names;
    }

    namespace detail
    {
        MultipathChannel ChannelSettings::realize(std::uint64_t seed) const
        {
            if (fixed)
                return *fixed;
            return sample_random_channel(random.array, random.num_paths, random.delay_range_s,
                                         random.doppler_range_hz, random.sample_rate, seed, random.snap);
        }

        namespace
        {
            [[noreturn]] void fail(const std::string &path, const std::string &why)
            {
                throw ConfigError(path + ": " + why);
            }

            // Typed access to one JSON object that remembers the keys it consumed.
            class Section
            {
            public:
                Section(const Json &j, std::string path) : j_(j), path_(std::move(path))
                {
                    if (!j_.is_object())
                        fail(path_.empty() ? "<root>" : path_, "expected an object");
                }

                std::string at(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

                bool has(const std::string &key)
                {
                    seen_.insert(key);
                    return j_.contains(key);
                }

                const Json &raw(const std::string &key)
                {
                    seen_.insert(key);
                    return j_.at(key);
                }

                double number(const std::string &key, double fallback, double lo = -inf(), double hi = inf())
                {
                    if (!has(key))
                        return fallback;
                    return checked_number(raw(key), at(key), lo, hi);
                }

                long long integer(const std::string &key, long long fallback, long long lo,
                                  long long hi = std::numeric_limits<int>::max())
                {
                    if (!has(key))
                        return fallback;
                    return checked_integer(raw(key), at(key), lo, hi);
                }

                bool boolean(const std::string &key, bool fallback)
                {
                    if (!has(key))
                        return fallback;
                    if (!raw(key).is_boolean())
                        fail(at(key), "expected true or false");
                    return raw(key).get<bool>();
                }

                std::string text(const std::string &key, const std::string &fallback)
                {
                    if (!has(key))
                        return fallback;
                    if (!raw(key).is_string())
                        fail(at(key), "expected a string");
                    return raw(key).get<std::string>();
                }

                // A scalar or a non-empty list of scalars.
                std::vector<double> numbers(const std::string &key, std::vector<double> fallback,
                                            double lo = -inf(), double hi = inf())
                {
                    if (!has(key))
                        return fallback;
                    std::vector<double> out;
                    for_each_item(key, [&](const Json &v, const std::string &p) {
                        out.push_back(checked_number(v, p, lo, hi));
                    });
                    return out;
                }

                std::vector<int> integers(const std::string &key, std::vector<int> fallback, long long lo)
                {
                    if (!has(key))
                        return fallback;
                    std::vector<int> out;
                    for_each_item(key, [&](const Json &v, const std::string &p) {
                        out.push_back(int(checked_integer(v, p, lo, std::numeric_limits<int>::max())));
                    });
                    return out;
                }

                std::vector<std::string> texts(const std::string &key, std::vector<std::string> fallback)
                {
                    if (!has(key))
                        return fallback;
                    std::vector<std::string> out;
                    for_each_item(key, [&](const Json &v, const std::string &p) {
                        if (!v.is_string())
                            fail(p, "expected a string");
                        out.push_back(v.get<std::string>());
                    });
                    return out;
                }

                // Rejects keys nobody asked for, which are usually typos.
                void finish() const
                {
                    for (const auto &item : j_.items())
                        if (!seen_.count(item.key()))
                            fail(at(item.key()), "unknown field");
                }

                static double inf() { return std::numeric_limits<double>::infinity(); }

                static double checked_number(const Json &v, const std::string &p, double lo, double hi)
                {
                    if (!v.is_number())
                        fail(p, "expected a number");
                    const double x = v.get<double>();
                    if (!std::isfinite(x) || x < lo || x > hi)
                        fail(p, "value " + format_double(x) + " outside [" + format_double(lo) + ", " +
                                    format_double(hi) + "]");
                    return x;
                }

                static long long checked_integer(const Json &v, const std::string &p, long long lo, long long hi)
                {
                    if (!v.is_number_integer())
                        fail(p, "expected an integer");
                    const long long x = v.is_number_unsigned() ? (long long)std::min<std::uint64_t>(
                                                                     v.get<std::uint64_t>(), std::uint64_t(hi) + 1)
                                                               : v.get<long long>();
                    if (x < lo || x > hi)
                        fail(p, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
                    return x;
                }

            private:
                template <typename Fn> void for_each_item(const std::string &key, Fn &&fn)
                {
                    const Json &v = raw(key);
                    if (!v.is_array())
                    {
                        fn(v, at(key));
                        return;
                    }
                    if (v.empty())
                        fail(at(key), "expected a non-empty list");
                    for (std::size_t i = 0; i < v.size(); ++i)
                        fn(v[i], at(key) + "[" + std::to_string(i) + "]");
                }

                const Json &j_;
                std::string path_;
                std::set<std::string> seen_;
            };

            template <typename T, typename Fn> T parse_enum(Section &s, const std::string &key, T fallback, Fn &&from)
            {
                if (!s.has(key))
                    return fallback;
                const std::string name = s.text(key, "");
                try
                {
                    return from(name);
                }
                catch (const std::invalid_argument &e)
                {
                    fail(s.at(key), e.what());
                }
            }

            std::vector<Waveform> parse_waveforms(Section &s, const std::string &key, std::vector<Waveform> fallback)
            {
                if (!s.has(key))
                    return fallback;
                std::vector<Waveform> out;
                const auto names = s.texts(key, {});
                for (std::size_t i = 0; i < names.size(); ++i)
                {
                    try
                    {
                        out.push_back(waveform_from_string(names[i]));
                    }
                    catch (const std::invalid_argument &e)
                    {
                        fail(s.at(key) + "[" + std::to_string(i) + "]", e.what());
                    }
                }
                return out;
            }

            int power_of_two(Section &s, const std::string &key, int fallback)
            {
                const auto v = s.integer(key, fallback, 1);
                if (!is_power_of_two(v))
                    fail(s.at(key), "must be a power of two");
                return int(v);
            }

            std::pair<double, double> range(Section &s, const std::string &key, std::pair<double, double> fallback,
                                            double lo)
            {
                if (!s.has(key))
                    return fallback;
                const auto v = s.numbers(key, {}, lo);
                if (v.size() != 2 || v[0] > v[1])
                    fail(s.at(key), "expected [low, high] with low <= high");
                return {v[0], v[1]};
            }

            ChannelSettings parse_channel(const Json &j, const std::string &path)
            {
                ChannelSettings settings;
                Section s(j, path);
                if (s.has("random"))
                {
                    Section r(s.raw("random"), s.at("random"));
                    auto &rc = settings.random;
                    rc.array.num_tx_antennas = int(r.integer("mt", 64, 1));
                    rc.array.element_spacing = r.number("spacing", 0.5, 1e-12);
                    rc.num_paths = int(r.integer("num_paths", 3, 1));
                    rc.delay_range_s = range(r, "delay_range_s", {0.0, 0.0}, 0.0);
                    rc.doppler_range_hz = range(r, "doppler_range_hz", {0.0, 0.0}, -Section::inf());
                    rc.sample_rate = r.number("sample_rate_hz", 1e8, 1e-12);
                    rc.snap.integer_delays = r.boolean("integer_delays", true);
                    rc.snap.doppler_grid_hz = r.number("doppler_grid_hz", 0.0, 0.0);
                    r.finish();
                    s.finish();
                    return settings;
                }
                try
                {
                    settings.fixed = channel_from_json_value(j, path);
                }
                catch (const std::invalid_argument &e)
                {
                    throw ConfigError(e.what());
                }
                catch (const std::domain_error &e)
                {
                    throw ConfigError(path + ": " + e.what());
                }
                return settings;
            }

            PsiPerturbation parse_psi_error(Section &parent)
            {
                PsiPerturbation p;
                if (!parent.has("psi_error"))
                    return p;
                Section s(parent.raw("psi_error"), parent.at("psi_error"));
                p.delay_err_samples = s.number("delay_samples", 0.0, 0.0);
                p.doppler_err_hz = s.number("doppler_hz", 0.0, 0.0);
                p.aod_err = s.number("aod", 0.0, 0.0);
                p.gain_err = s.number("gain", 0.0, 0.0);
                s.finish();
                return p;
            }

            DdWindow parse_window(Section &s)
            {
                DdWindow w;
                w.delay_samples = long(s.integer("window_delay_samples", 0, 0));
                w.doppler_hz = s.number("window_doppler_hz", 0.0, 0.0);
                return w;
            }

            void parse_thresholds(Section &s, FeasibilitySettings &f)
            {
                f.rho_th = s.numbers("rho_th", f.rho_th, 1e-300, 1.0);
                for (std::size_t i = 0; i < f.rho_th.size(); ++i)
                    if (f.rho_th[i] >= 1.0)
                        fail(s.at("rho_th"), "values must lie in (0, 1)");
                f.k_th = s.integers("k_th", f.k_th, 1);
                f.bandwidth_hz = s.numbers("bandwidth_hz", f.bandwidth_hz, 1e-300);
                f.xi = s.numbers("xi", f.xi, 1e-300);
            }

            void parse_papr(Section &s, PaprSettings &p, Modulation mod)
            {
                p.trials = int(s.integer("trials", p.trials, 1));
                p.waveforms = parse_waveforms(s, "waveforms", p.waveforms);
                auto &sc = p.scenario;
                sc.modulation = mod;
                sc.num_subcarriers = power_of_two(s, "num_subcarriers", sc.num_subcarriers);
                sc.delay_bins = power_of_two(s, "delay_bins", sc.delay_bins);
                sc.doppler_bins = power_of_two(s, "doppler_bins", sc.doppler_bins);
                sc.num_paths = int(s.integer("num_paths", sc.num_paths, 1));
                sc.num_tx_antennas = int(s.integer("num_tx_antennas", sc.num_tx_antennas, 1));
                sc.block_len = int(s.integer("block_len", sc.block_len, 1));
                sc.max_delay_samples = int(s.integer("max_delay_samples", sc.max_delay_samples, 0));
                sc.max_doppler_hz = s.number("max_doppler_hz", sc.max_doppler_hz, 0.0);
                sc.sample_rate = s.number("sample_rate_hz", sc.sample_rate, 1e-12);
                sc.oversampling = int(s.integer("oversampling", sc.oversampling, 1, 64));
                for (std::size_t i = 0; i < p.waveforms.size(); ++i)
                    if (p.waveforms[i] == Waveform::DdamOfdm || p.waveforms[i] == Waveform::DdamOtfs)
                        fail(s.at("waveforms") + "[" + std::to_string(i) + "]",
                             "PAPR is available for ofdm, otfs_isfft, otfs_zak and ddam");
            }

            void parse_se(Section &s, SeSettings &se)
            {
                se.num_subcarriers = int(s.integer("num_subcarriers", se.num_subcarriers, 1));
                se.doppler_bins = int(s.integer("doppler_bins", se.doppler_bins, 1));
                se.block_len = int(s.integer("block_len", se.block_len, 1));
                se.n_max = s.integers("n_max", se.n_max, 0);
            }

            void parse_ber(Section &s, BerSettings &b, Modulation mod)
            {
                b.snr_db = s.numbers("snr_db", b.snr_db);
                b.num_symbols = std::uint64_t(s.integer("num_symbols", (long long)b.num_symbols, 1,
                                                        std::numeric_limits<long long>::max()));
                b.waveforms = parse_waveforms(s, "waveforms", b.waveforms);
                auto &o = b.link;
                o.modulation = mod;
                o.criterion = parse_enum(s, "criterion", o.criterion, beam_criterion_from_string);
                o.mode = parse_enum(s, "mode", o.mode, compensation_mode_from_string);
                o.block_len = int(s.integer("block_len", o.block_len, 1));
                o.pilot_gain = s.boolean("pilot_gain", o.pilot_gain);
                o.half_length = int(s.integer("half_length", o.half_length, 1, 1024));
                o.ofdm.num_subcarriers = power_of_two(s, "num_subcarriers", o.ofdm.num_subcarriers);
                o.ofdm.cp_len = int(s.integer("cp_len", o.ofdm.cp_len, 0));
                o.ofdm_symbols_per_frame = int(s.integer("ofdm_symbols_per_frame", o.ofdm_symbols_per_frame, 1));
                o.otfs.delay_bins = power_of_two(s, "delay_bins", o.otfs.delay_bins);
                o.otfs.doppler_bins = power_of_two(s, "doppler_bins", o.otfs.doppler_bins);
                o.window = parse_window(s);
                o.psi_error = parse_psi_error(s);
                if (s.has("otfs_variant"))
                {
                    const auto v = s.text("otfs_variant", "");
                    if (v != "isfft" && v != "zak")
                        fail(s.at("otfs_variant"), "expected \"isfft\" or \"zak\"");
                    o.otfs_variant = v == "zak" ? OtfsVariant::Zak : OtfsVariant::Isfft;
                }
                for (auto w : b.waveforms)
                    if ((w == Waveform::OtfsIsfft || w == Waveform::OtfsZak || w == Waveform::DdamOtfs) &&
                        o.otfs.frame_length() > kMaxDenseDdSize)
                        fail(s.at("delay_bins"), "OTFS BER needs delay_bins * doppler_bins <= " +
                                                     std::to_string(kMaxDenseDdSize));
            }

            void parse_equivalent(Section &s, EquivalentSettings &e)
            {
                e.criterion = parse_enum(s, "criterion", e.criterion, beam_criterion_from_string);
                e.mode = parse_enum(s, "mode", e.mode, compensation_mode_from_string);
                if (s.has("power_allocation"))
                {
                    const auto v = s.text("power_allocation", "");
                    if (v != "gain_proportional" && v != "uniform")
                        fail(s.at("power_allocation"), "expected \"gain_proportional\" or \"uniform\"");
                    e.allocation = v == "uniform" ? PowerAllocation::Uniform : PowerAllocation::GainProportional;
                }
                e.noise_var = s.number("noise_var", e.noise_var, 0.0);
                e.frame.block_len = int(s.integer("block_len", e.frame.block_len, 1));
                e.frame.guard_len = int(s.integer("guard_len", e.frame.guard_len, -1));
                e.frame.doppler_resolution_hz = s.number("doppler_resolution_hz", 0.0, 0.0);
                e.frame.half_length = int(s.integer("half_length", e.frame.half_length, 1, 1024));
                e.window = parse_window(s);
                e.psi_error = parse_psi_error(s);
            }

            void parse_complexity(Section &s, ComplexitySettings &c)
            {
                c.mt = s.integers("mt", c.mt, 1);
                c.k = s.integers("k", c.k, 1);
                c.m = s.integers("m", c.m, 1);
                c.l = s.integers("l", c.l, 1);
                c.ns = s.number("ns", c.ns, 1.0);
                c.measured = s.boolean("measured", c.measured);
                for (const auto *list : {&c.k, &c.m})
                    for (int v : *list)
                        if (!is_power_of_two(v))
                            fail(s.at(list == &c.k ? "k" : "m"), "values must be powers of two");
            }

            std::string position_of(const std::string &text, std::size_t byte)
            {
                std::size_t line = 1, col = 1;
                for (std::size_t i = 0; i < std::min(byte > 0 ? byte - 1 : 0, text.size()); ++i)
                {
                    if (text[i] == '\n')
                    {
                        ++line;
                        col = 1;
                    }
                    else
                        ++col;
                }
                return "line " + std::to_string(line) + ", column " + std::to_string(col);
            }
        }

        ExperimentConfig parse_config(const std::string &text)
        {
            Json doc;
            try
            {
                doc = Json::parse(text);
            }
            catch (const Json::parse_error &e)
            {
                throw ConfigError("JSON syntax error at " + position_of(text, e.byte) + ": " + e.what());
            }

            ExperimentConfig cfg;
            Section root(doc, "");
            if (!root.has("experiment"))
                fail("experiment", "required field is missing");
            cfg.experiment = root.text("experiment", "");
            const auto &names = experiment_names();
            if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
                fail("experiment", "unknown experiment '" + cfg.experiment + "'");
            if (!root.has("seed"))
                fail("seed", "required field is missing");
            const Json &seed = root.raw("seed");
            if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
                fail("seed", "expected a non-negative integer");
            cfg.seed = seed.get<std::uint64_t>();

            cfg.modulation = parse_enum(root, "modulation", cfg.modulation,
                                        [](const std::string &n) { return modulation_from_string(n); });
            if (root.has("waveform"))
            {
                const auto w = parse_waveforms(root, "waveform", {});
                cfg.ber.waveforms = w;
                cfg.papr.waveforms = w;
            }
            if (root.has("channel"))
                cfg.channel = parse_channel(root.raw("channel"), "channel");

            auto section = [&](const char *key, auto &&parse) {
                if (root.has(key))
                {
                    Section s(root.raw(key), key);
                    parse(s);
                    s.finish();
                }
            };
            section("thresholds", [&](Section &s) { parse_thresholds(s, cfg.thresholds); });
            section("papr", [&](Section &s) { parse_papr(s, cfg.papr, cfg.modulation); });
            section("se", [&](Section &s) { parse_se(s, cfg.se); });
            section("ber", [&](Section &s) { parse_ber(s, cfg.ber, cfg.modulation); });
            section("equivalent_channel", [&](Section &s) { parse_equivalent(s, cfg.equivalent); });
            section("complexity", [&](Section &s) { parse_complexity(s, cfg.complexity); });
            root.finish();

            // waveform lists given at the top level must also pass the per-experiment checks
            cfg.papr.scenario.modulation = cfg.modulation;
            cfg.ber.link.modulation = cfg.modulation;
            if (cfg.experiment == "papr_ccdf")
                for (auto w : cfg.papr.waveforms)
                    if (w == Waveform::DdamOfdm || w == Waveform::DdamOtfs)
                        fail("waveform", "PAPR is available for ofdm, otfs_isfft, otfs_zak and ddam");
            if ((cfg.experiment == "ber_vs_snr" || cfg.experiment == "equivalent_channel_report") && !cfg.channel)
                fail("channel", "required for " + cfg.experiment);

            cfg.echo = doc;
            return cfg;
        }
    }

    void validate_config(const std::string &text) { detail::parse_config(text); }

} // namespace wavelab
