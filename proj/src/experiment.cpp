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
#include "wavelab/combos.hpp"
#include "wavelab/io.hpp"
#include "wavelab/parallel.hpp"
#include "detail/config_model.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wavelab
{
    std::uint64_t fnv1a64(std::string_view bytes)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : bytes)
        {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    namespace
    {
        using detail::ExperimentConfig;

        /// Collects one CSV table and writes it with '\n' line endings.
        class Csv
        {
        public:
            explicit Csv(std::initializer_list<const char *> header)
            {
                bool first = true;
                for (const char *h : header)
                {
                    text_ << (first ? "" : ",") << h;
                    first = false;
                }
                text_ << '\n';
            }

            template <typename... T> void row(const T &...values)
            {
                bool first = true;
                ((text_ << (first ? "" : ",") << cell(values), first = false), ...);
                text_ << '\n';
            }

            std::string str() const { return text_.str(); }

        private:
            static std::string cell(double v) { return format_double(v); }
            static std::string cell(int v) { return std::to_string(v); }
            static std::string cell(long v) { return std::to_string(v); }
            static std::string cell(std::uint64_t v) { return std::to_string(v); }
            static std::string cell(const std::string &v) { return v; }
            static std::string cell(const char *v) { return v; }

            std::ostringstream text_;
        };

        class OutputDir
        {
        public:
            explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir))
            {
                std::error_code ec;
                std::filesystem::create_directories(dir_, ec);
                if (ec || !std::filesystem::is_directory(dir_))
                    throw std::runtime_error("cannot create output directory '" + dir_.string() + "'");
            }

            void write(const std::string &name, const std::string &content)
            {
                const auto path = dir_ / name;
                std::ofstream out(path, std::ios::binary | std::ios::trunc);
                if (!out)
                    throw std::runtime_error("cannot write '" + path.string() + "'");
                out << content;
                out.close();
                if (!out)
                    throw std::runtime_error("failed writing '" + path.string() + "'");
                names.push_back(name);
            }

            std::vector<std::string> names;

        private:
            std::filesystem::path dir_;
        };

        void feasibility_region_run(const ExperimentConfig &cfg, OutputDir &out)
        {
            Csv csv{"rho_th", "k_th", "bandwidth_hz", "xi", "tau_max_s", "nu_max_hz"};
            for (double rho : cfg.thresholds.rho_th)
                for (int k : cfg.thresholds.k_th)
                    for (double b : cfg.thresholds.bandwidth_hz)
                        for (double xi : cfg.thresholds.xi)
                        {
                            const auto r = feasible_region(FeasibilityThresholds{rho, k, b, xi});
                            csv.row(rho, k, b, xi, r.tau_max_s, r.nu_max_hz);
                        }
            out.write("feasibility_region.csv", csv.str());
        }

        void papr_ccdf_run(const ExperimentConfig &cfg, OutputDir &out)
        {
            Csv curve{"waveform", "threshold_db", "prob"};
            Csv levels{"waveform", "prob", "papr_db"};
            for (std::size_t i = 0; i < cfg.papr.waveforms.size(); ++i)
            {
                PaprScenario sc = cfg.papr.scenario;
                sc.waveform = cfg.papr.waveforms[i];
                const auto ccdf = papr_ccdf(make_papr_generator(sc), cfg.papr.trials, trial_seed(cfg.seed, i));
                const std::string name = to_string(sc.waveform);
                for (std::size_t t = 0; t < ccdf.thresholds_db.size(); ++t)
                    curve.row(name, ccdf.thresholds_db[t], ccdf.exceed_probability[t]);
                for (double p : {1e-1, 1e-2, 1e-3})
                    levels.row(name, p, ccdf.papr_at(p));
            }
            out.write("papr_ccdf.csv", curve.str());
            out.write("papr_levels.csv", levels.str());
        }

        void se_sweep_run(const ExperimentConfig &cfg, OutputDir &out)
        {
            Csv csv{"n_max", "waveform", "value"};
            for (int n : cfg.se.n_max)
            {
                OverheadParams p{cfg.se.num_subcarriers, cfg.se.doppler_bins, n, cfg.se.block_len, n};
                for (auto w : {Waveform::Ofdm, Waveform::OtfsZak, Waveform::Ddam})
                    csv.row(n, w == Waveform::OtfsZak ? std::string("otfs") : to_string(w), se_overhead(w, p));
            }
            out.write("se_sweep.csv", csv.str());
        }

        void ber_vs_snr_run(const ExperimentConfig &cfg, OutputDir &out)
        {
            const auto channel = cfg.channel->realize(cfg.seed);
            out.write("channel.json", channel_to_json(channel));
            Csv csv{"waveform", "snr_db", "ber", "bit_errors", "bits"};
            for (std::size_t i = 0; i < cfg.ber.waveforms.size(); ++i)
                for (std::size_t j = 0; j < cfg.ber.snr_db.size(); ++j)
                {
                    const auto w = cfg.ber.waveforms[i];
                    const auto c = simulate_ber(w, channel, cfg.ber.snr_db[j], cfg.ber.num_symbols,
                                                trial_seed(cfg.seed, 1000 * i + j), cfg.ber.link);
                    csv.row(to_string(w), cfg.ber.snr_db[j], c.rate(), c.bit_errors, c.bits);
                }
            out.write("ber_vs_snr.csv", csv.str());
        }

        void equivalent_channel_run(const ExperimentConfig &cfg, OutputDir &out)
        {
            const auto &e = cfg.equivalent;
            const auto channel = cfg.channel->realize(cfg.seed);
            const auto psi = psi_from_channel(channel, e.psi_error, trial_seed(cfg.seed, 1));
            const auto beams = path_beamformers(psi, e.criterion, e.noise_var, e.allocation);
            const auto plan = delay_doppler_window(build_compensation_plan(psi, beams, e.frame, e.mode), e.window);
            ApplyOptions opts;
            opts.half_length = e.frame.half_length;
            const auto eq = equivalent_channel(channel, plan, beams, e.frame, opts);

            std::ostringstream taps;
            write_equivalent_taps_csv(taps, eq);
            Csv summary{"metric", "value"};
            summary.row("n_max", double(plan.n_max));
            summary.row("terms", double(plan.terms.size()));
            summary.row("dominant_lag", double(eq.dominant_lag));
            summary.row("dominant_gain_re", eq.dominant_gain.real());
            summary.row("dominant_gain_im", eq.dominant_gain.imag());
            summary.row("residual_isi_power", eq.residual_isi_power);
            summary.row("delay_spread_samples", double(eq.delay_spread_samples));
            summary.row("residual_doppler_hz", eq.residual_doppler_hz);

            out.write("equivalent_taps.csv", taps.str());
            out.write("equivalent_channel.csv", summary.str());
            out.write("channel.json", channel_to_json(channel));
            out.write("psi.json", psi_to_json(psi));
        }

        void complexity_table_run(const ExperimentConfig &cfg, OutputDir &out)
        {
            const auto &c = cfg.complexity;
            Csv csv{"variant", "mt", "k", "m", "l", "ns", "tx_model", "rx_model", "tx_measured", "rx_measured"};
            for (int mt : c.mt)
                for (int k : c.k)
                    for (int m : c.m)
                        for (int l : c.l)
                            for (auto v : all_complexity_variants())
                            {
                                const ComplexityParams p{mt, k, m, l, c.ns};
                                const auto model = complexity_model(v, p);
                                if (!c.measured)
                                {
                                    csv.row(to_string(v), mt, k, m, l, c.ns, model.tx, model.rx, "", "");
                                    continue;
                                }
                                const auto meas = measured_complexity(v, p, cfg.seed);
                                csv.row(to_string(v), mt, k, m, l, c.ns, model.tx, model.rx, meas.tx, meas.rx);
                            }
            out.write("complexity_table.csv", csv.str());
        }

        std::string hex64(std::uint64_t v)
        {
            char buf[17];
            std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
            return buf;
        }
    }

    RunSummary run_experiment(const std::string &config_text, const std::filesystem::path &out_dir,
                              std::optional<std::uint64_t> seed_override)
    {
        const auto start = std::chrono::steady_clock::now();
        ExperimentConfig cfg = detail::parse_config(config_text);
        if (seed_override)
        {
            cfg.seed = *seed_override;
            cfg.echo["seed"] = *seed_override;
        }
        // key-sorted compact dump, independent of the file's formatting
        const std::string canonical = nlohmann::json(cfg.echo).dump();

        RunSummary summary;
        summary.experiment = cfg.experiment;
        summary.seed = cfg.seed;
        summary.config_hash = hex64(fnv1a64(canonical));

        OutputDir out(out_dir);
        if (cfg.experiment == "feasibility_region")
            feasibility_region_run(cfg, out);
        else if (cfg.experiment == "papr_ccdf")
            papr_ccdf_run(cfg, out);
        else if (cfg.experiment == "se_sweep")
            se_sweep_run(cfg, out);
        else if (cfg.experiment == "ber_vs_snr")
            ber_vs_snr_run(cfg, out);
        else if (cfg.experiment == "equivalent_channel_report")
            equivalent_channel_run(cfg, out);
        else
            complexity_table_run(cfg, out);
        summary.outputs = out.names;

        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        detail::Json manifest;
        manifest["experiment"] = cfg.experiment;
        manifest["seed"] = cfg.seed;
        manifest["config_hash"] = summary.config_hash;
        manifest["config"] = cfg.echo;
        manifest["library_version"] = kLibraryVersion;
        manifest["wall_time_s"] = wall;
        manifest["outputs"] = summary.outputs;
        out.write("manifest.json", manifest.dump(2) + "\n");
        return summary;
    }

} // namespace wavelab
