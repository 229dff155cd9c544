// SPDX-License-Identifier: Apache-2.0
//
// isac-uav: sensing-assisted beamforming and tracking for UAV-mounted ISAC
// Copyright (C) 2026 The isac-uav authors
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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isac/config.hpp"
#include "isac/experiments.hpp"
#include "isac/sim.hpp"

namespace fs = std::filesystem;
using namespace isac;

namespace
{
    struct Common
    {
        std::string config;
        std::uint64_t seed = 0;
        bool seed_set = false;
        std::vector<std::string> settings;
        std::string out = ".";
    };

    void add_common(CLI::App* app, Common& c)
    {
        app->add_option("--config", c.config, "configuration file (key = value per line)");
        app->add_option_function<std::uint64_t>(
            "--seed",
            [&c](const std::uint64_t& s) {
                c.seed = s;
                c.seed_set = true;
            },
            "64-bit base seed");
        app->add_option("--set", c.settings, "override a configuration key, e.g. --set N_t=16");
        app->add_option("--out", c.out, "output directory");
    }

    SimConfig resolve(const Common& c)
    {
        SimConfig cfg = c.config.empty() ? SimConfig{} : load_config(c.config);
        for (const auto& kv : c.settings)
        {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value, got '" + kv + "'");
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t");
                const auto e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
            };
            try
            {
                apply_setting(cfg, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
            }
            catch (const ConfigError& e)
            {
                throw ConfigError(std::string("--set: ") + e.what());
            }
        }
        if (c.seed_set)
            cfg.seed = c.seed;
        cfg.validate();
        return cfg;
    }

    std::ofstream open_out(const Common& c, const std::string& name)
    {
        fs::create_directories(c.out);
        const fs::path p = fs::path(c.out) / name;
        std::ofstream f(p, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + p.string());
        return f;
    }

    std::vector<sim::Scheme> parse_schemes(const std::string& list)
    {
        std::vector<sim::Scheme> out;
        for (const auto& s : experiments::split_list(list))
            out.push_back(sim::scheme_from_string(s));
        if (out.empty())
            throw ConfigError("--schemes is empty");
        return out;
    }

    template <typename T>
    std::vector<T> parse_numbers(const std::string& list, const char* what)
    {
        std::vector<T> out;
        for (const auto& s : experiments::split_list(list))
        {
            try
            {
                std::size_t pos = 0;
                T v{};
                if constexpr (std::is_floating_point_v<T>)
                    v = std::stod(s, &pos);
                else
                    v = static_cast<T>(std::stoll(s, &pos));
                if (pos != s.size())
                    throw std::invalid_argument(s);
                out.push_back(v);
            }
            catch (const std::logic_error&)
            {
                throw ConfigError(std::string(what) + ": '" + s + "' is not a number");
            }
        }
        if (out.empty())
            throw ConfigError(std::string(what) + " is empty");
        return out;
    }

    int report_failures(int failed)
    {
        if (failed > 0)
        {
            std::cerr << "isac_sim: " << failed << " slot(s) ended in a hard solver failure\n";
            return 1;
        }
        return 0;
    }
}

int main(int argc, char** argv)
{
    CLI::App app{"UAV ISAC simulator: sensing-assisted beamforming and EKF tracking"};
    app.require_subcommand(1);

    Common sim_c, cmp_c, swp_c, apx_c, bp_c, crb_c;
    int sim_slots = 0;
    int cmp_slots = 0;
    int cmp_runs = 10;
    std::string cmp_schemes = "proposed,pilot,waterfilling";
    int swp_slots = 0;
    int swp_runs = 5;
    std::string swp_param;
    std::string swp_values;
    std::string swp_schemes = "proposed,waterfilling";
    std::string bp_slots = "1,2,5";

    auto* simulate = app.add_subcommand("simulate", "one run of the proposed scheme -> slots.csv");
    add_common(simulate, sim_c);
    simulate->add_option("--slots", sim_slots, "number of slots (default: config 'slots')");

    auto* compare = app.add_subcommand("compare", "Monte-Carlo comparison of schemes -> comparison.csv");
    add_common(compare, cmp_c);
    compare->add_option("--schemes", cmp_schemes, "comma list of proposed, pilot, waterfilling");
    compare->add_option("--runs", cmp_runs, "number of seeds (seed, seed+1, ...)")->check(CLI::PositiveNumber);
    compare->add_option("--slots", cmp_slots, "slots per run (default: config 'slots')");

    auto* sweep = app.add_subcommand("sweep", "parameter sweep -> sweep.csv");
    add_common(sweep, swp_c);
    sweep->add_option("--param", swp_param, "h, resolution or N_t")->required();
    sweep->add_option("--values", swp_values, "comma list of values")->required();
    sweep->add_option("--schemes", swp_schemes, "comma list of schemes");
    sweep->add_option("--runs", swp_runs, "number of seeds")->check(CLI::PositiveNumber);
    sweep->add_option("--slots", swp_slots, "slots per run (default: config 'slots')");

    auto* approx = app.add_subcommand("validate-approx", "exact kinematics vs. first-order evolution -> approx.csv");
    add_common(approx, apx_c);

    auto* pattern = app.add_subcommand("beampattern", "transmit beampatterns -> beampattern.csv");
    add_common(pattern, bp_c);
    pattern->add_option("--slots", bp_slots, "comma list of 1-based global slots");

    auto* crb = app.add_subcommand("crb-table", "measurement noise lattice -> crb.csv");
    add_common(crb, crb_c);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (simulate->parsed())
        {
            const SimConfig cfg = resolve(sim_c);
            const int slots = sim_slots > 0 ? sim_slots : cfg.slots;
            const auto recs = sim::run_proposed(cfg, cfg.seed, slots);
            auto f = open_out(sim_c, "slots.csv");
            experiments::write_slots_csv(f, recs);
            int failed = 0;
            for (const auto& r : recs)
                failed += r.failed ? 1 : 0;
            return report_failures(failed);
        }
        if (compare->parsed())
        {
            const SimConfig cfg = resolve(cmp_c);
            const auto schemes = parse_schemes(cmp_schemes);
            const int slots = cmp_slots > 0 ? cmp_slots : cfg.slots;
            const auto mc = sim::run_monte_carlo(cfg, experiments::seed_list(cfg.seed, cmp_runs), schemes, slots);
            auto f = open_out(cmp_c, "comparison.csv");
            experiments::write_comparison_csv(f, mc, cfg.frame_length);
            return report_failures(mc.failed_slots);
        }
        if (sweep->parsed())
        {
            const SimConfig cfg = resolve(swp_c);
            const auto schemes = parse_schemes(swp_schemes);
            const auto values = parse_numbers<double>(swp_values, "--values");
            SimConfig probe = cfg;
            experiments::apply_sweep_value(probe, swp_param, values.front());
            const int slots = swp_slots > 0 ? swp_slots : cfg.slots;
            const auto rows = experiments::run_sweep(cfg, swp_param, values, schemes,
                                                     experiments::seed_list(cfg.seed, swp_runs), slots);
            auto f = open_out(swp_c, "sweep.csv");
            experiments::write_sweep_csv(f, rows);
            int failed = 0;
            for (const auto& r : rows)
                failed += r.failed_slots;
            return report_failures(failed);
        }
        if (approx->parsed())
        {
            resolve(apx_c);
            auto f = open_out(apx_c, "approx.csv");
            experiments::write_approx_csv(f, experiments::validate_approx());
            return 0;
        }
        if (pattern->parsed())
        {
            const SimConfig cfg = resolve(bp_c);
            const auto slots = parse_numbers<std::int64_t>(bp_slots, "--slots");
            const auto rows = experiments::beampattern_rows(cfg, cfg.seed, slots);
            auto f = open_out(bp_c, "beampattern.csv");
            experiments::write_beampattern_csv(f, rows);
            return 0;
        }
        if (crb->parsed())
        {
            const SimConfig cfg = resolve(crb_c);
            auto f = open_out(crb_c, "crb.csv");
            experiments::write_crb_csv(f, experiments::crb_table(cfg));
            return 0;
        }
    }
    catch (const ConfigError& e)
    {
        std::cerr << "isac_sim: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "isac_sim: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
