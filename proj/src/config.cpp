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

#include "isac/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace isac
{
    namespace
    {
        std::string trim(const std::string& s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        double to_double(const std::string& key, const std::string& v)
        {
            double out = 0.0;
            const auto* first = v.data();
            const auto* last = v.data() + v.size();
            const auto [ptr, ec] = std::from_chars(first, last, out);
            if (ec != std::errc() || ptr != last)
                throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
            return out;
        }

        template <typename Int>
        Int to_int(const std::string& key, const std::string& v)
        {
            Int out = 0;
            const auto* first = v.data();
            const auto* last = v.data() + v.size();
            const auto [ptr, ec] = std::from_chars(first, last, out);
            if (ec != std::errc() || ptr != last)
                throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
            return out;
        }

        ObjectSpec to_object(const std::string& v)
        {
            std::vector<std::string> parts;
            std::stringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ','))
                parts.push_back(trim(item));
            if (parts.size() < 3 || parts.size() > 4)
                throw ConfigError("'object' expects 'theta0_deg, v0, a[, enter_slot]', got '" + v + "'");
            ObjectSpec o;
            o.theta0_deg = to_double("object", parts[0]);
            o.v0 = to_double("object", parts[1]);
            o.a = to_double("object", parts[2]);
            if (parts.size() == 4)
                o.enter_slot = to_int<std::int64_t>("object", parts[3]);
            return o;
        }

        using Setter = std::function<void(SimConfig&, const std::string&, const std::string&)>;

        template <typename T>
        Setter number(T SimConfig::*field)
        {
            return [field](SimConfig& c, const std::string& k, const std::string& v) {
                if constexpr (std::is_floating_point_v<T>)
                    c.*field = to_double(k, v);
                else
                    c.*field = to_int<T>(k, v);
            };
        }

        const std::vector<std::pair<std::string, Setter>>& setters()
        {
            static const std::vector<std::pair<std::string, Setter>> table = {
                {"N_t", number(&SimConfig::n_tx)},
                {"N_r", number(&SimConfig::n_rx)},
                {"spacing_wavelengths", number(&SimConfig::spacing_wavelengths)},
                {"f_c", number(&SimConfig::carrier_hz)},
                {"kappa", number(&SimConfig::kappa)},
                {"iota", number(&SimConfig::iota)},
                {"G_m", number(&SimConfig::mf_gain)},
                {"alpha0", number(&SimConfig::alpha0)},
                {"sigmaC2", number(&SimConfig::sigma_c2)},
                {"sigma2", number(&SimConfig::sigma2)},
                {"sigma1_deg", number(&SimConfig::sigma1_deg)},
                {"sigma2_m", number(&SimConfig::sigma2_m)},
                {"sigma3_mps", number(&SimConfig::sigma3_mps)},
                {"dT", number(&SimConfig::dt)},
                {"epsilon_re", number(&SimConfig::epsilon_re)},
                {"epsilon_im", number(&SimConfig::epsilon_im)},
                {"P_T", number(&SimConfig::p_total)},
                {"Gamma", number(&SimConfig::gamma)},
                {"B", number(&SimConfig::coverage_slack)},
                {"l", number(&SimConfig::coverage_multiplier)},
                {"resolution_deg", number(&SimConfig::resolution_deg)},
                {"sca_rel_tol", number(&SimConfig::sca_rel_tol)},
                {"sca_max_iter", number(&SimConfig::sca_max_iter)},
                {"irm_w0", number(&SimConfig::irm_w0)},
                {"irm_rho", number(&SimConfig::irm_rho)},
                {"irm_max_iter", number(&SimConfig::irm_max_iter)},
                {"irm_threshold", number(&SimConfig::irm_threshold)},
                {"frame_length", number(&SimConfig::frame_length)},
                {"slots", number(&SimConfig::slots)},
                {"angle_var_ceiling_deg", number(&SimConfig::angle_var_ceiling_deg)},
                {"mse0_inflation", number(&SimConfig::mse0_inflation)},
                {"measurement_noise_scale", number(&SimConfig::measurement_noise_scale)},
                {"scenario",
                 [](SimConfig& c, const std::string&, const std::string& v) {
                     scenario_preset(v);  // validates the name
                     c.scenario = v;
                 }},
                {"h", number(&SimConfig::altitude)},
                {"v_u", number(&SimConfig::uav_speed)},
                {"theta_u_deg", number(&SimConfig::uav_heading_deg)},
                {"x_u", number(&SimConfig::uav_x)},
                {"object", [](SimConfig& c, const std::string&, const std::string& v) { c.objects.push_back(to_object(v)); }},
                {"seed", number(&SimConfig::seed)},
            };
            return table;
        }

        void require(bool ok, const std::string& what)
        {
            if (!ok)
                throw ConfigError("invalid configuration: " + what);
        }
    }

    const std::vector<std::string>& config_keys()
    {
        static const std::vector<std::string> keys = [] {
            std::vector<std::string> k;
            for (const auto& [name, _] : setters())
                k.push_back(name);
            return k;
        }();
        return keys;
    }

    void apply_setting(SimConfig& cfg, const std::string& key, const std::string& value)
    {
        for (const auto& [name, set] : setters())
            if (name == key)
            {
                set(cfg, key, value);
                return;
            }
        throw ConfigError("unknown configuration key '" + key + "'");
    }

    SimConfig parse_config(const std::string& text, const std::string& source)
    {
        SimConfig cfg;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        int last_line = 0;
        try
        {
            while (std::getline(in, line))
            {
                ++lineno;
                last_line = lineno;
                const auto hash = line.find('#');
                if (hash != std::string::npos)
                    line.erase(hash);
                line = trim(line);
                if (line.empty())
                    continue;
                const auto eq = line.find('=');
                if (eq == std::string::npos)
                    throw ConfigError("expected 'key = value', got '" + line + "'");
                const std::string key = trim(line.substr(0, eq));
                const std::string value = trim(line.substr(eq + 1));
                if (key.empty() || value.empty())
                    throw ConfigError("expected 'key = value', got '" + line + "'");
                apply_setting(cfg, key, value);
                cfg.validate();
            }
            last_line = 0;
            cfg.validate();
        }
        catch (const ConfigError& e)
        {
            const std::string where = last_line > 0 ? source + ":" + std::to_string(last_line) : source;
            throw ConfigError(where + ": " + e.what());
        }
        return cfg;
    }

    SimConfig load_config(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError(path + ": cannot open configuration file");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_config(buf.str(), path);
    }

    void SimConfig::validate() const
    {
        require(n_tx >= 2, "N_t must be at least 2");
        require(n_rx >= 1, "N_r must be at least 1");
        require(spacing_wavelengths > 0.0, "spacing_wavelengths must be positive");
        require(carrier_hz > 0.0, "f_c must be positive");
        require(kappa > 0.0 && iota > 0.0, "kappa and iota must be positive");
        require(mf_gain > 0.0, "G_m must be positive");
        require(alpha0 > 0.0, "alpha0 must be positive");
        require(sigma_c2 > 0.0 && sigma2 > 0.0, "noise powers must be positive");
        require(sigma1_deg >= 0.0 && sigma2_m >= 0.0 && sigma3_mps >= 0.0, "process noise std must be non-negative");
        require(dt > 0.0, "dT must be positive");
        require(std::hypot(epsilon_re, epsilon_im) > 0.0, "epsilon must be non-zero");
        require(p_total > 0.0, "P_T must be positive");
        require(gamma >= 0.0, "Gamma must be non-negative");
        require(coverage_slack > 0.0, "B must be positive");
        require(coverage_multiplier >= 0.0, "l must be non-negative");
        require(resolution_deg > 0.0, "resolution_deg must be positive");
        require(sca_rel_tol > 0.0 && sca_max_iter >= 1, "SCA tolerance and iteration cap must be positive");
        require(irm_w0 > 0.0 && irm_rho >= 1.0 && irm_max_iter >= 1 && irm_threshold > 0.0,
                "IRM weights must be positive, rho >= 1 and the iteration cap >= 1");
        require(frame_length >= 2, "frame_length must be at least 2");
        require(slots >= 1, "slots must be at least 1");
        require(angle_var_ceiling_deg > 0.0, "angle_var_ceiling_deg must be positive");
        require(mse0_inflation > 0.0, "mse0_inflation must be positive");
        require(measurement_noise_scale >= 0.0, "measurement_noise_scale must be non-negative");
        require(altitude > 0.0, "h must be positive");
        require(uav_speed >= 0.0, "v_u must be non-negative");
        for (const auto& o : objects)
        {
            require(o.theta0_deg > 0.0 && o.theta0_deg < 180.0, "object angles must lie in (0, 180) degrees");
            require(o.enter_slot >= 0, "object enter_slot must be non-negative");
        }
    }

    phy::ArrayGeometry SimConfig::geometry() const
    {
        return phy::ArrayGeometry::from_carrier(n_tx, n_rx, carrier_hz, spacing_wavelengths);
    }

    sensing::CrbParams SimConfig::crb() const
    {
        sensing::CrbParams p;
        p.eff_bandwidth = kappa;
        p.eff_pulse = iota;
        p.n_tx = n_tx;
        p.n_rx = n_rx;
        p.wavelength = kSpeedOfLight / carrier_hz;
        p.angle_var_ceiling = deg2rad(angle_var_ceiling_deg) * deg2rad(angle_var_ceiling_deg);
        return p;
    }

    tracker::NoiseModel SimConfig::process_noise() const
    {
        return tracker::NoiseModel::from_stddev(deg2rad(sigma1_deg), sigma2_m, sigma3_mps);
    }

    beamform::ScaOptions SimConfig::sca_options() const
    {
        beamform::ScaOptions o;
        o.rel_tol = sca_rel_tol;
        o.max_iter = sca_max_iter;
        return o;
    }

    beamform::IrmOptions SimConfig::irm_options() const
    {
        beamform::IrmOptions o;
        o.w0 = irm_w0;
        o.rho = irm_rho;
        o.max_iter = irm_max_iter;
        o.threshold = irm_threshold;
        return o;
    }

    std::vector<ObjectSpec> scenario_preset(const std::string& name)
    {
        if (name == "default")
            return {{75.0, 30.0, -5.0, 0}, {135.0, -3.0, 1.0, 0}};
        if (name == "single")
            return {{60.0, 30.0, -5.0, 0}};
        if (name == "waterfilling")
            return {{45.0, 30.0, -5.0, 0}};
        throw ConfigError("unknown scenario '" + name + "' (expected default, single or waterfilling)");
    }

    std::vector<ObjectSpec> SimConfig::resolved_objects() const
    {
        return objects.empty() ? scenario_preset(scenario) : objects;
    }

    world::WorldState SimConfig::initial_world() const
    {
        world::WorldState w;
        w.dt = dt;
        w.uav.altitude = altitude;
        w.uav.x = uav_x;
        w.uav.speed = uav_speed;
        w.uav.heading = deg2rad(uav_heading_deg);
        for (const auto& o : resolved_objects())
        {
            world::ObjectTruth t = world::scenario_from_caption(deg2rad(o.theta0_deg), o.v0, o.a, w.uav);
            t.enter_slot = o.enter_slot;
            w.objects.push_back(t);
        }
        return w;
    }
}
