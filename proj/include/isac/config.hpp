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

#ifndef ISAC_CONFIG_HPP
#define ISAC_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "isac/beamform.hpp"
#include "isac/phy.hpp"
#include "isac/sensing.hpp"
#include "isac/tracker.hpp"
#include "isac/types.hpp"
#include "isac/world.hpp"

namespace isac
{
    /// Scenario object given by its initial polar angle, speed and acceleration.
    struct ObjectSpec
    {
        double theta0_deg = 75.0;
        double v0 = 30.0;
        double a = -5.0;
        std::int64_t enter_slot = 0;
    };

    /// Every tunable of a simulation run. Defaults reproduce the reference setup,
    /// so an empty configuration file is a valid configuration.
    struct SimConfig
    {
        // array and physics
        int n_tx = 30;
        int n_rx = 30;
        double spacing_wavelengths = 0.5;
        double carrier_hz = 30e9;
        double kappa = 80e6;
        double iota = 1e-5;
        double mf_gain = 10.0;
        double alpha0 = 1.0;
        double sigma_c2 = 1.0;
        double sigma2 = 1.0;
        double sigma1_deg = 0.02;
        double sigma2_m = 0.2;
        double sigma3_mps = 0.5;
        double dt = 0.01;
        double epsilon_re = 120.0;
        double epsilon_im = 120.0;
        double p_total = 1000.0;

        // beamforming
        double gamma = 0.5;
        double coverage_slack = 0.05;
        double coverage_multiplier = 3.0;
        double resolution_deg = 0.1;
        double sca_rel_tol = 1e-4;
        int sca_max_iter = 15;
        double irm_w0 = 1.0;
        double irm_rho = 2.0;
        int irm_max_iter = 20;
        double irm_threshold = 1e-6;

        // tracking and frames
        int frame_length = 10;
        int slots = 10;
        double angle_var_ceiling_deg = 1.0;
        double mse0_inflation = 10.0;
        double measurement_noise_scale = 1.0;

        // scenario
        std::string scenario = "default";
        double altitude = 100.0;
        double uav_speed = 15.0;
        double uav_heading_deg = 0.0;
        double uav_x = 0.0;
        std::vector<ObjectSpec> objects;  // overrides the preset when non-empty

        std::uint64_t seed = 1;

        /// Throws ConfigError naming the first violated invariant.
        void validate() const;

        phy::ArrayGeometry geometry() const;
        sensing::CrbParams crb() const;
        tracker::NoiseModel process_noise() const;
        cdouble rcs() const { return {epsilon_re, epsilon_im}; }
        beamform::ScaOptions sca_options() const;
        beamform::IrmOptions irm_options() const;

        /// Objects of the preset (or the explicit list).
        std::vector<ObjectSpec> resolved_objects() const;
        world::WorldState initial_world() const;
    };

    /// Objects of a named preset: "default" (two objects), "single", "waterfilling".
    std::vector<ObjectSpec> scenario_preset(const std::string& name);

    /// Applies one `key = value` setting. Throws ConfigError for unknown keys or
    /// malformed values.
    void apply_setting(SimConfig& cfg, const std::string& key, const std::string& value);

    /// Parses the flat configuration format; `source` names the input in messages.
    SimConfig parse_config(const std::string& text, const std::string& source = "<config>");

    SimConfig load_config(const std::string& path);

    /// All known keys, in documentation order.
    const std::vector<std::string>& config_keys();
}

#endif
