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

#ifndef ISAC_EXPERIMENTS_HPP
#define ISAC_EXPERIMENTS_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "isac/config.hpp"
#include "isac/sim.hpp"

namespace isac::experiments
{
    /// Fixed 17-significant-digit formatting used by every CSV writer.
    std::string fmt(double v);

    /// Consecutive seeds base, base + 1, ...
    std::vector<std::uint64_t> seed_list(std::uint64_t base, int runs);

    std::vector<std::string> split_list(const std::string& csv);

    /// One row per (record, object) with the fixed slots.csv column order.
    void write_slots_csv(std::ostream& out, const std::vector<sim::SlotRecord>& records);

    /// Per-slot mean/std of the sum rate and tracking RMSE for every scheme.
    void write_comparison_csv(std::ostream& out, const sim::McSummary& summary, int frame_length);

    struct SweepRow
    {
        std::string param;
        double value = 0.0;
        sim::Scheme scheme = sim::Scheme::Proposed;
        double mean_rate = 0.0;         // mean sum rate over every slot and run
        double mean_directional_rate = 0.0;
        double rmse_d = 0.0;
        double rmse_theta = 0.0;
        int failed_slots = 0;
    };

    /// Accepts "h", "resolution" and "N_t".
    void apply_sweep_value(SimConfig& cfg, const std::string& param, double value);

    std::vector<SweepRow> run_sweep(const SimConfig& cfg, const std::string& param, const std::vector<double>& values,
                                    const std::vector<sim::Scheme>& schemes, const std::vector<std::uint64_t>& seeds,
                                    int slots);
    void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

    struct ApproxSetup
    {
        double dt = 0.05;
        double uav_speed = 15.0;
        double altitude = 60.0;
        double uav_heading_deg = 180.0;
        double v = 30.0;
        double theta0_deg = 45.0;
        int slots = 40;
    };

    struct ApproxRow
    {
        int slot = 0;
        double time = 0.0;
        double exact_d = 0.0;
        double exact_theta = 0.0;
        double approx_d = 0.0;
        double approx_theta = 0.0;
    };

    /// Exact kinematics against the chained first-order evolution model,
    /// both started from the same state. Row 0 is the common start.
    std::vector<ApproxRow> validate_approx(const ApproxSetup& setup = {});
    void write_approx_csv(std::ostream& out, const std::vector<ApproxRow>& rows);

    struct PatternRow
    {
        std::int64_t slot = 0;   // 1-based global slot
        std::string object;      // object index, or "all" for the summed pattern
        double theta_deg = 0.0;
        double gain = 0.0;
    };

    /// Transmit beampatterns of the proposed scheme at the requested 1-based
    /// global slots on a 0.1 degree grid over (0, 180).
    std::vector<PatternRow> beampattern_rows(const SimConfig& cfg, std::uint64_t seed,
                                             const std::vector<std::int64_t>& slots);
    void write_beampattern_csv(std::ostream& out, const std::vector<PatternRow>& rows);

    struct CrbRow
    {
        double d = 0.0;
        double theta_deg = 0.0;
        double snr_db = 0.0;
        sensing::NoiseVariances var;
    };

    std::vector<CrbRow> crb_table(const SimConfig& cfg);
    void write_crb_csv(std::ostream& out, const std::vector<CrbRow>& rows);
}

#endif
