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

#ifndef ISAC_SIM_HPP
#define ISAC_SIM_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "isac/beamform.hpp"
#include "isac/config.hpp"
#include "isac/sensing.hpp"
#include "isac/tracker.hpp"
#include "isac/world.hpp"

namespace isac::sim
{
    enum class Scheme
    {
        Proposed,
        Pilot,
        WaterFilling
    };

    const char* to_string(Scheme s);
    /// Accepts "proposed", "pilot", "waterfilling". Throws ConfigError otherwise.
    Scheme scheme_from_string(const std::string& name);

    struct FrameSchedule
    {
        int slots_per_frame = 10;
        int frames = 1;

        /// Slot 1 of every frame is omnidirectional.
        bool is_omni(std::int64_t global_slot) const { return global_slot % slots_per_frame == 0; }
        int frame_of(std::int64_t global_slot) const { return static_cast<int>(global_slot / slots_per_frame) + 1; }
        int slot_in_frame(std::int64_t global_slot) const
        {
            return static_cast<int>(global_slot % slots_per_frame) + 1;
        }
    };

    struct ObjectRecord
    {
        std::size_t object = 0;
        world::PolarState truth;
        world::PolarState estimate;
        bool has_estimate = false;
        Vec3 measurement = Vec3::Constant(std::nan(""));
        bool has_measurement = false;
        double rate = 0.0;
        double radar_snr = 0.0;
        Mat3 mse = Mat3::Zero();
        bool mse_psd = true;
    };

    struct SlotRecord
    {
        std::uint64_t run = 0;
        Scheme scheme = Scheme::Proposed;
        int frame = 1;
        int slot = 1;              // 1-based within the frame
        std::int64_t global_slot = 0;
        bool omni = false;
        std::vector<ObjectRecord> objects;
        int sca_iters = 0;
        int irm_iters = 0;
        double r_final = 0.0;
        std::string status = "ok";
        std::vector<std::string> notes;
        bool failed = false;
        // instrumentation: beams designed from predictions, rates from true channels
        bool designed_on_prediction = true;
        bool evaluated_on_truth = true;

        double sum_rate() const;
    };

    struct Track
    {
        tracker::TrackState state;
        std::int64_t time = 0;  // slot the estimate refers to
        double last_angle_var = 0.0;
    };

    /// Complete state of one run of the proposed or water-filling scheme.
    struct RunState
    {
        world::WorldState world;
        std::vector<std::optional<Track>> tracks;
        std::vector<world::UavState> uav_history;  // uav_history[n] = UAV at slot n
        beamform::BeamSolution last_beams;
        std::vector<std::size_t> last_beam_objects;
        std::uint64_t run = 0;
        std::uint64_t seed = 0;
    };

    RunState initial_state(const SimConfig& cfg, std::uint64_t seed, std::uint64_t run = 0);

    /// Noise stream for one (seed, object, slot) triple, shared by every scheme.
    std::mt19937_64 noise_stream(std::uint64_t seed, std::size_t object, std::int64_t slot);

    /// One slot of the proposed scheme (or, with `scheme` = WaterFilling, of the
    /// water-filling baseline, which shares the sensing and tracking loop).
    /// Advances the world by one slot.
    SlotRecord run_slot_proposed(RunState& state, const SimConfig& cfg, Scheme scheme = Scheme::Proposed);

    /// Predicts every known track to the current slot (two steps across the omni slot).
    RunState run_frame_boundary(const RunState& state, const SimConfig& cfg);

    std::vector<SlotRecord> run_proposed(const SimConfig& cfg, std::uint64_t seed, int slots, std::uint64_t run = 0);
    std::vector<SlotRecord> run_pilot_baseline(const SimConfig& cfg, std::uint64_t seed, int slots,
                                               std::uint64_t run = 0);
    std::vector<SlotRecord> run_waterfilling_baseline(const SimConfig& cfg, std::uint64_t seed, int slots,
                                                      std::uint64_t run = 0);
    std::vector<SlotRecord> run_scheme(Scheme scheme, const SimConfig& cfg, std::uint64_t seed, int slots,
                                       std::uint64_t run = 0);

    struct SlotStats
    {
        double mean_sum_rate = 0.0;
        double std_sum_rate = 0.0;
        double rmse_d = 0.0;
        double rmse_theta = 0.0;
        int samples = 0;
    };

    struct McSummary
    {
        std::vector<Scheme> schemes;
        std::vector<std::vector<SlotStats>> per_slot;  // [scheme][global slot]
        std::vector<SlotRecord> records;               // ordered by (run, scheme, slot)
        int failed_slots = 0;

        /// (mean_a - mean_b) / mean_b at a 0-based global slot.
        double improvement(Scheme a, Scheme b, std::size_t slot) const;
        const std::vector<SlotStats>& stats(Scheme s) const;
    };

    /// Runs every scheme for every seed (run id = seed index) and aggregates.
    /// Runs execute in parallel, capped by ISAC_SIM_THREADS when set.
    McSummary run_monte_carlo(const SimConfig& cfg, const std::vector<std::uint64_t>& seeds,
                              const std::vector<Scheme>& schemes, int slots);

    /// Single-threaded reference for run_monte_carlo.
    McSummary run_monte_carlo_serial(const SimConfig& cfg, const std::vector<std::uint64_t>& seeds,
                                     const std::vector<Scheme>& schemes, int slots);

    McSummary summarize(std::vector<SlotRecord> records, const std::vector<Scheme>& schemes, int slots);

    /// Thread cap from ISAC_SIM_THREADS (0 = OpenMP default).
    int thread_cap();
}

#endif
