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

#ifndef ISAC_WORLD_HPP
#define ISAC_WORLD_HPP

#include <cstdint>
#include <limits>
#include <vector>

namespace isac::world
{
    /// Ground-truth UAV kinematics in the vertical plane.
    ///
    /// `heading` is the angle of the velocity vector above the horizontal
    /// (0 = flying toward +x, pi = flying toward -x, pi/2 = climbing).
    struct UavState
    {
        double altitude = 100.0;
        double x = 0.0;
        double speed = 0.0;
        double heading = 0.0;
    };

    /// Object on the ground plane. Acceleration exists only in the truth model.
    struct ObjectTruth
    {
        double x = 0.0;
        double velocity = 0.0;
        double acceleration = 0.0;
        std::int64_t enter_slot = 0;
        std::int64_t exit_slot = std::numeric_limits<std::int64_t>::max();
    };

    /// Object kinematics seen from the UAV: angle below the flight axis,
    /// slant range and ground velocity.
    ///
    /// Convention: d sin(theta) = altitude, d cos(theta) = x_object - x_uav,
    /// so theta > 90 deg means the object is behind the UAV.
    struct PolarState
    {
        double theta = 0.0;
        double d = 0.0;
        double v = 0.0;
    };

    struct WorldState
    {
        UavState uav;
        std::vector<ObjectTruth> objects;
        std::int64_t slot = 0;
        double dt = 0.01;
    };

    /// Advances every object and the UAV by one slot with the exact kinematics.
    WorldState propagate_truth(const WorldState& world);

    PolarState polar_of(const UavState& uav, const ObjectTruth& object);

    PolarState true_polar(const WorldState& world, std::size_t k);

    /// Places an object from an initial polar angle at the UAV's current position.
    /// Throws InvalidScenario unless 0 < theta0 < pi.
    ObjectTruth scenario_from_caption(double theta0, double v0, double a, const UavState& uav);

    bool is_active(const ObjectTruth& object, std::int64_t slot);
}

#endif
