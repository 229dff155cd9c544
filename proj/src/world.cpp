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

#include "isac/world.hpp"

#include <cmath>
#include <string>

#include "isac/types.hpp"

namespace isac::world
{
    WorldState propagate_truth(const WorldState& world)
    {
        WorldState next = world;
        const double dt = world.dt;
        for (auto& obj : next.objects)
        {
            obj.x += obj.velocity * dt + 0.5 * obj.acceleration * dt * dt;
            obj.velocity += obj.acceleration * dt;
        }
        next.uav.x += world.uav.speed * std::cos(world.uav.heading) * dt;
        next.uav.altitude += world.uav.speed * std::sin(world.uav.heading) * dt;
        ++next.slot;
        return next;
    }

    PolarState polar_of(const UavState& uav, const ObjectTruth& object)
    {
        const double gap = object.x - uav.x;
        return {std::atan2(uav.altitude, gap), std::hypot(uav.altitude, gap), object.velocity};
    }

    PolarState true_polar(const WorldState& world, std::size_t k)
    {
        return polar_of(world.uav, world.objects.at(k));
    }

    ObjectTruth scenario_from_caption(double theta0, double v0, double a, const UavState& uav)
    {
        if (!(theta0 > 0.0 && theta0 < kPi))
            throw InvalidScenario("initial angle must lie in (0, pi), got " + std::to_string(theta0));
        ObjectTruth obj;
        // cos/sin rather than 1/tan keeps theta0 = 90 deg exactly overhead
        obj.x = uav.x + uav.altitude * std::cos(theta0) / std::sin(theta0);
        obj.velocity = v0;
        obj.acceleration = a;
        return obj;
    }

    bool is_active(const ObjectTruth& object, std::int64_t slot)
    {
        return slot >= object.enter_slot && slot < object.exit_slot;
    }
}
