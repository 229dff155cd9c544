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

#include "isac/sensing.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace isac::sensing
{
    NoiseVariances crb_variances(double snr, const CrbParams& crb, double theta, double d)
    {
        if (!(snr > 0.0))
            throw DomainError("CRB requires a positive SNR, got " + std::to_string(snr));
        if (!(d > 0.0))
            throw DomainError("CRB requires a positive distance");
        const double array = snr * crb.n_tx * crb.n_rx;
        NoiseVariances v;
        v.tau = 1.0 / (array * crb.eff_bandwidth * crb.eff_bandwidth);
        v.mu = 1.0 / (array * crb.eff_pulse * crb.eff_pulse);

        const double c = std::cos(theta);
        const double nt = crb.n_tx;
        const double xi2 = kPi * kPi * d * d * c * c * (nt * nt - 1.0) / (3.0 * crb.wavelength * crb.wavelength);
        const double var_theta = xi2 > 0.0 ? 1.0 / (array * xi2) : std::numeric_limits<double>::infinity();
        if (var_theta > crb.angle_var_ceiling)
        {
            v.theta = crb.angle_var_ceiling;
            v.ceiling_applied = true;
        }
        else
        {
            v.theta = var_theta;
        }
        return v;
    }

    Vec3 ideal_measurement(const world::PolarState& e, const world::UavState& uav, double carrier_hz)
    {
        const double radial = e.v * std::cos(e.theta) - uav.speed * std::cos(e.theta + uav.heading);
        return {e.theta, 2.0 * e.d / kSpeedOfLight, -2.0 * radial * carrier_hz / kSpeedOfLight};
    }

    Measurement synthesize_measurement(const world::PolarState& e, const world::UavState& uav, double snr,
                                       const CrbParams& crb, double carrier_hz, std::mt19937_64& rng,
                                       double noise_scale)
    {
        const NoiseVariances var = crb_variances(snr, crb, e.theta, e.d);
        const Vec3 ideal = ideal_measurement(e, uav, carrier_hz);
        std::normal_distribution<double> gauss(0.0, 1.0);
        // draw order is part of the determinism contract: theta, tau, mu
        const double z_theta = gauss(rng);
        const double z_tau = gauss(rng);
        const double z_mu = gauss(rng);
        Measurement m;
        m.theta = ideal[0] + noise_scale * std::sqrt(var.theta) * z_theta;
        m.tau = ideal[1] + noise_scale * std::sqrt(var.tau) * z_tau;
        m.mu = ideal[2] + noise_scale * std::sqrt(var.mu) * z_mu;
        m.var = var;
        return m;
    }

    world::PolarState initial_state_from_measurement(const Measurement& m, const world::UavState& uav,
                                                     double carrier_hz)
    {
        const double c = std::cos(m.theta);
        if (std::abs(c) < 1e-6)
            throw DegenerateGeometry("near-zenith measurement: velocity is unobservable");
        // radial velocity (positive when the range grows)
        const double radial = -m.mu * kSpeedOfLight / (2.0 * carrier_hz);
        world::PolarState e;
        e.theta = m.theta;
        e.d = kSpeedOfLight * m.tau / 2.0;
        e.v = (radial + uav.speed * std::cos(m.theta + uav.heading)) / c;
        return e;
    }
}
