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

#ifndef ISAC_SENSING_HPP
#define ISAC_SENSING_HPP

#include <random>

#include "isac/types.hpp"
#include "isac/world.hpp"

namespace isac::sensing
{
    struct CrbParams
    {
        double eff_bandwidth = 80e6;  // kappa (Hz)
        double eff_pulse = 1e-5;      // iota (s)
        int n_tx = 30;
        int n_rx = 30;
        double wavelength = kSpeedOfLight / 30e9;
        double angle_var_ceiling = deg2rad(1.0) * deg2rad(1.0);
    };

    struct NoiseVariances
    {
        double theta = 0.0;  // rad^2
        double tau = 0.0;    // s^2
        double mu = 0.0;     // Hz^2
        bool ceiling_applied = false;
    };

    /// Noisy (angle, delay, Doppler) triple with the variances its noise was drawn from.
    struct Measurement
    {
        double theta = 0.0;
        double tau = 0.0;
        double mu = 0.0;
        NoiseVariances var;

        Vec3 vec() const { return {theta, tau, mu}; }
    };

    /// CRB-calibrated noise variances for a given echo SNR.
    ///
    /// The angle term uses the squared RMS aperture width
    ///   xi^2 = pi^2 d^2 cos^2(theta) (N_t^2 - 1) / (3 lambda^2),
    /// including its d^2 factor. When xi^2 vanishes (broadside-null at
    /// cos(theta) = 0) or the variance exceeds the configured ceiling the
    /// ceiling is returned and flagged.
    NoiseVariances crb_variances(double snr, const CrbParams& crb, double theta, double d);

    /// Noise-free measurement: (theta, 2d/c, -2 (v cos theta - v_u cos(theta + theta_u)) f_c / c).
    Vec3 ideal_measurement(const world::PolarState& e, const world::UavState& uav, double carrier_hz);

    /// Truth plus independent Gaussian noise with CRB standard deviations.
    /// `noise_scale` multiplies the drawn noise (0 reproduces the ideal measurement).
    Measurement synthesize_measurement(const world::PolarState& e, const world::UavState& uav, double snr,
                                       const CrbParams& crb, double carrier_hz, std::mt19937_64& rng,
                                       double noise_scale = 1.0);

    /// Inverts the noise-free measurement map: d = c tau / 2, v from the Doppler
    /// after removing the UAV's own radial motion. Throws DegenerateGeometry when
    /// |cos theta| < 1e-6 (velocity unobservable).
    world::PolarState initial_state_from_measurement(const Measurement& m, const world::UavState& uav,
                                                     double carrier_hz);
}

#endif
