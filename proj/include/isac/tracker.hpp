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

#ifndef ISAC_TRACKER_HPP
#define ISAC_TRACKER_HPP

#include <span>

#include "isac/sensing.hpp"
#include "isac/types.hpp"
#include "isac/world.hpp"

namespace isac::tracker
{
    /// EKF state e = [theta, d, v] with its MSE matrix.
    struct TrackState
    {
        Vec3 e = Vec3::Zero();
        Mat3 mse = Mat3::Zero();

        world::PolarState polar() const { return {e[0], e[1], e[2]}; }
    };

    struct NoiseModel
    {
        Mat3 process = Mat3::Zero();      // Q_s
        Mat3 measurement = Mat3::Zero();  // Q_m

        static NoiseModel from_stddev(double sigma_theta, double sigma_d, double sigma_v);
        static Mat3 measurement_from(const sensing::NoiseVariances& v);
    };

    /// Linearized one-slot evolution g(e).
    ///
    /// With I = v_u sin(theta_u) dT (UAV climb) and II = v dT - v_u cos(theta_u) dT
    /// (change of the ground gap):
    ///   d'     = d + I sin(theta) + II cos(theta)
    ///   theta' = theta - (II sin(theta) - I cos(theta)) / d'
    ///   v'     = v
    /// Throws DegenerateGeometry when d' <= 0.
    world::PolarState evolve(const world::PolarState& e, const world::UavState& uav, double dt);

    /// Measurement function h(e); same map as sensing::ideal_measurement.
    Vec3 measure_fn(const world::PolarState& e, const world::UavState& uav, double carrier_hz);

    /// Analytic Jacobian of evolve() with respect to [theta, d, v].
    Mat3 jacobian_g(const world::PolarState& e, const world::UavState& uav, double dt);

    /// Analytic Jacobian of measure_fn() with respect to [theta, d, v].
    Mat3 jacobian_h(const world::PolarState& e, const world::UavState& uav, double carrier_hz);

    /// Prediction half of the filter: evolve the estimate, propagate MSE with G and Q_s.
    TrackState predict(const TrackState& track, const world::UavState& uav, const Mat3& process_noise, double dt);

    /// Update half of the filter with measurement m and Q_m taken from m's recorded variances.
    /// Throws FilterDivergence when the (equilibrated) innovation covariance has condition number > 1e14.
    TrackState update(const TrackState& prior, const sensing::Measurement& m, const world::UavState& uav,
                      double carrier_hz);

    /// Same as above but with an explicit Q_m.
    TrackState update(const TrackState& prior, const Vec3& m, const Mat3& measurement_noise,
                      const world::UavState& uav, double carrier_hz);

    /// Full recursion: predict, linearize, gain, correct, MSE update, symmetrize.
    /// Q_s comes from `noise.process`; Q_m from the measurement's recorded variances.
    TrackState ekf_step(const TrackState& track, const sensing::Measurement& m, const world::UavState& uav,
                        const NoiseModel& noise, double dt, double carrier_hz);

    /// `steps` prediction-only steps. uavs[i] drives step i; the last entry is
    /// reused when the span is shorter than `steps`.
    TrackState predict_k_steps(const TrackState& track, std::span<const world::UavState> uavs, int steps,
                               const Mat3& process_noise, double dt);

    /// First-contact track: the measurement mapped to [theta, d, v] with a
    /// diagonal MSE built from the mapped measurement variances times `inflation`.
    TrackState initial_track(const sensing::Measurement& m, const world::UavState& uav, double carrier_hz,
                             double inflation = 10.0);

    /// Wraps an angle to (-pi, pi].
    double wrap_angle(double a);

    /// MSE invariant: symmetric within 1e-10 (relative) and min eigenvalue >= -1e-10 trace.
    bool mse_is_valid(const Mat3& mse);
}

#endif
