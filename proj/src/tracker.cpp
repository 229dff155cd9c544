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

#include "isac/tracker.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace isac::tracker
{
    namespace
    {
        struct Increments
        {
            double climb;  // I
            double gap;    // II
        };

        Increments increments(double v, const world::UavState& uav, double dt)
        {
            return {uav.speed * std::sin(uav.heading) * dt, v * dt - uav.speed * std::cos(uav.heading) * dt};
        }

        world::PolarState as_polar(const Vec3& e) { return {e[0], e[1], e[2]}; }
        Vec3 as_vec(const world::PolarState& p) { return {p.theta, p.d, p.v}; }
    }

    NoiseModel NoiseModel::from_stddev(double sigma_theta, double sigma_d, double sigma_v)
    {
        NoiseModel n;
        n.process = Vec3(sigma_theta * sigma_theta, sigma_d * sigma_d, sigma_v * sigma_v).asDiagonal();
        return n;
    }

    Mat3 NoiseModel::measurement_from(const sensing::NoiseVariances& v)
    {
        return Vec3(v.theta, v.tau, v.mu).asDiagonal();
    }

    double wrap_angle(double a)
    {
        a = std::remainder(a, 2.0 * kPi);
        return a <= -kPi ? a + 2.0 * kPi : a;
    }

    world::PolarState evolve(const world::PolarState& e, const world::UavState& uav, double dt)
    {
        const auto [climb, gap] = increments(e.v, uav, dt);
        const double s = std::sin(e.theta);
        const double c = std::cos(e.theta);
        const double d_next = e.d + climb * s + gap * c;
        if (!(d_next > 0.0))
            throw DegenerateGeometry("predicted distance is non-positive");
        return {e.theta - (gap * s - climb * c) / d_next, d_next, e.v};
    }

    Vec3 measure_fn(const world::PolarState& e, const world::UavState& uav, double carrier_hz)
    {
        return sensing::ideal_measurement(e, uav, carrier_hz);
    }

    Mat3 jacobian_g(const world::PolarState& e, const world::UavState& uav, double dt)
    {
        const auto [climb, gap] = increments(e.v, uav, dt);
        const double s = std::sin(e.theta);
        const double c = std::cos(e.theta);
        const double den = e.d + climb * s + gap * c;
        if (!(den > 0.0))
            throw DegenerateGeometry("evolution Jacobian denominator is non-positive");
        const double den2 = den * den;

        Mat3 G;
        G(0, 0) = 1.0 - ((climb * s + gap * c) * e.d + climb * climb + gap * gap) / den2;
        G(0, 1) = (gap * s - climb * c) / den2;
        G(0, 2) = -(e.d * s + climb) * dt / den2;
        // d'/dtheta carries both increments: I cos(theta) - II sin(theta)
        G(1, 0) = climb * c - gap * s;
        G(1, 1) = 1.0;
        G(1, 2) = dt * c;
        G(2, 0) = 0.0;
        G(2, 1) = 0.0;
        G(2, 2) = 1.0;
        return G;
    }

    Mat3 jacobian_h(const world::PolarState& e, const world::UavState& uav, double carrier_hz)
    {
        const double k = 2.0 * carrier_hz / kSpeedOfLight;
        Mat3 H = Mat3::Zero();
        H(0, 0) = 1.0;
        H(1, 1) = 2.0 / kSpeedOfLight;
        H(2, 0) = k * (e.v * std::sin(e.theta) - uav.speed * std::sin(e.theta + uav.heading));
        H(2, 2) = -k * std::cos(e.theta);
        return H;
    }

    TrackState predict(const TrackState& track, const world::UavState& uav, const Mat3& process_noise, double dt)
    {
        const world::PolarState prev = as_polar(track.e);
        const Mat3 G = jacobian_g(prev, uav, dt);
        TrackState out;
        out.e = as_vec(evolve(prev, uav, dt));
        out.mse = G * track.mse * G.transpose() + process_noise;
        out.mse = 0.5 * (out.mse + out.mse.transpose()).eval();
        return out;
    }

    TrackState update(const TrackState& prior, const Vec3& m, const Mat3& measurement_noise,
                      const world::UavState& uav, double carrier_hz)
    {
        const world::PolarState pred = as_polar(prior.e);
        const Mat3 H = jacobian_h(pred, uav, carrier_hz);
        const Mat3 S = H * prior.mse * H.transpose() + measurement_noise;

        // The three measurement channels live on scales 1e-19 s^2 .. 1e6 Hz^2;
        // conditioning is judged after diagonal equilibration.
        const Vec3 diag = S.diagonal();
        if ((diag.array() <= 0.0).any() || !diag.allFinite())
            throw FilterDivergence("innovation covariance has a non-positive diagonal");
        const Vec3 inv_sqrt = diag.cwiseSqrt().cwiseInverse();
        const Mat3 S_eq = inv_sqrt.asDiagonal() * S * inv_sqrt.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Mat3> es(S_eq, Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        if (!(lo > 0.0) || hi / lo > 1e14)
            throw FilterDivergence("innovation covariance is not invertible");

        // KAL = P H^T S^{-1}, via a solve against the equilibrated S
        const Mat3 PHt = prior.mse * H.transpose();
        const Eigen::LDLT<Mat3> ldlt(S_eq);
        const Mat3 rhs = (PHt * inv_sqrt.asDiagonal()).transpose();
        const Mat3 gain = (inv_sqrt.asDiagonal() * ldlt.solve(rhs)).transpose();

        Vec3 innovation = m - measure_fn(pred, uav, carrier_hz);
        innovation[0] = wrap_angle(innovation[0]);

        TrackState post;
        post.e = prior.e + gain * innovation;
        // Joseph form: same value as (I - KH) P for this gain, but stays PSD
        // when Q_m is many orders of magnitude below H P H^T
        const Mat3 IKH = Mat3::Identity() - gain * H;
        post.mse = IKH * prior.mse * IKH.transpose() + gain * measurement_noise * gain.transpose();
        post.mse = 0.5 * (post.mse + post.mse.transpose()).eval();
        return post;
    }

    TrackState update(const TrackState& prior, const sensing::Measurement& m, const world::UavState& uav,
                      double carrier_hz)
    {
        return update(prior, m.vec(), NoiseModel::measurement_from(m.var), uav, carrier_hz);
    }

    TrackState ekf_step(const TrackState& track, const sensing::Measurement& m, const world::UavState& uav,
                        const NoiseModel& noise, double dt, double carrier_hz)
    {
        const TrackState prior = predict(track, uav, noise.process, dt);
        return update(prior, m, uav, carrier_hz);
    }

    TrackState predict_k_steps(const TrackState& track, std::span<const world::UavState> uavs, int steps,
                               const Mat3& process_noise, double dt)
    {
        if (steps < 1)
            throw DomainError("predict_k_steps requires steps >= 1");
        if (uavs.empty())
            throw DomainError("predict_k_steps requires at least one UAV state");
        TrackState out = track;
        for (int i = 0; i < steps; ++i)
        {
            const auto& uav = uavs[std::min<std::size_t>(i, uavs.size() - 1)];
            out = predict(out, uav, process_noise, dt);
        }
        return out;
    }

    TrackState initial_track(const sensing::Measurement& m, const world::UavState& uav, double carrier_hz,
                             double inflation)
    {
        const world::PolarState e = sensing::initial_state_from_measurement(m, uav, carrier_hz);
        const double half_c = kSpeedOfLight / 2.0;
        const double v_scale = kSpeedOfLight / (2.0 * carrier_hz * std::cos(m.theta));
        TrackState t;
        t.e = as_vec(e);
        t.mse = Vec3(m.var.theta, half_c * half_c * m.var.tau, v_scale * v_scale * m.var.mu).asDiagonal();
        t.mse *= inflation;
        return t;
    }

    bool mse_is_valid(const Mat3& mse)
    {
        if (!mse.allFinite())
            return false;
        const double scale = std::max(mse.cwiseAbs().maxCoeff(), 1e-300);
        if ((mse - mse.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            return false;
        Eigen::SelfAdjointEigenSolver<Mat3> es(mse, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff() >= -1e-10 * std::abs(mse.trace());
    }
}
