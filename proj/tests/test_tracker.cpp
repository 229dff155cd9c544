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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "isac/tracker.hpp"
#include "oracles.hpp"

using namespace isac;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    struct RandomStates
    {
        std::mt19937_64 rng{12345};
        std::uniform_real_distribution<double> th{deg2rad(10.0), deg2rad(170.0)};
        std::uniform_real_distribution<double> dd{50.0, 300.0};
        std::uniform_real_distribution<double> vv{-40.0, 40.0};
        std::uniform_real_distribution<double> hd{-kPi, kPi};
        std::uniform_real_distribution<double> sp{0.0, 25.0};

        world::PolarState state() { return {th(rng), dd(rng), vv(rng)}; }
        world::UavState uav()
        {
            world::UavState u;
            u.speed = sp(rng);
            u.heading = hd(rng);
            return u;
        }
    };

    Vec3 as_vec(const world::PolarState& p) { return {p.theta, p.d, p.v}; }
}

TEST_CASE("evolution with no motion is the identity", "[tracker]")
{
    const world::UavState still;
    const world::PolarState e{1.0, 120.0, 0.0};
    const auto n = tracker::evolve(e, still, 0.01);
    CHECK(n.theta == e.theta);
    CHECK(n.d == e.d);
    CHECK(n.v == e.v);
    // the velocity column still carries dT: a velocity error moves the next state
    const Mat3 G = tracker::jacobian_g(e, still, 0.01);
    CHECK(G.topLeftCorner<2, 2>() == Eigen::Matrix2d::Identity());
    CHECK(G.row(2) == Eigen::RowVector3d(0, 0, 1));
    const Mat3 N = oracle::fd_jacobian([&](const world::PolarState& s) { return as_vec(tracker::evolve(s, still, 0.01)); }, e);
    CHECK(oracle::jacobian_close(G, N, 1e-5));
    CHECK_THAT(G(0, 2), WithinRel(-std::sin(1.0) * 0.01 / 120.0, 1e-12));
    CHECK_THAT(G(1, 2), WithinRel(std::cos(1.0) * 0.01, 1e-12));
}

TEST_CASE("evolution overhead example", "[tracker]")
{
    const world::UavState still;
    const auto n = tracker::evolve({kPi / 2, 100.0, 10.0}, still, 0.01);
    CHECK_THAT(n.d, WithinAbs(100.0, 1e-12));
    CHECK_THAT(n.theta, WithinAbs(kPi / 2 - 0.001, 1e-12));
    CHECK_THROWS_AS(tracker::evolve({0.0, 1.0, -200.0}, still, 0.01), DegenerateGeometry);
}

TEST_CASE("Jacobian of the evolution matches central differences", "[tracker][property]")
{
    RandomStates r;
    for (int i = 0; i < 100; ++i)
    {
        const auto e = r.state();
        const auto uav = r.uav();
        const Mat3 J = tracker::jacobian_g(e, uav, 0.01);
        const Mat3 N = oracle::fd_jacobian([&](const world::PolarState& s) { return as_vec(tracker::evolve(s, uav, 0.01)); }, e);
        double worst = 0.0;
        CHECK(oracle::jacobian_close(J, N, 1e-5, &worst));
        CHECK(J.row(2) == Eigen::RowVector3d(0, 0, 1));
    }
}

TEST_CASE("Jacobian of the measurement map matches central differences", "[tracker][property]")
{
    RandomStates r;
    for (int i = 0; i < 100; ++i)
    {
        const auto e = r.state();
        const auto uav = r.uav();
        const Mat3 J = tracker::jacobian_h(e, uav, 30e9);
        const Mat3 N = oracle::fd_jacobian([&](const world::PolarState& s) { return tracker::measure_fn(s, uav, 30e9); }, e);
        CHECK(oracle::jacobian_close(J, N, 1e-5));
    }
    const Mat3 H = tracker::jacobian_h({kPi / 2, 100.0, 10.0}, world::UavState{}, 30e9);
    CHECK_THAT(H(1, 1), WithinRel(6.671281903963041e-9, 1e-12));
    CHECK_THAT(H(2, 2), WithinAbs(0.0, 1e-10));
}

TEST_CASE("measurement function shares the sensing map", "[tracker]")
{
    RandomStates r;
    for (int i = 0; i < 20; ++i)
    {
        const auto e = r.state();
        const auto uav = r.uav();
        CHECK(tracker::measure_fn(e, uav, 30e9) == sensing::ideal_measurement(e, uav, 30e9));
    }
}

TEST_CASE("huge measurement noise leaves the prediction untouched", "[tracker]")
{
    tracker::TrackState t;
    t.e = Vec3(1.0, 100.0, 10.0);
    t.mse = Vec3(1e-6, 1.0, 1.0).asDiagonal();
    world::UavState uav;
    uav.speed = 15.0;
    const Mat3 Qs = Vec3(1e-8, 0.04, 0.25).asDiagonal();
    const auto prior = tracker::predict(t, uav, Qs, 0.01);
    const Vec3 m = tracker::measure_fn(prior.polar(), uav, 30e9) + Vec3(0.01, 1e-8, 100.0);
    const Mat3 Qm = Vec3(1e-4, 1e-16, 1e4).asDiagonal() * 1e12;
    const auto post = tracker::update(prior, m, Qm, uav, 30e9);
    for (int i = 0; i < 3; ++i)
        CHECK_THAT(post.e[i], WithinAbs(prior.e[i], 1e-6 * std::max(1.0, std::abs(prior.e[i]))));
}

TEST_CASE("negligible measurement noise trusts the measurement", "[tracker]")
{
    tracker::TrackState t;
    t.e = Vec3(1.0, 100.0, 10.0);
    t.mse = Vec3(1e-4, 4.0, 4.0).asDiagonal();
    world::UavState uav;
    uav.speed = 15.0;
    const auto prior = tracker::predict(t, uav, Mat3::Zero(), 0.01);
    const Mat3 Qm = Vec3(1e-4, 1e-16, 1e4).asDiagonal() * 1e-12;
    const Mat3 H = tracker::jacobian_h(prior.polar(), uav, 30e9);
    const Vec3 h0 = tracker::measure_fn(prior.polar(), uav, 30e9);

    // the gain inverts the linearized measurement map
    const world::PolarState far{prior.e[0] + 0.002, prior.e[1] - 0.5, prior.e[2] + 0.7};
    const Vec3 m = tracker::measure_fn(far, uav, 30e9);
    const auto post = tracker::update(prior, m, Qm, uav, 30e9);
    const Vec3 lin = h0 + H * (post.e - prior.e);
    for (int i = 0; i < 3; ++i)
        CHECK_THAT(lin[i], WithinRel(m[i], 1e-6));

    // and for a small innovation the nonlinear map agrees as well
    const world::PolarState near{prior.e[0] + 2e-6, prior.e[1] - 5e-4, prior.e[2] + 7e-4};
    const Vec3 m2 = tracker::measure_fn(near, uav, 30e9);
    const auto post2 = tracker::update(prior, m2, Qm, uav, 30e9);
    const Vec3 hm = tracker::measure_fn(post2.polar(), uav, 30e9);
    for (int i = 0; i < 3; ++i)
        CHECK_THAT(hm[i], WithinRel(m2[i], 1e-6));
}

TEST_CASE("zero-noise matched model converges", "[tracker]")
{
    world::UavState uav;
    uav.speed = 15.0;
    const double dt = 0.01;
    world::PolarState truth{deg2rad(75.0), 103.5, 30.0};
    tracker::TrackState t;
    t.e = Vec3(truth.theta + deg2rad(0.5), truth.d + 2.0, truth.v - 3.0);
    t.mse = Vec3(1e-4, 4.0, 9.0).asDiagonal();
    tracker::NoiseModel noise;
    // noiseless truth and measurements; the filter keeps a floor of process noise far
    // above its measurement noise so the covariance never collapses to zero
    noise.process = Vec3(1e-12, 1e-8, 1e-8).asDiagonal();
    double prev_err = 1e300;
    for (int n = 1; n <= 5; ++n)
    {
        truth = tracker::evolve(truth, uav, dt);
        sensing::Measurement m;
        const Vec3 z = tracker::measure_fn(truth, uav, 30e9);
        m.theta = z[0];
        m.tau = z[1];
        m.mu = z[2];
        m.var = {1e-24, 1e-36, 1e-16, false};
        t = tracker::ekf_step(t, m, uav, noise, dt, 30e9);
        const Vec3 err = t.e - as_vec(truth);
        const double scaled = std::max({std::abs(err[0]), std::abs(err[1]), std::abs(err[2])});
        CHECK(scaled <= prev_err * (1 + 1e-9));
        prev_err = scaled;
        CHECK(tracker::mse_is_valid(t.mse));
    }
    CHECK(std::abs(t.e[0] - truth.theta) < 1e-6);
    CHECK(std::abs(t.e[1] - truth.d) < 1e-6);
    CHECK(std::abs(t.e[2] - truth.v) < 1e-6);
}

TEST_CASE("k-step prediction", "[tracker]")
{
    tracker::TrackState t;
    t.e = Vec3(1.0, 100.0, 0.0);
    t.mse = Vec3(1e-6, 1.0, 1.0).asDiagonal();
    const Mat3 Qs = Vec3(1e-8, 0.04, 0.25).asDiagonal();
    const std::vector<world::UavState> still(1);
    const auto two = tracker::predict_k_steps(t, still, 2, Qs, 0.01);
    CHECK(two.e == t.e);
    const Mat3 G = oracle::fd_jacobian(
        [&](const world::PolarState& s) { return as_vec(tracker::evolve(s, still[0], 0.01)); }, t.polar());
    const Mat3 P1 = G * t.mse * G.transpose() + Qs;
    const Mat3 P2 = G * P1 * G.transpose() + Qs;
    CHECK(two.mse.isApprox(P2, 1e-8));
    CHECK(two.mse.trace() >= (t.mse + 2 * Qs).trace());

    world::UavState uav;
    uav.speed = 15.0;
    const std::vector<world::UavState> moving{uav};
    const auto one = tracker::predict_k_steps(t, moving, 1, Qs, 0.01);
    const auto direct = tracker::predict(t, uav, Qs, 0.01);
    CHECK(one.e == direct.e);
    CHECK(one.mse == direct.mse);
    CHECK_THROWS_AS(tracker::predict_k_steps(t, moving, 0, Qs, 0.01), DomainError);
}

TEST_CASE("two-step prediction across the omni slot stays within a degree", "[tracker]")
{
    // default scenario object 0: caption angle 75 deg, v0 = 30, a = -5, UAV at 15 m/s
    world::WorldState w;
    w.dt = 0.01;
    w.uav.speed = 15.0;
    w.objects.push_back(world::scenario_from_caption(deg2rad(75.0), 30.0, -5.0, w.uav));
    for (int i = 0; i < 9; ++i)
        w = world::propagate_truth(w);
    const auto est = world::true_polar(w, 0);
    tracker::TrackState t;
    t.e = Vec3(est.theta, est.d, est.v);
    t.mse = Mat3::Identity() * 1e-4;
    const std::vector<world::UavState> uavs{w.uav};
    const auto pred = tracker::predict_k_steps(t, uavs, 2, Mat3::Zero(), 0.01);
    w = world::propagate_truth(world::propagate_truth(w));
    CHECK(std::abs(pred.e[0] - world::true_polar(w, 0).theta) < deg2rad(1.0));
}

TEST_CASE("MSE stays symmetric PSD under random filtering", "[tracker][property]")
{
    RandomStates r;
    const sensing::CrbParams crb;
    std::mt19937_64 rng(8);
    for (int run = 0; run < 20; ++run)
    {
        world::UavState uav;
        uav.speed = 15.0;
        world::PolarState truth = r.state();
        tracker::TrackState t;
        t.e = as_vec(truth) + Vec3(0.01, 1.0, 1.0);
        t.mse = Vec3(1e-4, 1.0, 1.0).asDiagonal();
        const auto noise = tracker::NoiseModel::from_stddev(deg2rad(0.02), 0.2, 0.5);
        for (int n = 0; n < 30; ++n)
        {
            truth = tracker::evolve(truth, uav, 0.01);
            if (truth.d < 20.0 || std::abs(std::cos(truth.theta)) < 0.05)
                break;
            const auto m = sensing::synthesize_measurement(truth, uav, 50.0, crb, 30e9, rng);
            t = tracker::ekf_step(t, m, uav, noise, 0.01, 30e9);
            CHECK(tracker::mse_is_valid(t.mse));
        }
    }
}

TEST_CASE("first-contact track from a measurement", "[tracker]")
{
    world::UavState uav;
    uav.speed = 15.0;
    const world::PolarState e{deg2rad(60.0), 150.0, 10.0};
    sensing::Measurement m;
    const Vec3 z = sensing::ideal_measurement(e, uav, 30e9);
    m.theta = z[0];
    m.tau = z[1];
    m.mu = z[2];
    m.var = {1e-6, 1e-18, 100.0, false};
    const auto t = tracker::initial_track(m, uav, 30e9, 10.0);
    CHECK_THAT(t.e[1], WithinRel(150.0, 1e-12));
    CHECK_THAT(t.e[2], WithinRel(10.0, 1e-9));
    CHECK_THAT(t.mse(0, 0), WithinRel(1e-5, 1e-12));
    const double c2 = kSpeedOfLight * kSpeedOfLight / 4.0;
    CHECK_THAT(t.mse(1, 1), WithinRel(10.0 * c2 * 1e-18, 1e-12));
    const double vs = kSpeedOfLight / (2.0 * 30e9 * 0.5);
    CHECK_THAT(t.mse(2, 2), WithinRel(10.0 * vs * vs * 100.0, 1e-9));
}

TEST_CASE("angle wrapping", "[tracker]")
{
    CHECK_THAT(tracker::wrap_angle(3 * kPi), WithinAbs(kPi, 1e-12));
    CHECK_THAT(tracker::wrap_angle(-kPi), WithinAbs(kPi, 1e-12));
    CHECK_THAT(tracker::wrap_angle(0.3), WithinAbs(0.3, 1e-15));
    CHECK_THAT(tracker::wrap_angle(-0.3 - 4 * kPi), WithinAbs(-0.3, 1e-12));
}

TEST_CASE("evolution approximation tracks exact kinematics", "[tracker]")
{
    double de = 0.0;
    double te = 0.0;
    oracle::exact_vs_chained({}, de, te);
    CHECK(de <= 1.0);
    CHECK(te <= deg2rad(0.5));
}
