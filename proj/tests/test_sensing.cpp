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

#include "isac/sensing.hpp"

using namespace isac;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    sensing::CrbParams table_params()
    {
        sensing::CrbParams p;
        p.wavelength = 0.01;
        return p;
    }
}

TEST_CASE("CRB angle variance and aperture width", "[sensing]")
{
    const auto p = table_params();
    // xi^2 = pi^2 d^2 cos^2(theta) (N^2 - 1) / (3 lambda^2) at d=100, theta=60 deg
    const double xi2 = kPi * kPi * 1e4 * 0.25 * 899.0 / 3e-4;
    CHECK_THAT(xi2, WithinRel(7.394e10, 1e-3));
    const auto v = sensing::crb_variances(2.88, p, deg2rad(60.0), 100.0);
    CHECK_THAT(v.theta, WithinRel(1.0 / (2.88 * 900.0 * xi2), 1e-9));
    CHECK_THAT(v.theta, WithinRel(5.22e-15, 1e-3));
    CHECK_FALSE(v.ceiling_applied);
    CHECK_THAT(v.tau, WithinRel(1.0 / (2.88 * 900.0 * 80e6 * 80e6), 1e-12));
    CHECK_THAT(v.mu, WithinRel(1.0 / (2.88 * 900.0 * 1e-10), 1e-12));
}

TEST_CASE("CRB variances scale as 1/SNR", "[sensing][property]")
{
    const auto p = table_params();
    for (double th : {0.3, 0.9, 2.1})
    {
        const auto a = sensing::crb_variances(3.0, p, th, 120.0);
        const auto b = sensing::crb_variances(6.0, p, th, 120.0);
        CHECK_THAT(b.theta, WithinRel(a.theta / 2, 1e-12));
        CHECK_THAT(b.tau, WithinRel(a.tau / 2, 1e-12));
        CHECK_THAT(b.mu, WithinRel(a.mu / 2, 1e-12));
    }
}

TEST_CASE("CRB ceiling at broadside and bad inputs", "[sensing]")
{
    const auto p = table_params();
    const auto v = sensing::crb_variances(2.0, p, kPi / 2, 100.0);
    CHECK(v.ceiling_applied);
    CHECK(v.theta == p.angle_var_ceiling);
    CHECK(std::isfinite(v.tau));
    CHECK_THROWS_AS(sensing::crb_variances(0.0, p, 1.0, 100.0), DomainError);
    CHECK_THROWS_AS(sensing::crb_variances(1.0, p, 1.0, 0.0), DomainError);
}

TEST_CASE("ideal measurement examples", "[sensing]")
{
    world::UavState still;
    const auto m = sensing::ideal_measurement({1.0, 150.0, 0.0}, still, 30e9);
    CHECK_THAT(m[1], WithinRel(300.0 / kSpeedOfLight, 1e-15));
    CHECK_THAT(m[1], WithinRel(1e-6, 1e-3));
    const auto dop = sensing::ideal_measurement({deg2rad(60.0), 100.0, 10.0}, still, 30e9);
    CHECK_THAT(dop[2], WithinRel(-2.0 * 10.0 * 0.5 * 30e9 / kSpeedOfLight, 1e-12));
    CHECK_THAT(dop[2], WithinRel(-1000.0, 1e-3));

    world::UavState moving;
    moving.speed = 15.0;
    moving.heading = 0.3;
    const double th = 1.2;
    const double v = moving.speed * std::cos(th + moving.heading) / std::cos(th);
    CHECK_THAT(sensing::ideal_measurement({th, 80.0, v}, moving, 30e9)[2], WithinAbs(0.0, 1e-9));
}

TEST_CASE("zero-noise synthesis reproduces the ideal measurement", "[sensing]")
{
    std::mt19937_64 rng(1);
    world::UavState uav;
    uav.speed = 15.0;
    const world::PolarState e{1.1, 130.0, -7.0};
    const auto m = sensing::synthesize_measurement(e, uav, 5.0, table_params(), 30e9, rng, 0.0);
    const Vec3 ideal = sensing::ideal_measurement(e, uav, 30e9);
    CHECK(m.theta == ideal[0]);
    CHECK(m.tau == ideal[1]);
    CHECK(m.mu == ideal[2]);
}

TEST_CASE("empirical measurement variance matches the CRB", "[sensing][statistics]")
{
    auto p = table_params();
    p.angle_var_ceiling = 1.0;
    std::mt19937_64 rng(2024);
    world::UavState uav;
    const world::PolarState e{0.8, 0.05, 3.0};  // short range keeps the angle variance large
    const auto ref = sensing::crb_variances(1.0, p, e.theta, e.d);
    const int n = 100000;
    double s[3] = {0, 0, 0};
    double s2[3] = {0, 0, 0};
    const Vec3 ideal = sensing::ideal_measurement(e, uav, 30e9);
    for (int i = 0; i < n; ++i)
    {
        const auto m = sensing::synthesize_measurement(e, uav, 1.0, p, 30e9, rng);
        const Vec3 z = m.vec() - ideal;
        for (int j = 0; j < 3; ++j)
        {
            s[j] += z[j];
            s2[j] += z[j] * z[j];
        }
    }
    const double want[3] = {ref.theta, ref.tau, ref.mu};
    for (int j = 0; j < 3; ++j)
    {
        const double mean = s[j] / n;
        const double var = s2[j] / n - mean * mean;
        CHECK_THAT(var, WithinRel(want[j], 0.05));
    }
}

TEST_CASE("fixed seed gives a fixed measurement sequence", "[sensing]")
{
    std::mt19937_64 a(99);
    std::mt19937_64 b(99);
    world::UavState uav;
    for (int i = 0; i < 10; ++i)
    {
        const auto ma = sensing::synthesize_measurement({1.0, 100.0, 5.0}, uav, 2.0, table_params(), 30e9, a);
        const auto mb = sensing::synthesize_measurement({1.0, 100.0, 5.0}, uav, 2.0, table_params(), 30e9, b);
        CHECK(ma.vec() == mb.vec());
    }
}

TEST_CASE("measurement inversion", "[sensing]")
{
    world::UavState still;
    sensing::Measurement m;
    m.theta = deg2rad(60.0);
    m.tau = 1e-6;
    m.mu = -1000.0;
    const auto e = sensing::initial_state_from_measurement(m, still, 30e9);
    CHECK_THAT(e.d, WithinRel(kSpeedOfLight * 1e-6 / 2, 1e-15));
    CHECK_THAT(e.d, WithinRel(150.0, 1e-3));
    CHECK_THAT(e.v, WithinRel(1000.0 * kSpeedOfLight / (2 * 30e9 * 0.5), 1e-12));
    CHECK_THAT(e.v, WithinRel(10.0, 1e-3));

    m.theta = kPi / 2;
    CHECK_THROWS_AS(sensing::initial_state_from_measurement(m, still, 30e9), DegenerateGeometry);
}

TEST_CASE("measurement map round trip", "[sensing][property]")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> th(deg2rad(5.0), deg2rad(175.0));
    std::uniform_real_distribution<double> dd(20.0, 400.0);
    std::uniform_real_distribution<double> vv(-40.0, 40.0);
    std::uniform_real_distribution<double> hd(-kPi, kPi);
    for (int i = 0; i < 1000; ++i)
    {
        const world::PolarState e{th(rng), dd(rng), vv(rng)};
        if (std::abs(std::cos(e.theta)) < 1e-3)
            continue;
        world::UavState uav;
        uav.speed = 15.0;
        uav.heading = hd(rng);
        const Vec3 z = sensing::ideal_measurement(e, uav, 30e9);
        sensing::Measurement m;
        m.theta = z[0];
        m.tau = z[1];
        m.mu = z[2];
        const auto back = sensing::initial_state_from_measurement(m, uav, 30e9);
        CHECK_THAT(back.theta, WithinRel(e.theta, 1e-9));
        CHECK_THAT(back.d, WithinRel(e.d, 1e-9));
        CHECK_THAT(back.v, WithinAbs(e.v, 1e-9 * std::max(1.0, std::abs(e.v))));
    }
}
