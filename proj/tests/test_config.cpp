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

#include <cstdio>
#include <fstream>
#include <string>

#include "isac/config.hpp"

using namespace isac;

namespace
{
    std::string error_of(const std::string& text)
    {
        try
        {
            parse_config(text, "cfg.txt");
        }
        catch (const ConfigError& e)
        {
            return e.what();
        }
        return {};
    }
}

TEST_CASE("empty configuration is the reference setup", "[config]")
{
    const SimConfig c = parse_config("", "empty");
    CHECK(c.n_tx == 30);
    CHECK(c.n_rx == 30);
    CHECK(c.carrier_hz == 30e9);
    CHECK(c.kappa == 80e6);
    CHECK(c.iota == 1e-5);
    CHECK(c.mf_gain == 10.0);
    CHECK(c.alpha0 == 1.0);
    CHECK(c.sigma_c2 == 1.0);
    CHECK(c.sigma2 == 1.0);
    CHECK(c.sigma1_deg == 0.02);
    CHECK(c.sigma2_m == 0.2);
    CHECK(c.sigma3_mps == 0.5);
    CHECK(c.dt == 0.01);
    CHECK(c.rcs() == cdouble(120.0, 120.0));
    CHECK(c.p_total == 1000.0);
    CHECK(c.gamma == 0.5);
    CHECK(c.coverage_slack == 0.05);
    CHECK(c.coverage_multiplier == 3.0);
    CHECK(c.resolution_deg == 0.1);
    CHECK(c.frame_length == 10);
    CHECK(c.resolved_objects().size() == 2);
}

TEST_CASE("single override", "[config]")
{
    const SimConfig c = parse_config("# antennas\nN_t = 16   # fewer\n", "x");
    CHECK(c.n_tx == 16);
    CHECK(c.n_rx == 30);
}

TEST_CASE("objects and scenarios", "[config]")
{
    const SimConfig c = parse_config("scenario = single\n", "x");
    REQUIRE(c.resolved_objects().size() == 1);
    CHECK(c.resolved_objects()[0].theta0_deg == 60.0);
    const SimConfig d = parse_config("object = 45, 30, -5\nobject = 100, -3, 1, 4\n", "x");
    REQUIRE(d.resolved_objects().size() == 2);
    CHECK(d.resolved_objects()[1].enter_slot == 4);
    const auto w = d.initial_world();
    CHECK(w.objects.size() == 2);
    CHECK(w.objects[1].enter_slot == 4);
}

TEST_CASE("errors carry the offending line", "[config]")
{
    CHECK(error_of("N_t = 16\ndT = -1\n").rfind("cfg.txt:2:", 0) == 0);
    CHECK(error_of("dT = -1\n").find("dT must be positive") != std::string::npos);
    CHECK(error_of("\n\nbogus = 3\n").rfind("cfg.txt:3:", 0) == 0);
    CHECK(error_of("bogus = 3").find("unknown configuration key 'bogus'") != std::string::npos);
    CHECK(error_of("N_t = 3.5\n").find("integer") != std::string::npos);
    CHECK(error_of("P_T = lots\n").find("number") != std::string::npos);
    CHECK(error_of("just text\n").find("key = value") != std::string::npos);
    CHECK(error_of("scenario = nope\n").find("unknown scenario") != std::string::npos);
    CHECK(error_of("object = 0, 1, 2\n").find("(0, 180)") != std::string::npos);
    CHECK(error_of("resolution_deg = 0\n").find("resolution_deg") != std::string::npos);
}

TEST_CASE("loading from disk", "[config]")
{
    CHECK_THROWS_AS(load_config("/nonexistent/isac.cfg"), ConfigError);
    const std::string path = "test_config_tmp.cfg";
    {
        std::ofstream f(path);
        f << "N_t = 12\nseed = 18446744073709551615\n";
    }
    const SimConfig c = load_config(path);
    CHECK(c.n_tx == 12);
    CHECK(c.seed == 18446744073709551615ull);
    std::remove(path.c_str());
}

TEST_CASE("every key is settable", "[config]")
{
    for (const auto& k : config_keys())
    {
        SimConfig c;
        const std::string v = k == "scenario" ? "single" : k == "object" ? "50, 1, 0" : "2";
        CHECK_NOTHROW(apply_setting(c, k, v));
    }
}

TEST_CASE("derived parameter blocks", "[config]")
{
    SimConfig c;
    const auto g = c.geometry();
    CHECK(g.n_tx == 30);
    CHECK_THAT(g.spacing, Catch::Matchers::WithinRel(kSpeedOfLight / 30e9 / 2, 1e-15));
    const auto q = c.process_noise().process;
    CHECK_THAT(q(0, 0), Catch::Matchers::WithinRel(deg2rad(0.02) * deg2rad(0.02), 1e-14));
    CHECK_THAT(q(1, 1), Catch::Matchers::WithinRel(0.04, 1e-14));
    CHECK_THAT(q(2, 2), Catch::Matchers::WithinRel(0.25, 1e-14));
}
