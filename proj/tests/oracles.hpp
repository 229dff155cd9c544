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

#ifndef ISAC_TEST_ORACLES_HPP
#define ISAC_TEST_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "isac/beamform.hpp"
#include "isac/phy.hpp"
#include "isac/tracker.hpp"
#include "isac/world.hpp"

namespace oracle
{
    using namespace isac;

    /// Central differences of f around e with a relative step.
    // 1e-4 balances truncation against cancellation: d is O(100) while some
    // entries are O(1e-3), so smaller steps are dominated by rounding
    inline Mat3 fd_jacobian(const std::function<Vec3(const world::PolarState&)>& f, const world::PolarState& e,
                            double step = 1e-4)
    {
        Mat3 J;
        const double base[3] = {e.theta, e.d, e.v};
        for (int j = 0; j < 3; ++j)
        {
            const double h = step * std::max(1.0, std::abs(base[j]));
            double p[3] = {base[0], base[1], base[2]};
            double m[3] = {base[0], base[1], base[2]};
            p[j] += h;
            m[j] -= h;
            const Vec3 fp = f({p[0], p[1], p[2]});
            const Vec3 fm = f({m[0], m[1], m[2]});
            J.col(j) = (fp - fm) / (2.0 * h);
        }
        return J;
    }

    /// Relative agreement used for Jacobian checks: |a - b| <= tol * max(|b|, scale)
    /// where scale is the largest entry of the row (entries that vanish
    /// analytically are compared on the row's scale).
    inline bool jacobian_close(const Mat3& analytic, const Mat3& numeric, double tol, double* worst = nullptr)
    {
        double w = 0.0;
        for (int i = 0; i < 3; ++i)
        {
            const double row = numeric.row(i).cwiseAbs().maxCoeff();
            for (int j = 0; j < 3; ++j)
            {
                const double denom = std::max(std::abs(numeric(i, j)), row * 1e-3);
                if (denom == 0.0)
                {
                    w = std::max(w, std::abs(analytic(i, j)));
                    continue;
                }
                w = std::max(w, std::abs(analytic(i, j) - numeric(i, j)) / denom);
            }
        }
        if (worst)
            *worst = w;
        return w <= tol;
    }

    /// Closed-form single-user optimum: all power on the matched beam.
    inline double mrt_rate(double p_total, int n_tx, double alpha0, double d, double sigma_c2)
    {
        return std::log2(1.0 + p_total * n_tx * alpha0 * alpha0 / (d * d * sigma_c2));
    }

    /// Water level by bisection on sum max(0, mu - s/g) = P.
    inline std::vector<double> waterfill(const std::vector<double>& g, double p, double s)
    {
        double lo = 0.0;
        double hi = p + s / *std::min_element(g.begin(), g.end()) + 1.0;
        for (int it = 0; it < 200; ++it)
        {
            const double mu = 0.5 * (lo + hi);
            double tot = 0.0;
            for (double gi : g)
                tot += std::max(0.0, mu - s / gi);
            (tot > p ? hi : lo) = mu;
        }
        std::vector<double> out;
        for (double gi : g)
            out.push_back(std::max(0.0, 0.5 * (lo + hi) - s / gi));
        return out;
    }

    /// Exact truth recursion for the first-order evolution check: the world is
    /// propagated by the exact kinematics with zero object acceleration.
    struct ApproxCase
    {
        double dt = 0.05;
        double v_u = 15.0;
        double h = 60.0;
        double theta_u = kPi;
        double v = 30.0;
        double theta0 = deg2rad(45.0);
        int slots = 40;
    };

    inline void exact_vs_chained(const ApproxCase& c, double& max_d_err, double& max_theta_err)
    {
        // exact: positions in closed form
        const double x_u0 = 0.0;
        const double x_o0 = c.h / std::tan(c.theta0);
        world::UavState uav;
        uav.altitude = c.h;
        uav.speed = c.v_u;
        uav.heading = c.theta_u;
        world::PolarState chained{c.theta0, std::hypot(c.h, x_o0), c.v};
        max_d_err = 0.0;
        max_theta_err = 0.0;
        for (int n = 1; n <= c.slots; ++n)
        {
            chained = tracker::evolve(chained, uav, c.dt);
            const double t = n * c.dt;
            const double xu = x_u0 + c.v_u * std::cos(c.theta_u) * t;
            const double hu = c.h + c.v_u * std::sin(c.theta_u) * t;
            const double xo = x_o0 + c.v * t;
            const double d = std::hypot(hu, xo - xu);
            const double th = std::atan2(hu, xo - xu);
            max_d_err = std::max(max_d_err, std::abs(chained.d - d));
            max_theta_err = std::max(max_theta_err, std::abs(chained.theta - th));
        }
    }

    /// Random two-object design instance on an 8-element array.
    inline beamform::BeamProblem random_instance(std::mt19937_64& rng, int n_tx = 8, int k = 2)
    {
        std::uniform_real_distribution<double> th(deg2rad(30.0), deg2rad(150.0));
        std::uniform_real_distribution<double> dd(80.0, 160.0);
        beamform::BeamProblem p;
        p.geom = phy::ArrayGeometry::from_carrier(n_tx, n_tx, 30e9, 0.5);
        p.p_total = 1000.0;
        p.sigma_c2 = 1.0;
        p.coverage_multiplier = 3.0;
        p.resolution = deg2rad(0.1);
        std::vector<double> angles;
        while (static_cast<int>(angles.size()) < k)
        {
            const double a = th(rng);
            bool ok = true;
            for (double b : angles)
                ok = ok && std::abs(a - b) > deg2rad(10.0);
            if (ok)
                angles.push_back(a);
        }
        for (double a : angles)
        {
            const double d = dd(rng);
            p.channels.push_back(phy::channel_vector(a, d, p.geom, 1.0));
            p.theta.push_back(a);
            p.sigma_theta.push_back(deg2rad(0.5));
            p.rate_floor.push_back(0.5);
            p.coverage_slack.push_back(0.05);
        }
        return p;
    }

    inline double eig_ratio(const CMatrix& W)
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(W, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        const double l1 = ev[ev.size() - 1];
        return l1 > 0.0 ? std::max(0.0, ev[ev.size() - 2]) / l1 : 0.0;
    }

    /// Matrix-form SINR tr(h h^H W_k) / (sum_{i != k} tr(h h^H W_i) + s).
    inline double matrix_sinr(const std::vector<CMatrix>& W, const CVector& h, std::size_t k, double s)
    {
        double sig = 0.0;
        double intf = 0.0;
        for (std::size_t i = 0; i < W.size(); ++i)
        {
            const double g = std::real(h.dot(W[i] * h));
            (i == k ? sig : intf) += g;
        }
        return sig / (intf + s);
    }
}

#endif
