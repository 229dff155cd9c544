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

#include "isac/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "isac/tracker.hpp"

namespace isac::experiments
{
    std::string fmt(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    std::vector<std::uint64_t> seed_list(std::uint64_t base, int runs)
    {
        std::vector<std::uint64_t> s;
        for (int i = 0; i < runs; ++i)
            s.push_back(base + static_cast<std::uint64_t>(i));
        return s;
    }

    std::vector<std::string> split_list(const std::string& csv)
    {
        std::vector<std::string> out;
        std::stringstream ss(csv);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            const auto b = item.find_first_not_of(" \t");
            const auto e = item.find_last_not_of(" \t");
            if (b != std::string::npos)
                out.push_back(item.substr(b, e - b + 1));
        }
        return out;
    }

    void write_slots_csv(std::ostream& out, const std::vector<sim::SlotRecord>& records)
    {
        out << "run,frame,slot,scheme,object,true_theta_deg,true_d_m,true_v_mps,est_theta_deg,est_d_m,est_v_mps,"
               "meas_theta_deg,meas_tau_s,meas_mu_hz,rate_bpshz,radar_snr,sca_iters,irm_iters,r_final,status\n";
        const double nan = std::nan("");
        for (const auto& r : records)
            for (const auto& o : r.objects)
            {
                const world::PolarState est = o.has_estimate ? o.estimate : world::PolarState{nan, nan, nan};
                const Vec3 m = o.has_measurement ? o.measurement : Vec3::Constant(nan);
                out << r.run << ',' << r.frame << ',' << r.slot << ',' << sim::to_string(r.scheme) << ','
                    << o.object << ',' << fmt(rad2deg(o.truth.theta)) << ',' << fmt(o.truth.d) << ','
                    << fmt(o.truth.v) << ',' << fmt(rad2deg(est.theta)) << ',' << fmt(est.d) << ','
                    << fmt(est.v) << ',' << fmt(rad2deg(m[0])) << ',' << fmt(m[1]) << ',' << fmt(m[2]) << ','
                    << fmt(o.rate) << ',' << fmt(o.radar_snr) << ',' << r.sca_iters << ',' << r.irm_iters << ','
                    << fmt(r.r_final) << ',' << r.status << '\n';
            }
    }

    void write_comparison_csv(std::ostream& out, const sim::McSummary& summary, int frame_length)
    {
        out << "scheme,global_slot,frame,slot,mean_sum_rate,std_sum_rate,rmse_d_m,rmse_theta_deg,runs\n";
        for (std::size_t si = 0; si < summary.schemes.size(); ++si)
            for (std::size_t n = 0; n < summary.per_slot[si].size(); ++n)
            {
                const sim::SlotStats& s = summary.per_slot[si][n];
                out << sim::to_string(summary.schemes[si]) << ',' << n + 1 << ','
                    << n / static_cast<std::size_t>(frame_length) + 1 << ','
                    << n % static_cast<std::size_t>(frame_length) + 1 << ',' << fmt(s.mean_sum_rate) << ','
                    << fmt(s.std_sum_rate) << ',' << fmt(s.rmse_d) << ',' << fmt(rad2deg(s.rmse_theta)) << ','
                    << s.samples << '\n';
            }
    }

    void apply_sweep_value(SimConfig& cfg, const std::string& param, double value)
    {
        if (param == "h")
            cfg.altitude = value;
        else if (param == "resolution")
            cfg.resolution_deg = value;
        else if (param == "N_t")
        {
            if (value != std::floor(value))
                throw ConfigError("N_t sweep values must be integers");
            cfg.n_tx = static_cast<int>(value);
        }
        else
            throw ConfigError("unknown sweep parameter '" + param + "' (expected h, resolution or N_t)");
        cfg.validate();
    }

    std::vector<SweepRow> run_sweep(const SimConfig& cfg, const std::string& param, const std::vector<double>& values,
                                    const std::vector<sim::Scheme>& schemes, const std::vector<std::uint64_t>& seeds,
                                    int slots)
    {
        std::vector<SweepRow> rows;
        for (double v : values)
        {
            SimConfig c = cfg;
            apply_sweep_value(c, param, v);
            const sim::McSummary mc = sim::run_monte_carlo(c, seeds, schemes, slots);
            for (std::size_t si = 0; si < schemes.size(); ++si)
            {
                SweepRow row;
                row.param = param;
                row.value = v;
                row.scheme = schemes[si];
                double all = 0.0;
                double dir = 0.0;
                int n_all = 0;
                int n_dir = 0;
                double ed = 0.0;
                double et = 0.0;
                int ne = 0;
                for (const auto& r : mc.records)
                {
                    if (r.scheme != schemes[si])
                        continue;
                    all += r.sum_rate();
                    ++n_all;
                    if (!r.omni)
                    {
                        dir += r.sum_rate();
                        ++n_dir;
                    }
                    if (r.failed)
                        ++row.failed_slots;
                    for (const auto& o : r.objects)
                        if (o.has_estimate)
                        {
                            ed += (o.estimate.d - o.truth.d) * (o.estimate.d - o.truth.d);
                            et += (o.estimate.theta - o.truth.theta) * (o.estimate.theta - o.truth.theta);
                            ++ne;
                        }
                }
                row.mean_rate = n_all ? all / n_all : 0.0;
                row.mean_directional_rate = n_dir ? dir / n_dir : 0.0;
                row.rmse_d = ne ? std::sqrt(ed / ne) : 0.0;
                row.rmse_theta = ne ? std::sqrt(et / ne) : 0.0;
                rows.push_back(row);
            }
        }
        return rows;
    }

    void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
    {
        out << "param,value,scheme,mean_rate,mean_directional_rate,rmse_d_m,rmse_theta_deg,failed_slots\n";
        for (const auto& r : rows)
            out << r.param << ',' << fmt(r.value) << ',' << sim::to_string(r.scheme) << ',' << fmt(r.mean_rate) << ','
                << fmt(r.mean_directional_rate) << ',' << fmt(r.rmse_d) << ',' << fmt(rad2deg(r.rmse_theta)) << ','
                << r.failed_slots << '\n';
    }

    std::vector<ApproxRow> validate_approx(const ApproxSetup& setup)
    {
        world::WorldState w;
        w.dt = setup.dt;
        w.uav.altitude = setup.altitude;
        w.uav.speed = setup.uav_speed;
        w.uav.heading = deg2rad(setup.uav_heading_deg);
        w.objects.push_back(world::scenario_from_caption(deg2rad(setup.theta0_deg), setup.v, 0.0, w.uav));

        std::vector<ApproxRow> rows;
        world::PolarState approx = world::true_polar(w, 0);
        for (int n = 0; n <= setup.slots; ++n)
        {
            const world::PolarState exact = world::true_polar(w, 0);
            rows.push_back({n, n * setup.dt, exact.d, exact.theta, approx.d, approx.theta});
            if (n == setup.slots)
                break;
            approx = tracker::evolve(approx, w.uav, setup.dt);
            w = world::propagate_truth(w);
        }
        return rows;
    }

    void write_approx_csv(std::ostream& out, const std::vector<ApproxRow>& rows)
    {
        out << "slot,time_s,exact_d_m,approx_d_m,err_d_m,exact_theta_deg,approx_theta_deg,err_theta_deg\n";
        for (const auto& r : rows)
            out << r.slot << ',' << fmt(r.time) << ',' << fmt(r.exact_d) << ',' << fmt(r.approx_d) << ','
                << fmt(r.approx_d - r.exact_d) << ',' << fmt(rad2deg(r.exact_theta)) << ','
                << fmt(rad2deg(r.approx_theta)) << ',' << fmt(rad2deg(r.approx_theta - r.exact_theta)) << '\n';
    }

    std::vector<PatternRow> beampattern_rows(const SimConfig& cfg, std::uint64_t seed,
                                             const std::vector<std::int64_t>& slots)
    {
        std::int64_t last = 0;
        for (auto s : slots)
        {
            if (s < 1)
                throw ConfigError("beampattern slots are 1-based");
            last = std::max(last, s);
        }
        const phy::ArrayGeometry geom = cfg.geometry();
        std::vector<double> grid;
        for (int i = 1; i < 1800; ++i)
            grid.push_back(deg2rad(i * 0.1));

        std::vector<PatternRow> rows;
        auto emit = [&](std::int64_t slot, const std::string& label, const CMatrix& W) {
            const std::vector<double> g = phy::beampattern_scan(W, grid, geom);
            for (std::size_t i = 0; i < grid.size(); ++i)
                rows.push_back({slot, label, (static_cast<double>(i) + 1.0) * 0.1, g[i]});
        };

        sim::RunState st = sim::initial_state(cfg, seed);
        const sim::FrameSchedule sched{cfg.frame_length, 1};
        for (std::int64_t n = 0; n < last; ++n)
        {
            if (n > 0 && sched.slot_in_frame(n) == 2)
                st = sim::run_frame_boundary(st, cfg);
            const sim::SlotRecord rec = sim::run_slot_proposed(st, cfg);
            if (std::find(slots.begin(), slots.end(), n + 1) == slots.end())
                continue;
            if (rec.omni)
            {
                emit(n + 1, "all", phy::omni_covariance(cfg.p_total, cfg.n_tx));
                continue;
            }
            CMatrix total = CMatrix::Zero(cfg.n_tx, cfg.n_tx);
            for (std::size_t j = 0; j < st.last_beams.W.size(); ++j)
            {
                emit(n + 1, std::to_string(st.last_beam_objects[j]), st.last_beams.W[j]);
                total += st.last_beams.W[j];
            }
            emit(n + 1, "all", total);
        }
        return rows;
    }

    void write_beampattern_csv(std::ostream& out, const std::vector<PatternRow>& rows)
    {
        out << "slot,object,theta_deg,gain\n";
        for (const auto& r : rows)
            out << r.slot << ',' << r.object << ',' << fmt(r.theta_deg) << ',' << fmt(r.gain) << '\n';
    }

    std::vector<CrbRow> crb_table(const SimConfig& cfg)
    {
        const sensing::CrbParams crb = cfg.crb();
        std::vector<CrbRow> rows;
        for (double d : {50.0, 100.0, 150.0, 200.0})
            for (double th : {30.0, 45.0, 60.0, 75.0, 90.0, 105.0, 120.0, 135.0, 150.0})
                for (double snr_db : {-10.0, 0.0, 10.0, 20.0, 30.0})
                {
                    const double snr = std::pow(10.0, snr_db / 10.0);
                    rows.push_back({d, th, snr_db, sensing::crb_variances(snr, crb, deg2rad(th), d)});
                }
        return rows;
    }

    void write_crb_csv(std::ostream& out, const std::vector<CrbRow>& rows)
    {
        out << "d_m,theta_deg,snr_db,var_theta_rad2,var_tau_s2,var_mu_hz2,std_theta_deg,std_range_m,ceiling_applied\n";
        for (const auto& r : rows)
            out << fmt(r.d) << ',' << fmt(r.theta_deg) << ',' << fmt(r.snr_db) << ',' << fmt(r.var.theta) << ','
                << fmt(r.var.tau) << ',' << fmt(r.var.mu) << ',' << fmt(rad2deg(std::sqrt(r.var.theta))) << ','
                << fmt(kSpeedOfLight / 2.0 * std::sqrt(r.var.tau)) << ',' << (r.var.ceiling_applied ? 1 : 0)
                << '\n';
    }
}
