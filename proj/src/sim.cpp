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

#include "isac/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <span>

#include <omp.h>

namespace isac::sim
{
    const char* to_string(Scheme s)
    {
        switch (s)
        {
        case Scheme::Proposed:
            return "proposed";
        case Scheme::Pilot:
            return "pilot";
        case Scheme::WaterFilling:
            return "waterfilling";
        }
        return "unknown";
    }

    Scheme scheme_from_string(const std::string& name)
    {
        if (name == "proposed")
            return Scheme::Proposed;
        if (name == "pilot")
            return Scheme::Pilot;
        if (name == "waterfilling")
            return Scheme::WaterFilling;
        throw ConfigError("unknown scheme '" + name + "' (expected proposed, pilot or waterfilling)");
    }

    double SlotRecord::sum_rate() const
    {
        double s = 0.0;
        for (const auto& o : objects)
            s += o.rate;
        return s;
    }

    std::mt19937_64 noise_stream(std::uint64_t seed, std::size_t object, std::int64_t slot)
    {
        const auto s = static_cast<std::uint64_t>(slot);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(object), static_cast<std::uint32_t>(s),
                          static_cast<std::uint32_t>(s >> 32), 0x15ACu};
        return std::mt19937_64(seq);
    }

    RunState initial_state(const SimConfig& cfg, std::uint64_t seed, std::uint64_t run)
    {
        cfg.validate();
        RunState st;
        st.world = cfg.initial_world();
        st.tracks.resize(st.world.objects.size());
        st.uav_history.push_back(st.world.uav);
        st.seed = seed;
        st.run = run;
        return st;
    }

    namespace
    {
        tracker::TrackState predict_to(const Track& t, std::int64_t n, const RunState& st, const SimConfig& cfg)
        {
            if (t.time >= n)
                return t.state;
            const auto first = static_cast<std::size_t>(t.time);
            const auto steps = static_cast<int>(n - t.time);
            const std::span<const world::UavState> uavs(st.uav_history.data() + first, static_cast<std::size_t>(steps));
            return tracker::predict_k_steps(t.state, uavs, steps, cfg.process_noise().process, cfg.dt);
        }

        void fill_estimate(ObjectRecord& r, const tracker::TrackState& s)
        {
            r.estimate = s.polar();
            r.has_estimate = true;
            r.mse = s.mse;
            r.mse_psd = tracker::mse_is_valid(s.mse);
        }

        beamform::BeamProblem make_problem(const SimConfig& cfg, const phy::ArrayGeometry& geom,
                                           const std::vector<world::PolarState>& est,
                                           const std::vector<double>& sigma_theta)
        {
            beamform::BeamProblem bp;
            bp.geom = geom;
            bp.p_total = cfg.p_total;
            bp.sigma_c2 = cfg.sigma_c2;
            bp.coverage_multiplier = cfg.coverage_multiplier;
            bp.resolution = deg2rad(cfg.resolution_deg);
            for (std::size_t j = 0; j < est.size(); ++j)
            {
                bp.channels.push_back(phy::channel_vector(est[j].theta, est[j].d, geom, cfg.alpha0));
                bp.theta.push_back(est[j].theta);
                bp.sigma_theta.push_back(sigma_theta[j]);
                bp.rate_floor.push_back(cfg.gamma);
                bp.coverage_slack.push_back(cfg.coverage_slack);
            }
            return bp;
        }

        beamform::BeamSolution fallback_beams(const SimConfig& cfg, const phy::ArrayGeometry& geom,
                                              const std::vector<world::PolarState>& est)
        {
            std::vector<double> th;
            std::vector<double> d;
            for (const auto& e : est)
            {
                th.push_back(e.theta);
                d.push_back(e.d);
            }
            return beamform::waterfill_mrt(th, d, cfg.p_total, cfg.sigma_c2, cfg.alpha0, geom);
        }

        // Designs beams with SCA + IRM and fills the solver fields of the record.
        beamform::BeamSolution design_into(SlotRecord& rec, const SimConfig& cfg, const phy::ArrayGeometry& geom,
                                           const std::vector<world::PolarState>& est,
                                           const std::vector<double>& sigma_theta,
                                           const beamform::BeamSolution* previous)
        {
            try
            {
                beamform::BeamSolution sol = beamform::design(make_problem(cfg, geom, est, sigma_theta),
                                                              cfg.sca_options(), cfg.irm_options());
                rec.sca_iters = sol.sca_iterations;
                rec.irm_iters = sol.irm_iterations;
                rec.r_final = sol.r_final;
                if (sol.status == beamform::SolveStatus::NearRankOneFailure)
                    rec.status = "near_rank_one";
                else if (!sol.relaxations.empty())
                    rec.status = "relaxed";
                for (const auto& r : sol.relaxations)
                    rec.notes.push_back(r);
                for (const auto& w : sol.warnings)
                    rec.notes.push_back(w);
                return sol;
            }
            catch (const SolverError& e)
            {
                rec.failed = true;
                rec.status = "solver_failure";
                rec.notes.emplace_back(e.what());
                if (previous && previous->w.size() == est.size())
                    return *previous;
                return fallback_beams(cfg, geom, est);
            }
        }

        void advance_world(RunState& st)
        {
            st.world = world::propagate_truth(st.world);
            st.uav_history.push_back(st.world.uav);
        }
    }

    RunState run_frame_boundary(const RunState& state, const SimConfig& cfg)
    {
        RunState out = state;
        const std::int64_t n = state.world.slot;
        for (auto& t : out.tracks)
            if (t && t->time < n)
            {
                t->state = predict_to(*t, n, state, cfg);
                t->time = n;
            }
        return out;
    }

    SlotRecord run_slot_proposed(RunState& st, const SimConfig& cfg, Scheme scheme)
    {
        if (scheme == Scheme::Pilot)
            throw DomainError("run_slot_proposed handles the proposed and water-filling schemes only");
        const FrameSchedule sched{cfg.frame_length, 1};
        const std::int64_t n = st.world.slot;
        const phy::ArrayGeometry geom = cfg.geometry();
        const sensing::CrbParams crb = cfg.crb();
        const world::UavState uav = st.world.uav;

        SlotRecord rec;
        rec.run = st.run;
        rec.scheme = scheme;
        rec.global_slot = n;
        rec.frame = sched.frame_of(n);
        rec.slot = sched.slot_in_frame(n);
        rec.omni = sched.is_omni(n);

        std::vector<std::size_t> active;
        for (std::size_t k = 0; k < st.world.objects.size(); ++k)
            if (world::is_active(st.world.objects[k], n))
                active.push_back(k);

        if (rec.omni)
        {
            rec.status = "omni";
            const int K = static_cast<int>(active.size());
            for (std::size_t k : active)
            {
                ObjectRecord o;
                o.object = k;
                o.truth = world::true_polar(st.world, k);
                o.rate = phy::rate(phy::omni_sinr(o.truth.d, K, cfg.alpha0, cfg.p_total, cfg.sigma_c2));
                const cdouble beta = phy::reflection_coeff(o.truth.d, cfg.rcs());
                o.radar_snr = phy::radar_snr_omni(beta, cfg.p_total, cfg.mf_gain, cfg.sigma2);
                auto rng = noise_stream(st.seed, k, n);
                const sensing::Measurement m = sensing::synthesize_measurement(
                    o.truth, uav, o.radar_snr, crb, cfg.carrier_hz, rng, cfg.measurement_noise_scale);
                o.measurement = m.vec();
                o.has_measurement = true;
                if (!st.tracks[k])
                {
                    Track t;
                    t.state = tracker::initial_track(m, uav, cfg.carrier_hz, cfg.mse0_inflation);
                    t.time = n;
                    t.last_angle_var = m.var.theta;
                    st.tracks[k] = t;
                    fill_estimate(o, t.state);
                }
                else
                {
                    fill_estimate(o, predict_to(*st.tracks[k], n, st, cfg));
                }
                rec.objects.push_back(o);
            }
            advance_world(st);
            return rec;
        }

        std::vector<std::size_t> known;
        std::vector<tracker::TrackState> priors;
        std::vector<world::PolarState> est;
        std::vector<double> sigma;
        for (std::size_t k : active)
            if (st.tracks[k])
            {
                known.push_back(k);
                priors.push_back(predict_to(*st.tracks[k], n, st, cfg));
                est.push_back(priors.back().polar());
                const double pred_std = std::sqrt(std::max(priors.back().mse(0, 0), 0.0));
                sigma.push_back(std::max(pred_std, std::sqrt(st.tracks[k]->last_angle_var)));
            }

        beamform::BeamSolution beams;
        if (!known.empty())
        {
            if (scheme == Scheme::Proposed)
            {
                const beamform::BeamSolution* prev = st.last_beam_objects == known ? &st.last_beams : nullptr;
                beams = design_into(rec, cfg, geom, est, sigma, prev);
            }
            else
            {
                beams = fallback_beams(cfg, geom, est);
            }
            st.last_beams = beams;
            st.last_beam_objects = known;
        }

        for (std::size_t k : active)
        {
            ObjectRecord o;
            o.object = k;
            o.truth = world::true_polar(st.world, k);
            const auto it = std::find(known.begin(), known.end(), k);
            if (it == known.end())
            {
                rec.objects.push_back(o);
                continue;
            }
            const auto j = static_cast<std::size_t>(it - known.begin());
            const CVector h_true = phy::channel_vector(o.truth.theta, o.truth.d, geom, cfg.alpha0);
            o.rate = phy::rate(phy::directional_sinr(h_true, beams.w, j, cfg.sigma_c2));
            const cdouble beta = phy::reflection_coeff(o.truth.d, cfg.rcs());
            o.radar_snr = phy::radar_snr_dir(o.truth.theta, beams.w, beta, cfg.mf_gain, cfg.sigma2, geom);
            auto rng = noise_stream(st.seed, k, n);
            const sensing::Measurement m = sensing::synthesize_measurement(o.truth, uav, o.radar_snr, crb,
                                                                           cfg.carrier_hz, rng,
                                                                           cfg.measurement_noise_scale);
            o.measurement = m.vec();
            o.has_measurement = true;

            Track& t = *st.tracks[k];
            try
            {
                t.state = tracker::update(priors[j], m, uav, cfg.carrier_hz);
            }
            catch (const FilterDivergence& e)
            {
                t.state = tracker::initial_track(m, uav, cfg.carrier_hz, cfg.mse0_inflation);
                rec.notes.push_back(std::string("track reset: ") + e.what());
            }
            t.time = n;
            t.last_angle_var = m.var.theta;
            fill_estimate(o, t.state);
            rec.objects.push_back(o);
        }
        advance_world(st);
        return rec;
    }

    std::vector<SlotRecord> run_proposed(const SimConfig& cfg, std::uint64_t seed, int slots, std::uint64_t run)
    {
        return run_scheme(Scheme::Proposed, cfg, seed, slots, run);
    }

    std::vector<SlotRecord> run_waterfilling_baseline(const SimConfig& cfg, std::uint64_t seed, int slots,
                                                      std::uint64_t run)
    {
        return run_scheme(Scheme::WaterFilling, cfg, seed, slots, run);
    }

    std::vector<SlotRecord> run_pilot_baseline(const SimConfig& cfg, std::uint64_t seed, int slots, std::uint64_t run)
    {
        RunState st = initial_state(cfg, seed, run);
        const FrameSchedule sched{cfg.frame_length, 1};
        const phy::ArrayGeometry geom = cfg.geometry();
        const sensing::CrbParams crb = cfg.crb();
        std::vector<SlotRecord> out;

        std::vector<std::size_t> held_objects;
        std::vector<tracker::TrackState> held_estimates;
        beamform::BeamSolution held;

        for (int i = 0; i < slots; ++i)
        {
            const std::int64_t n = st.world.slot;
            const world::UavState uav = st.world.uav;
            SlotRecord rec;
            rec.run = run;
            rec.scheme = Scheme::Pilot;
            rec.global_slot = n;
            rec.frame = sched.frame_of(n);
            rec.slot = sched.slot_in_frame(n);
            rec.omni = sched.is_omni(n);

            if (rec.omni)
            {
                rec.status = "pilot";
                held_objects.clear();
                held_estimates.clear();
                std::vector<world::PolarState> est;
                std::vector<double> sigma;
                for (std::size_t k = 0; k < st.world.objects.size(); ++k)
                {
                    if (!world::is_active(st.world.objects[k], n))
                        continue;
                    ObjectRecord o;
                    o.object = k;
                    o.truth = world::true_polar(st.world, k);
                    const cdouble beta = phy::reflection_coeff(o.truth.d, cfg.rcs());
                    o.radar_snr = phy::radar_snr_omni(beta, cfg.p_total, cfg.mf_gain, cfg.sigma2);
                    auto rng = noise_stream(seed, k, n);
                    const sensing::Measurement m = sensing::synthesize_measurement(
                        o.truth, uav, o.radar_snr, crb, cfg.carrier_hz, rng, cfg.measurement_noise_scale);
                    o.measurement = m.vec();
                    o.has_measurement = true;
                    const tracker::TrackState ts = tracker::initial_track(m, uav, cfg.carrier_hz, cfg.mse0_inflation);
                    fill_estimate(o, ts);
                    held_objects.push_back(k);
                    held_estimates.push_back(ts);
                    est.push_back(ts.polar());
                    sigma.push_back(std::sqrt(m.var.theta));
                    rec.objects.push_back(o);
                }
                if (!held_objects.empty())
                {
                    held = design_into(rec, cfg, geom, est, sigma, nullptr);
                    // relaxations stay in the notes; the slot is still a pilot slot
                    if (rec.status == "relaxed")
                        rec.status = "pilot";
                }
            }
            else
            {
                rec.status = "held";
                for (std::size_t k = 0; k < st.world.objects.size(); ++k)
                {
                    if (!world::is_active(st.world.objects[k], n))
                        continue;
                    ObjectRecord o;
                    o.object = k;
                    o.truth = world::true_polar(st.world, k);
                    const auto it = std::find(held_objects.begin(), held_objects.end(), k);
                    if (it != held_objects.end())
                    {
                        const auto j = static_cast<std::size_t>(it - held_objects.begin());
                        const CVector h_true = phy::channel_vector(o.truth.theta, o.truth.d, geom, cfg.alpha0);
                        o.rate = phy::rate(phy::directional_sinr(h_true, held.w, j, cfg.sigma_c2));
                        const cdouble beta = phy::reflection_coeff(o.truth.d, cfg.rcs());
                        o.radar_snr = phy::radar_snr_dir(o.truth.theta, held.w, beta, cfg.mf_gain, cfg.sigma2, geom);
                        fill_estimate(o, held_estimates[j]);
                    }
                    rec.objects.push_back(o);
                }
            }
            out.push_back(std::move(rec));
            advance_world(st);
        }
        return out;
    }

    std::vector<SlotRecord> run_scheme(Scheme scheme, const SimConfig& cfg, std::uint64_t seed, int slots,
                                       std::uint64_t run)
    {
        if (scheme == Scheme::Pilot)
            return run_pilot_baseline(cfg, seed, slots, run);
        RunState st = initial_state(cfg, seed, run);
        const FrameSchedule sched{cfg.frame_length, 1};
        std::vector<SlotRecord> out;
        for (int i = 0; i < slots; ++i)
        {
            const std::int64_t n = st.world.slot;
            if (n > 0 && sched.slot_in_frame(n) == 2)
                st = run_frame_boundary(st, cfg);
            out.push_back(run_slot_proposed(st, cfg, scheme));
        }
        return out;
    }

    const std::vector<SlotStats>& McSummary::stats(Scheme s) const
    {
        for (std::size_t i = 0; i < schemes.size(); ++i)
            if (schemes[i] == s)
                return per_slot[i];
        throw DomainError(std::string("scheme not in summary: ") + to_string(s));
    }

    double McSummary::improvement(Scheme a, Scheme b, std::size_t slot) const
    {
        const double ma = stats(a).at(slot).mean_sum_rate;
        const double mb = stats(b).at(slot).mean_sum_rate;
        return (ma - mb) / mb;
    }

    McSummary summarize(std::vector<SlotRecord> records, const std::vector<Scheme>& schemes, int slots)
    {
        McSummary s;
        s.schemes = schemes;
        s.per_slot.assign(schemes.size(), std::vector<SlotStats>(static_cast<std::size_t>(slots)));
        std::vector<std::vector<double>> sum(schemes.size(), std::vector<double>(slots, 0.0));
        std::vector<std::vector<double>> sum2 = sum;
        std::vector<std::vector<double>> ed2 = sum;
        std::vector<std::vector<double>> et2 = sum;
        std::vector<std::vector<int>> ne(schemes.size(), std::vector<int>(slots, 0));

        for (const auto& r : records)
        {
            const auto it = std::find(schemes.begin(), schemes.end(), r.scheme);
            if (it == schemes.end() || r.global_slot < 0 || r.global_slot >= slots)
                continue;
            const auto si = static_cast<std::size_t>(it - schemes.begin());
            const auto n = static_cast<std::size_t>(r.global_slot);
            const double rate = r.sum_rate();
            sum[si][n] += rate;
            sum2[si][n] += rate * rate;
            s.per_slot[si][n].samples += 1;
            for (const auto& o : r.objects)
                if (o.has_estimate)
                {
                    ed2[si][n] += (o.estimate.d - o.truth.d) * (o.estimate.d - o.truth.d);
                    et2[si][n] += (o.estimate.theta - o.truth.theta) * (o.estimate.theta - o.truth.theta);
                    ne[si][n] += 1;
                }
            if (r.failed)
                ++s.failed_slots;
        }
        for (std::size_t si = 0; si < schemes.size(); ++si)
            for (int n = 0; n < slots; ++n)
            {
                SlotStats& st = s.per_slot[si][n];
                if (st.samples == 0)
                    continue;
                const double N = st.samples;
                st.mean_sum_rate = sum[si][n] / N;
                const double var = st.samples > 1 ? (sum2[si][n] - N * st.mean_sum_rate * st.mean_sum_rate) / (N - 1)
                                                   : 0.0;
                st.std_sum_rate = std::sqrt(std::max(var, 0.0));
                if (ne[si][n] > 0)
                {
                    st.rmse_d = std::sqrt(ed2[si][n] / ne[si][n]);
                    st.rmse_theta = std::sqrt(et2[si][n] / ne[si][n]);
                }
            }
        s.records = std::move(records);
        return s;
    }

    int thread_cap()
    {
        const char* env = std::getenv("ISAC_SIM_THREADS");
        if (!env)
            return 0;
        const int v = std::atoi(env);
        return v > 0 ? v : 0;
    }

    namespace
    {
        std::vector<SlotRecord> flatten(std::vector<std::vector<SlotRecord>>& jobs)
        {
            std::vector<SlotRecord> all;
            for (auto& j : jobs)
                for (auto& r : j)
                    all.push_back(std::move(r));
            return all;
        }
    }

    McSummary run_monte_carlo(const SimConfig& cfg, const std::vector<std::uint64_t>& seeds,
                              const std::vector<Scheme>& schemes, int slots)
    {
        if (seeds.empty())
            throw DomainError("Monte-Carlo needs at least one seed");
        const auto jobs = static_cast<std::ptrdiff_t>(seeds.size() * schemes.size());
        std::vector<std::vector<SlotRecord>> results(static_cast<std::size_t>(jobs));
        std::exception_ptr error;
        const int cap = thread_cap();
        const int threads = cap > 0 ? cap : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
        for (std::ptrdiff_t j = 0; j < jobs; ++j)
        {
            const auto run = static_cast<std::size_t>(j) / schemes.size();
            const auto sc = static_cast<std::size_t>(j) % schemes.size();
            try
            {
                results[static_cast<std::size_t>(j)] = run_scheme(schemes[sc], cfg, seeds[run], slots, run);
            }
            catch (...)
            {
#pragma omp critical(isac_mc_error)
                if (!error)
                    error = std::current_exception();
            }
        }
        if (error)
            std::rethrow_exception(error);
        return summarize(flatten(results), schemes, slots);
    }

    McSummary run_monte_carlo_serial(const SimConfig& cfg, const std::vector<std::uint64_t>& seeds,
                                     const std::vector<Scheme>& schemes, int slots)
    {
        if (seeds.empty())
            throw DomainError("Monte-Carlo needs at least one seed");
        std::vector<std::vector<SlotRecord>> results;
        for (std::size_t run = 0; run < seeds.size(); ++run)
            for (Scheme s : schemes)
                results.push_back(run_scheme(s, cfg, seeds[run], slots, run));
        return summarize(flatten(results), schemes, slots);
    }
}
