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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "isac/phy.hpp"
#include "isac/sim.hpp"

using namespace isac;

namespace
{
    CMatrix random_psd(int n)
    {
        std::mt19937_64 rng(1);
        std::normal_distribution<double> g;
        CMatrix A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                A(i, j) = {g(rng), g(rng)};
        return A * A.adjoint();
    }

    std::vector<double> fine_grid()
    {
        std::vector<double> grid;
        for (int i = 1; i < 1800; ++i)
            grid.push_back(deg2rad(0.1 * i));
        return grid;
    }

    template <bool Parallel>
    void BM_BeampatternScan(benchmark::State& state)
    {
        const int n = static_cast<int>(state.range(0));
        const auto geom = phy::ArrayGeometry::from_carrier(n, n, 30e9, 0.5);
        const CMatrix W = random_psd(n);
        const auto grid = fine_grid();
        for (auto _ : state)
        {
            auto g = Parallel ? phy::beampattern_scan(W, grid, geom) : phy::beampattern_scan_serial(W, grid, geom);
            benchmark::DoNotOptimize(g.data());
        }
        state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
    }

    template <bool Parallel>
    void BM_MonteCarlo(benchmark::State& state)
    {
        SimConfig cfg;
        cfg.n_tx = 8;
        cfg.n_rx = 8;
        const std::vector<std::uint64_t> seeds{1, 2, 3, 4};
        const std::vector<sim::Scheme> schemes{sim::Scheme::Proposed, sim::Scheme::Pilot, sim::Scheme::WaterFilling};
        for (auto _ : state)
        {
            auto mc = Parallel ? sim::run_monte_carlo(cfg, seeds, schemes, 3)
                               : sim::run_monte_carlo_serial(cfg, seeds, schemes, 3);
            benchmark::DoNotOptimize(mc.records.data());
        }
    }
}

BENCHMARK(BM_BeampatternScan<false>)->Name("beampattern_scan/serial")->Arg(30)->Arg(64);
BENCHMARK(BM_BeampatternScan<true>)->Name("beampattern_scan/openmp")->Arg(30)->Arg(64);
BENCHMARK(BM_MonteCarlo<false>)->Name("monte_carlo/serial")->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK(BM_MonteCarlo<true>)->Name("monte_carlo/openmp")->Unit(benchmark::kMillisecond)->Iterations(2);

BENCHMARK_MAIN();
