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

#ifndef ISAC_BEAMFORM_HPP
#define ISAC_BEAMFORM_HPP

#include <limits>
#include <string>
#include <vector>

#include "isac/conic.hpp"
#include "isac/phy.hpp"
#include "isac/types.hpp"

namespace isac::beamform
{
    /// Per-slot downlink design problem built from predicted object states.
    struct BeamProblem
    {
        std::vector<CVector> channels;     // predicted h_k
        std::vector<double> theta;         // predicted angles (rad)
        std::vector<double> sigma_theta;   // pointing std per object (rad)
        std::vector<double> rate_floor;    // Gamma_k (bit/s/Hz)
        std::vector<double> coverage_slack;  // B_k; +inf disables the coverage constraint
        double p_total = 1000.0;
        double sigma_c2 = 1.0;
        double coverage_multiplier = 3.0;  // l
        double resolution = deg2rad(0.1);
        bool coverage_center_only = false;
        phy::ArrayGeometry geom;

        std::size_t size() const { return channels.size(); }
        void validate() const;
    };

    /// Uniform grid over theta_bar +- max(l sigma, resolution), symmetric and
    /// always containing the centre and both end points.
    std::vector<double> build_coverage_grid(double theta_bar, double sigma_theta, double l, double resolution);

    /// Expansion point {W^(q)} of the rate linearization together with the
    /// rank-one matrices X_k = log2(e) h_k h_k^H / (sum_{i != k} h_k^H W_i^(q) h_k + sigma^2).
    struct SurrogateExpansion
    {
        std::vector<CMatrix> point;
        std::vector<CMatrix> X;
        std::vector<double> interference;  // sum_{i != k} h_k^H W_i^(q) h_k

        static SurrogateExpansion build(const std::vector<CMatrix>& point, const std::vector<CVector>& channels,
                                        double sigma_c2);
    };

    /// log2(1 + SINR_k) for a set of transmit covariances.
    double true_rate(const std::vector<CMatrix>& W, std::size_t k, const std::vector<CVector>& channels,
                     double sigma_c2);
    double sum_rate(const std::vector<CMatrix>& W, const std::vector<CVector>& channels, double sigma_c2);

    /// Concave lower bound of true_rate around the expansion point.
    double surrogate_rate(const std::vector<CMatrix>& W, const SurrogateExpansion& expansion, std::size_t k,
                          const std::vector<CVector>& channels, double sigma_c2);

    enum class SolveStatus
    {
        Optimal,
        Infeasible,
        SolverFailure,
        NearRankOneFailure
    };

    const char* to_string(SolveStatus s);

    struct SubproblemResult
    {
        std::vector<CMatrix> W;
        SolveStatus status = SolveStatus::SolverFailure;
        double objective = 0.0;  // surrogate sum rate at W
        double gap = 0.0;
        int newton_steps = 0;
        std::string detail;
    };

    /// Maximizes sum_k R~_k over the power, PSD, rate-floor and coverage
    /// constraints for one expansion point.
    SubproblemResult solve_convex_subproblem(const BeamProblem& problem, const SurrogateExpansion& expansion,
                                             const conic::Options& opt = {});

    struct Relaxation
    {
        int gamma_halvings = 0;
        bool center_only = false;
    };

    BeamProblem relaxed(const BeamProblem& problem, const Relaxation& r);

    struct ScaOptions
    {
        double rel_tol = 1e-4;
        int max_iter = 15;
        conic::Options conic;
    };

    struct IrmOptions
    {
        double w0 = 1.0;
        double rho = 2.0;
        int max_iter = 20;
        double threshold = 1e-6;  // r_p < threshold * P_T / N_t
        conic::Options conic;
    };

    struct BeamSolution
    {
        std::vector<CMatrix> W;
        std::vector<CVector> w;
        std::vector<double> sca_trace;  // true sum rate after each accepted SCA iterate
        std::vector<double> irm_trace;  // r_p in power units
        std::vector<std::string> subproblem_status;
        std::vector<std::string> relaxations;
        std::vector<std::string> warnings;
        Relaxation relaxation;
        std::vector<CMatrix> expansion_point;  // expansion used to produce W (SCA penultimate iterate)
        SolveStatus status = SolveStatus::Optimal;
        int sca_iterations = 0;
        int irm_iterations = 0;
        double r_final = 0.0;
        double eig_ratio = 0.0;          // max_k lambda2 / lambda1
        double power_residual = 0.0;     // sum tr W_k - P_T
        double coverage_residual = 0.0;  // max_k max_c |a0 W a0 - ac W ac| - B_k tr W_k
        double rate_residual = 0.0;      // max_k Gamma_k - R_k
    };

    /// MRT split W_k = (P_T / K) a(theta_k) a(theta_k)^H / N_t.
    std::vector<CMatrix> mrt_initialization(const BeamProblem& problem);

    /// SCA loop. Infeasible first subproblems walk the relaxation ladder
    /// (halve every Gamma_k up to three times, then keep only the grid centre);
    /// throws SolverError when that is exhausted or the backend fails outright.
    BeamSolution solve_sca(const BeamProblem& problem, const std::vector<CMatrix>& init, const ScaOptions& opt = {});

    /// Iterative rank minimization seeded with the SCA result. The rate
    /// linearization stays fixed at sca_out.expansion_point.
    BeamSolution solve_irm(const BeamSolution& sca_out, const BeamProblem& problem, const IrmOptions& opt = {});

    /// MRT init, SCA, IRM and beam-vector extraction.
    BeamSolution design(const BeamProblem& problem, const ScaOptions& sca = {}, const IrmOptions& irm = {});

    /// sqrt(lambda_1) u_1 of the principal eigenpair.
    CVector extract_beamvector(const CMatrix& W);

    /// p_k = max(0, mu - sigma^2 / g_k) with sum p_k = p_total.
    std::vector<double> waterfill_powers(const std::vector<double>& gains, double p_total, double sigma_c2);

    BeamSolution waterfill_mrt(const std::vector<double>& theta, const std::vector<double>& distance,
                               double p_total, double sigma_c2, double alpha0, const phy::ArrayGeometry& geom);

    /// W = (P_T / N_t) I with beam vectors sqrt(P_T / N_t) e_i.
    BeamSolution omni_precoder(double p_total, const phy::ArrayGeometry& geom);

    /// Fills the residual fields of `sol` for `problem`.
    void compute_residuals(BeamSolution& sol, const BeamProblem& problem);

    /// Orthonormal basis of the span of all channels and coverage steering
    /// vectors. Every functional in the design problem depends on W only
    /// through U^H W U and tr W, which makes the reduced problem exact.
    struct ReducedSpace
    {
        CMatrix U;
        int n = 0;
        int m = 0;
        std::vector<CVector> h;                   // U^H h_k
        std::vector<CVector> center;              // U^H a(theta_k)
        std::vector<std::vector<CVector>> cover;  // U^H a(theta_c), centre excluded

        static ReducedSpace build(const BeamProblem& problem);
        bool has_complement() const { return m < n; }
    };
}

#endif
