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

#include "isac/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace isac::beamform
{
    void BeamProblem::validate() const
    {
        geom.validate();
        const std::size_t K = channels.size();
        if (K == 0)
            throw DomainError("beam problem needs at least one object");
        if (theta.size() != K || sigma_theta.size() != K || rate_floor.size() != K || coverage_slack.size() != K)
            throw DomainError("beam problem arrays must all have one entry per object");
        if (!(p_total > 0.0) || !(sigma_c2 > 0.0) || !(resolution > 0.0) || !(coverage_multiplier >= 0.0))
            throw DomainError("beam problem requires P_T > 0, sigma_C^2 > 0, resolution > 0 and l >= 0");
        for (std::size_t k = 0; k < K; ++k)
        {
            if (channels[k].size() != geom.n_tx)
                throw DomainError("channel length does not match N_t");
            if (!(rate_floor[k] >= 0.0))
                throw DomainError("rate floors must be non-negative");
            if (!(coverage_slack[k] > 0.0))
                throw DomainError("coverage slack must be positive");
            if (!(sigma_theta[k] >= 0.0))
                throw DomainError("pointing std must be non-negative");
        }
    }

    std::vector<double> build_coverage_grid(double theta_bar, double sigma_theta, double l, double resolution)
    {
        if (!(resolution > 0.0))
            throw DomainError("coverage grid resolution must be positive");
        const double half = std::max(l * sigma_theta, resolution);
        const auto steps = static_cast<int>(std::floor(half / resolution + 1e-9));
        std::vector<double> grid;
        const bool exact = std::abs(steps * resolution - half) <= 1e-9 * half;
        if (!exact)
            grid.push_back(theta_bar - half);
        for (int j = -steps; j <= steps; ++j)
            grid.push_back(theta_bar + j * resolution);
        if (!exact)
            grid.push_back(theta_bar + half);
        return grid;
    }

    // ---- rates -----------------------------------------------------------------

    namespace
    {
        double quad(const CMatrix& W, const CVector& h) { return h.dot(W * h).real(); }
    }

    SurrogateExpansion SurrogateExpansion::build(const std::vector<CMatrix>& point,
                                                 const std::vector<CVector>& channels, double sigma_c2)
    {
        SurrogateExpansion ex;
        ex.point = point;
        const std::size_t K = channels.size();
        for (std::size_t k = 0; k < K; ++k)
        {
            double interference = 0.0;
            for (std::size_t i = 0; i < K; ++i)
                if (i != k)
                    interference += quad(point[i], channels[k]);
            ex.interference.push_back(interference);
            ex.X.push_back((std::log2(std::exp(1.0)) / (interference + sigma_c2)) *
                           (channels[k] * channels[k].adjoint()));
        }
        return ex;
    }

    double true_rate(const std::vector<CMatrix>& W, std::size_t k, const std::vector<CVector>& channels,
                     double sigma_c2)
    {
        double total = 0.0;
        double interference = 0.0;
        for (std::size_t i = 0; i < W.size(); ++i)
        {
            const double g = quad(W[i], channels[k]);
            total += g;
            if (i != k)
                interference += g;
        }
        return std::log2(total + sigma_c2) - std::log2(interference + sigma_c2);
    }

    double sum_rate(const std::vector<CMatrix>& W, const std::vector<CVector>& channels, double sigma_c2)
    {
        double s = 0.0;
        for (std::size_t k = 0; k < channels.size(); ++k)
            s += true_rate(W, k, channels, sigma_c2);
        return s;
    }

    double surrogate_rate(const std::vector<CMatrix>& W, const SurrogateExpansion& expansion, std::size_t k,
                          const std::vector<CVector>& channels, double sigma_c2)
    {
        double total = 0.0;
        double linear = 0.0;
        for (std::size_t i = 0; i < W.size(); ++i)
        {
            total += quad(W[i], channels[k]);
            if (i != k)
                linear += (expansion.X[k] * (W[i] - expansion.point[i])).trace().real();
        }
        return std::log2(total + sigma_c2) - std::log2(expansion.interference[k] + sigma_c2) - linear;
    }

    const char* to_string(SolveStatus s)
    {
        switch (s)
        {
        case SolveStatus::Optimal:
            return "optimal";
        case SolveStatus::Infeasible:
            return "infeasible";
        case SolveStatus::SolverFailure:
            return "solver_failure";
        case SolveStatus::NearRankOneFailure:
            return "near_rank_one_failure";
        }
        return "unknown";
    }

    // ---- reduced space -----------------------------------------------------------

    ReducedSpace ReducedSpace::build(const BeamProblem& problem)
    {
        const int n = problem.geom.n_tx;
        const std::size_t K = problem.size();
        std::vector<CVector> cols;
        std::vector<std::vector<double>> grids(K);
        const double norm_a = std::sqrt(static_cast<double>(n));
        for (std::size_t k = 0; k < K; ++k)
        {
            cols.push_back(problem.channels[k].normalized());
            cols.push_back(phy::steering_vector(problem.theta[k], problem.geom) / norm_a);
            if (std::isfinite(problem.coverage_slack[k]) && !problem.coverage_center_only)
            {
                for (double c : build_coverage_grid(problem.theta[k], problem.sigma_theta[k],
                                                    problem.coverage_multiplier, problem.resolution))
                    if (std::abs(c - problem.theta[k]) > 1e-12)
                    {
                        grids[k].push_back(c);
                        cols.push_back(phy::steering_vector(c, problem.geom) / norm_a);
                    }
            }
        }
        CMatrix A(n, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j)
            A.col(static_cast<Eigen::Index>(j)) = cols[j];

        Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU);
        const auto& sv = svd.singularValues();
        int m = 0;
        while (m < sv.size() && sv[m] > 1e-9 * sv[0])
            ++m;

        ReducedSpace rs;
        rs.n = n;
        rs.m = m;
        rs.U = svd.matrixU().leftCols(m);
        for (std::size_t k = 0; k < K; ++k)
        {
            rs.h.push_back(rs.U.adjoint() * problem.channels[k]);
            rs.center.push_back(rs.U.adjoint() * phy::steering_vector(problem.theta[k], problem.geom));
            std::vector<CVector> cover;
            for (double c : grids[k])
                cover.push_back(rs.U.adjoint() * phy::steering_vector(c, problem.geom));
            rs.cover.push_back(std::move(cover));
        }
        return rs;
    }

    namespace
    {
        // Hermitian m x m matrices in an orthonormal real basis: diagonal
        // entries first, then (sqrt2 Re, sqrt2 Im) of each upper entry.
        Eigen::VectorXd herm_coords(const CMatrix& A)
        {
            const auto m = A.rows();
            Eigen::VectorXd c(m * m);
            Eigen::Index idx = 0;
            for (Eigen::Index i = 0; i < m; ++i)
                c[idx++] = A(i, i).real();
            for (Eigen::Index i = 0; i < m; ++i)
                for (Eigen::Index j = i + 1; j < m; ++j)
                {
                    c[idx++] = std::sqrt(2.0) * A(i, j).real();
                    c[idx++] = std::sqrt(2.0) * A(i, j).imag();
                }
            return c;
        }

        CMatrix herm_matrix(const Eigen::Ref<const Eigen::VectorXd>& y, int m)
        {
            CMatrix Y(m, m);
            Eigen::Index idx = 0;
            for (int i = 0; i < m; ++i)
                Y(i, i) = y[idx++];
            const double s = 1.0 / std::sqrt(2.0);
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                {
                    Y(i, j) = cdouble(y[idx], y[idx + 1]) * s;
                    Y(j, i) = std::conj(Y(i, j));
                    idx += 2;
                }
            return Y;
        }

        std::vector<CMatrix> herm_basis(int m)
        {
            std::vector<CMatrix> basis;
            for (int i = 0; i < m; ++i)
            {
                CMatrix B = CMatrix::Zero(m, m);
                B(i, i) = 1.0;
                basis.push_back(B);
            }
            const double s = 1.0 / std::sqrt(2.0);
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                {
                    CMatrix R = CMatrix::Zero(m, m);
                    R(i, j) = R(j, i) = s;
                    basis.push_back(R);
                    CMatrix I = CMatrix::Zero(m, m);
                    I(i, j) = cdouble(0.0, s);
                    I(j, i) = cdouble(0.0, -s);
                    basis.push_back(I);
                }
            return basis;
        }

        struct Layout
        {
            int K = 0;
            int m = 0;
            int n = 0;
            bool has_t = false;
            bool has_r = false;

            int block() const { return m * m + (has_t ? 1 : 0); }
            int y(int k) const { return k * block(); }
            int t(int k) const { return k * block() + m * m; }
            int r() const { return K * block(); }
            int num() const { return K * block() + (has_r ? 1 : 0); }
        };

        struct IrmTerms
        {
            std::vector<CMatrix> Q;  // m x (m-1) per object
            double weight = 0.0;
            double cap = 0.0;
        };

        conic::LogAffine surrogate_term(const ReducedSpace& rs, const BeamProblem& bp,
                                        const SurrogateExpansion& ex, const Layout& L, int k)
        {
            const double P = bp.p_total;
            const double s2 = bp.sigma_c2;
            const Eigen::VectorXd ck = herm_coords(rs.h[k] * rs.h[k].adjoint());
            const double I = ex.interference[k];
            const double coef = std::log2(std::exp(1.0)) / (I + s2);

            conic::LogAffine f;
            conic::LogTerm lt;
            lt.weight = 1.0 / std::log(2.0);
            lt.a = Eigen::VectorXd::Zero(L.num());
            lt.b = 1.0;
            f.linear = Eigen::VectorXd::Zero(L.num());
            const int mm = L.m * L.m;
            for (int i = 0; i < L.K; ++i)
            {
                lt.a.segment(L.y(i), mm) = (P / s2) * ck;
                if (i != k)
                    f.linear.segment(L.y(i), mm) = -coef * P * ck;
            }
            f.logs.push_back(std::move(lt));
            f.constant = std::log2(s2) - std::log2(I + s2) + coef * I;
            return f;
        }

        conic::Problem assemble(const ReducedSpace& rs, const BeamProblem& bp, const SurrogateExpansion& ex,
                                const Layout& L, const std::vector<CMatrix>& basis, const IrmTerms* irm)
        {
            conic::Problem p;
            p.num_vars = L.num();
            const int N = L.num();
            const int mm = L.m * L.m;
            const Eigen::VectorXd tr = herm_coords(CMatrix::Identity(L.m, L.m));

            p.objective.linear = Eigen::VectorXd::Zero(N);
            for (int k = 0; k < L.K; ++k)
            {
                conic::LogAffine f = surrogate_term(rs, bp, ex, L, k);
                for (const auto& lt : f.logs)
                    p.objective.logs.push_back(lt);
                p.objective.linear += f.linear;
                p.objective.constant += f.constant;

                f.constant -= bp.rate_floor[k];
                p.concave.push_back({std::move(f), true});
            }

            conic::LinearConstraint power{Eigen::VectorXd::Zero(N), 1.0, false};
            for (int k = 0; k < L.K; ++k)
            {
                power.a.segment(L.y(k), mm) = -tr;
                if (L.has_t)
                {
                    power.a[L.t(k)] = -1.0;
                    conic::LinearConstraint tpos{Eigen::VectorXd::Zero(N), 0.0, false};
                    tpos.a[L.t(k)] = 1.0;
                    p.linear.push_back(std::move(tpos));
                }
            }
            p.linear.push_back(std::move(power));

            for (int k = 0; k < L.K; ++k)
            {
                const double B = bp.coverage_slack[k];
                if (!std::isfinite(B) || rs.cover[k].empty())
                    continue;
                const Eigen::VectorXd g0 = herm_coords(rs.center[k] * rs.center[k].adjoint());
                for (const auto& ac : rs.cover[k])
                {
                    const Eigen::VectorXd diff = g0 - herm_coords(ac * ac.adjoint());
                    for (double sign : {-1.0, 1.0})
                    {
                        conic::LinearConstraint c{Eigen::VectorXd::Zero(N), 0.0, false};
                        c.a.segment(L.y(k), mm) = B * tr + sign * diff;
                        if (L.has_t)
                            c.a[L.t(k)] = B;
                        p.linear.push_back(std::move(c));
                    }
                }
            }

            for (int k = 0; k < L.K; ++k)
            {
                conic::LmiConstraint lmi;
                lmi.constant = CMatrix::Zero(L.m, L.m);
                for (int l = 0; l < mm; ++l)
                {
                    lmi.index.push_back(L.y(k) + l);
                    lmi.coeff.push_back(basis[l]);
                }
                p.lmis.push_back(std::move(lmi));
            }

            if (irm)
            {
                p.objective.linear[L.r()] -= irm->weight;
                conic::LinearConstraint rpos{Eigen::VectorXd::Zero(N), 0.0, false};
                rpos.a[L.r()] = 1.0;
                p.linear.push_back(std::move(rpos));
                conic::LinearConstraint cap{Eigen::VectorXd::Zero(N), irm->cap, false};
                cap.a[L.r()] = -1.0;
                p.linear.push_back(std::move(cap));
                for (int k = 0; k < L.K; ++k)
                {
                    if (L.has_t)
                    {
                        conic::LinearConstraint tc{Eigen::VectorXd::Zero(N), 0.0, false};
                        tc.a[L.r()] = static_cast<double>(L.n - L.m);
                        tc.a[L.t(k)] = -1.0;
                        p.linear.push_back(std::move(tc));
                    }
                    if (L.m < 2)
                        continue;
                    const CMatrix& Q = irm->Q[k];
                    conic::LmiConstraint lmi;
                    lmi.constant = CMatrix::Zero(L.m - 1, L.m - 1);
                    lmi.index.push_back(L.r());
                    lmi.coeff.push_back(CMatrix::Identity(L.m - 1, L.m - 1));
                    for (int l = 0; l < mm; ++l)
                    {
                        lmi.index.push_back(L.y(k) + l);
                        lmi.coeff.push_back(-(Q.adjoint() * basis[l] * Q));
                    }
                    p.lmis.push_back(std::move(lmi));
                }
            }
            return p;
        }

        Eigen::VectorXd flat_start(const Layout& L)
        {
            Eigen::VectorXd x = Eigen::VectorXd::Zero(L.num());
            const double budget = 0.5 / L.K;
            for (int k = 0; k < L.K; ++k)
            {
                const double t = L.has_t ? 0.1 * budget : 0.0;
                const double c = (budget - t) / L.m;
                for (int i = 0; i < L.m; ++i)
                    x[L.y(k) + i] = c;
                if (L.has_t)
                    x[L.t(k)] = t;
            }
            return x;
        }

        std::vector<CMatrix> to_full(const ReducedSpace& rs, const Layout& L, const Eigen::VectorXd& x, double P)
        {
            std::vector<CMatrix> W;
            const CMatrix proj = CMatrix::Identity(rs.n, rs.n) - rs.U * rs.U.adjoint();
            for (int k = 0; k < L.K; ++k)
            {
                const CMatrix Y = herm_matrix(x.segment(L.y(k), L.m * L.m), L.m);
                CMatrix Wk = rs.U * Y * rs.U.adjoint();
                if (L.has_t)
                    Wk += (x[L.t(k)] / (rs.n - rs.m)) * proj;
                Wk = 0.5 * (Wk + Wk.adjoint()).eval();
                W.push_back(P * Wk);
            }
            return W;
        }

        SolveStatus map_status(conic::Status s)
        {
            switch (s)
            {
            case conic::Status::Optimal:
                return SolveStatus::Optimal;
            case conic::Status::Infeasible:
                return SolveStatus::Infeasible;
            default:
                return SolveStatus::SolverFailure;
            }
        }

        double lambda2(const CMatrix& Y)
        {
            if (Y.rows() < 2)
                return 0.0;
            Eigen::SelfAdjointEigenSolver<CMatrix> es(Y, Eigen::EigenvaluesOnly);
            return std::max(0.0, es.eigenvalues()[Y.rows() - 2]);
        }
    }

    SubproblemResult solve_convex_subproblem(const BeamProblem& problem, const SurrogateExpansion& expansion,
                                             const conic::Options& opt)
    {
        problem.validate();
        const ReducedSpace rs = ReducedSpace::build(problem);
        Layout L;
        L.K = static_cast<int>(problem.size());
        L.m = rs.m;
        L.n = rs.n;
        L.has_t = rs.has_complement();
        const auto basis = herm_basis(L.m);
        const conic::Problem p = assemble(rs, problem, expansion, L, basis, nullptr);

        const conic::Result r = conic::maximize(p, flat_start(L), opt);
        SubproblemResult out;
        out.status = map_status(r.status);
        out.detail = r.detail;
        out.gap = r.gap;
        out.newton_steps = r.newton_steps;
        out.objective = r.objective;
        if (r.x.size() == L.num())
            out.W = to_full(rs, L, r.x, problem.p_total);
        return out;
    }

    BeamProblem relaxed(const BeamProblem& problem, const Relaxation& r)
    {
        BeamProblem out = problem;
        const double scale = std::ldexp(1.0, -r.gamma_halvings);
        for (auto& g : out.rate_floor)
            g *= scale;
        out.coverage_center_only = problem.coverage_center_only || r.center_only;
        return out;
    }

    std::vector<CMatrix> mrt_initialization(const BeamProblem& problem)
    {
        std::vector<CMatrix> W;
        const double K = static_cast<double>(problem.size());
        for (double th : problem.theta)
        {
            const CVector a = phy::steering_vector(th, problem.geom);
            W.push_back((problem.p_total / K / problem.geom.n_tx) * (a * a.adjoint()));
        }
        return W;
    }

    BeamSolution solve_sca(const BeamProblem& problem, const std::vector<CMatrix>& init, const ScaOptions& opt)
    {
        problem.validate();
        BeamSolution sol;
        BeamProblem eff = problem;
        SurrogateExpansion ex = SurrogateExpansion::build(init, problem.channels, problem.sigma_c2);

        SubproblemResult first;
        while (true)
        {
            first = solve_convex_subproblem(eff, ex, opt.conic);
            sol.subproblem_status.emplace_back(to_string(first.status));
            if (first.status == SolveStatus::Optimal)
                break;
            if (first.status != SolveStatus::Infeasible)
                throw SolverError("first SCA subproblem failed: " + first.detail);
            if (sol.relaxation.gamma_halvings < 3)
            {
                ++sol.relaxation.gamma_halvings;
                sol.relaxations.push_back("rate floors halved (" + std::to_string(sol.relaxation.gamma_halvings) +
                                          ")");
            }
            else if (!sol.relaxation.center_only && !problem.coverage_center_only)
            {
                sol.relaxation.center_only = true;
                sol.relaxations.emplace_back("coverage reduced to grid centre");
            }
            else
            {
                throw SolverError("SCA subproblem infeasible after the relaxation ladder");
            }
            eff = relaxed(problem, sol.relaxation);
        }

        std::vector<CMatrix> current = first.W;
        std::vector<CMatrix> anchor = init;
        double obj = sum_rate(current, problem.channels, problem.sigma_c2);
        sol.sca_trace.push_back(obj);
        sol.sca_iterations = 1;

        for (int q = 2; q <= opt.max_iter; ++q)
        {
            ex = SurrogateExpansion::build(current, problem.channels, problem.sigma_c2);
            const SubproblemResult r = solve_convex_subproblem(eff, ex, opt.conic);
            sol.subproblem_status.emplace_back(to_string(r.status));
            if (r.status != SolveStatus::Optimal)
            {
                sol.warnings.push_back("SCA stopped at iteration " + std::to_string(q) + ": " + to_string(r.status));
                break;
            }
            const double next = sum_rate(r.W, problem.channels, problem.sigma_c2);
            if (next < obj - 1e-6)
            {
                sol.warnings.push_back("SCA iterate " + std::to_string(q) + " decreased the sum rate; rejected");
                break;
            }
            anchor = current;
            current = r.W;
            sol.sca_trace.push_back(next);
            sol.sca_iterations = q;
            const bool done = std::abs(next - obj) < opt.rel_tol * std::max(std::abs(obj), 1e-12);
            obj = next;
            if (done)
                break;
        }
        sol.W = std::move(current);
        sol.expansion_point = std::move(anchor);
        sol.status = SolveStatus::Optimal;
        return sol;
    }

    BeamSolution solve_irm(const BeamSolution& sca_out, const BeamProblem& problem, const IrmOptions& opt)
    {
        BeamSolution sol = sca_out;
        const BeamProblem eff = relaxed(problem, sca_out.relaxation);
        eff.validate();
        for (const auto& W : sca_out.W)
            phy::require_hermitian_psd(W, "SCA output");

        const ReducedSpace rs = ReducedSpace::build(eff);
        Layout L;
        L.K = static_cast<int>(eff.size());
        L.m = rs.m;
        L.n = rs.n;
        L.has_t = rs.has_complement();
        L.has_r = true;
        const auto basis = herm_basis(L.m);
        const double P = eff.p_total;
        const SurrogateExpansion ex = SurrogateExpansion::build(sca_out.expansion_point, eff.channels, eff.sigma_c2);

        // current iterate in scaled reduced coordinates
        Eigen::VectorXd x = Eigen::VectorXd::Zero(L.num());
        std::vector<CMatrix> Y(L.K);
        for (int k = 0; k < L.K; ++k)
        {
            const CMatrix Wk = sca_out.W[k] / P;
            Y[k] = rs.U.adjoint() * Wk * rs.U;
            Y[k] = 0.5 * (Y[k] + Y[k].adjoint()).eval();
            x.segment(L.y(k), L.m * L.m) = herm_coords(Y[k]);
            if (L.has_t)
                x[L.t(k)] = std::max(0.0, Wk.trace().real() - Y[k].trace().real());
        }

        auto rank_gap = [&](const Eigen::VectorXd& z, const std::vector<CMatrix>& Ys) {
            double g = 0.0;
            for (int k = 0; k < L.K; ++k)
            {
                g = std::max(g, lambda2(Ys[k]));
                if (L.has_t)
                    g = std::max(g, z[L.t(k)] / (L.n - L.m));
            }
            return g;
        };

        const double threshold = opt.threshold / eff.geom.n_tx;
        const double slack = 1e-9 / P;
        double r_prev = rank_gap(x, Y);
        sol.irm_trace = {P * r_prev};
        sol.irm_iterations = 0;
        sol.status = SolveStatus::Optimal;
        bool reached = r_prev < threshold;

        for (int p = 1; p <= opt.max_iter && !reached; ++p)
        {
            IrmTerms terms;
            terms.weight = opt.w0 * std::pow(opt.rho, p);
            terms.cap = r_prev + slack;
            for (int k = 0; k < L.K; ++k)
            {
                Eigen::SelfAdjointEigenSolver<CMatrix> es(Y[k]);
                terms.Q.push_back(es.eigenvectors().leftCols(std::max(L.m - 1, 0)));
            }
            const conic::Problem prob = assemble(rs, eff, ex, L, basis, &terms);
            x[L.r()] = 0.5 * (rank_gap(x, Y) + terms.cap);

            const conic::Result res = conic::maximize(prob, x, opt.conic);
            sol.subproblem_status.emplace_back(conic::to_string(res.status));
            if (res.status != conic::Status::Optimal)
            {
                sol.warnings.push_back("IRM stopped at iteration " + std::to_string(p) + ": " + res.detail);
                break;
            }
            x = res.x;
            for (int k = 0; k < L.K; ++k)
                Y[k] = herm_matrix(x.segment(L.y(k), L.m * L.m), L.m);
            r_prev = x[L.r()];
            sol.irm_trace.push_back(P * r_prev);
            sol.irm_iterations = p;
            reached = r_prev < threshold;
        }

        x[L.r()] = 0.0;

        sol.W = to_full(rs, L, x, P);
        sol.r_final = P * r_prev;
        double worst = 0.0;
        for (const auto& W : sol.W)
        {
            Eigen::SelfAdjointEigenSolver<CMatrix> es(W, Eigen::EigenvaluesOnly);
            const auto& ev = es.eigenvalues();
            const double l1 = ev[ev.size() - 1];
            if (l1 > 0.0 && ev.size() > 1)
                worst = std::max(worst, std::max(0.0, ev[ev.size() - 2]) / l1);
        }
        sol.eig_ratio = worst;
        if (!reached)
            sol.status = SolveStatus::NearRankOneFailure;
        return sol;
    }

    BeamSolution design(const BeamProblem& problem, const ScaOptions& sca, const IrmOptions& irm)
    {
        const BeamSolution s = solve_sca(problem, mrt_initialization(problem), sca);
        BeamSolution out = solve_irm(s, problem, irm);
        out.w.clear();
        for (const auto& W : out.W)
            out.w.push_back(extract_beamvector(W));
        compute_residuals(out, problem);
        return out;
    }

    CVector extract_beamvector(const CMatrix& W)
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(W);
        const auto n = W.rows();
        const double l1 = std::max(0.0, es.eigenvalues()[n - 1]);
        CVector u = es.eigenvectors().col(n - 1);
        // fix the global phase so the largest entry is real and positive
        Eigen::Index imax = 0;
        u.cwiseAbs().maxCoeff(&imax);
        if (std::abs(u[imax]) > 0.0)
            u *= std::conj(u[imax]) / std::abs(u[imax]);
        return std::sqrt(l1) * u;
    }

    std::vector<double> waterfill_powers(const std::vector<double>& gains, double p_total, double sigma_c2)
    {
        const std::size_t K = gains.size();
        std::vector<double> floor(K);
        for (std::size_t k = 0; k < K; ++k)
            floor[k] = sigma_c2 / gains[k];
        std::vector<std::size_t> order(K);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return floor[a] < floor[b]; });

        double level = 0.0;
        for (std::size_t active = K; active >= 1; --active)
        {
            double acc = p_total;
            for (std::size_t j = 0; j < active; ++j)
                acc += floor[order[j]];
            level = acc / static_cast<double>(active);
            if (level > floor[order[active - 1]])
                break;
        }
        std::vector<double> p(K);
        for (std::size_t k = 0; k < K; ++k)
            p[k] = std::max(0.0, level - floor[k]);
        return p;
    }

    BeamSolution waterfill_mrt(const std::vector<double>& theta, const std::vector<double>& distance,
                               double p_total, double sigma_c2, double alpha0, const phy::ArrayGeometry& geom)
    {
        if (theta.empty() || theta.size() != distance.size())
            throw DomainError("water-filling needs one distance per angle and at least one object");
        std::vector<double> gains;
        for (double d : distance)
            gains.push_back(geom.n_tx * alpha0 * alpha0 / (d * d));
        const std::vector<double> p = waterfill_powers(gains, p_total, sigma_c2);
        BeamSolution sol;
        const double norm = std::sqrt(static_cast<double>(geom.n_tx));
        for (std::size_t k = 0; k < theta.size(); ++k)
        {
            const CVector w = std::sqrt(p[k]) * phy::steering_vector(theta[k], geom) / norm;
            sol.w.push_back(w);
            sol.W.push_back(w * w.adjoint());
        }
        return sol;
    }

    BeamSolution omni_precoder(double p_total, const phy::ArrayGeometry& geom)
    {
        BeamSolution sol;
        sol.W.push_back(phy::omni_covariance(p_total, geom.n_tx));
        const double amp = std::sqrt(p_total / geom.n_tx);
        for (int i = 0; i < geom.n_tx; ++i)
        {
            CVector e = CVector::Zero(geom.n_tx);
            e[i] = amp;
            sol.w.push_back(e);
        }
        return sol;
    }

    void compute_residuals(BeamSolution& sol, const BeamProblem& problem)
    {
        const BeamProblem eff = relaxed(problem, sol.relaxation);
        double power = -eff.p_total;
        double cover = -std::numeric_limits<double>::infinity();
        double rate = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < sol.W.size(); ++k)
        {
            const CMatrix& W = sol.W[k];
            const double tr = W.trace().real();
            power += tr;
            rate = std::max(rate, eff.rate_floor[k] - true_rate(sol.W, k, eff.channels, eff.sigma_c2));
            if (!std::isfinite(eff.coverage_slack[k]) || eff.coverage_center_only)
                continue;
            const double g0 = quad(W, phy::steering_vector(eff.theta[k], eff.geom));
            for (double c : build_coverage_grid(eff.theta[k], eff.sigma_theta[k], eff.coverage_multiplier,
                                                eff.resolution))
            {
                const double gc = quad(W, phy::steering_vector(c, eff.geom));
                cover = std::max(cover, std::abs(g0 - gc) - eff.coverage_slack[k] * tr);
            }
        }
        sol.power_residual = power;
        sol.coverage_residual = std::isfinite(cover) ? cover : 0.0;
        sol.rate_residual = rate;
    }
}
