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

#include "isac/conic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace isac::conic
{
    namespace
    {
        constexpr double kInf = std::numeric_limits<double>::infinity();

        double dot_or_zero(const Eigen::VectorXd& a, const Eigen::VectorXd& x)
        {
            return a.size() == 0 ? 0.0 : a.dot(x);
        }
    }

    // ---- LogAffine ---------------------------------------------------------

    double LogAffine::value(const Eigen::VectorXd& x) const
    {
        double v = constant + dot_or_zero(linear, x);
        for (const auto& t : logs)
        {
            const double arg = t.a.dot(x) + t.b;
            if (!(arg > 0.0))
                return -kInf;
            v += t.weight * std::log(arg);
        }
        return v;
    }

    void LogAffine::add_gradient(const Eigen::VectorXd& x, double scale, Eigen::VectorXd& grad) const
    {
        if (linear.size() != 0)
            grad += scale * linear;
        for (const auto& t : logs)
            grad += (scale * t.weight / (t.a.dot(x) + t.b)) * t.a;
    }

    void LogAffine::add_hessian(const Eigen::VectorXd& x, double scale, Eigen::MatrixXd& hess) const
    {
        for (const auto& t : logs)
        {
            const double arg = t.a.dot(x) + t.b;
            hess.selfadjointView<Eigen::Lower>().rankUpdate(t.a, -scale * t.weight / (arg * arg));
        }
    }

    LogAffine LogAffine::padded(int extra) const
    {
        LogAffine out = *this;
        for (auto& t : out.logs)
        {
            t.a.conservativeResize(t.a.size() + extra);
            t.a.tail(extra).setZero();
        }
        if (out.linear.size() != 0)
        {
            out.linear.conservativeResize(out.linear.size() + extra);
            out.linear.tail(extra).setZero();
        }
        return out;
    }

    CMatrix LmiConstraint::evaluate(const Eigen::VectorXd& x) const
    {
        CMatrix F = constant;
        for (std::size_t j = 0; j < index.size(); ++j)
            F += x[index[j]] * coeff[j];
        return F;
    }

    double Problem::barrier_degree() const
    {
        double nu = static_cast<double>(linear.size() + concave.size());
        for (const auto& l : lmis)
            nu += static_cast<double>(l.constant.rows());
        return nu;
    }

    const char* to_string(Status s)
    {
        switch (s)
        {
        case Status::Optimal:
            return "optimal";
        case Status::Infeasible:
            return "infeasible";
        case Status::NumericalFailure:
            return "numerical_failure";
        }
        return "unknown";
    }

    double feasibility_margin(const Problem& p, const Eigen::VectorXd& x, bool include_relaxable)
    {
        double margin = kInf;
        for (const auto& c : p.linear)
            if (include_relaxable || !c.relaxable)
                margin = std::min(margin, c.a.dot(x) + c.b);
        for (const auto& c : p.concave)
            if (include_relaxable || !c.relaxable)
                margin = std::min(margin, c.f.value(x));
        for (const auto& l : p.lmis)
        {
            Eigen::SelfAdjointEigenSolver<CMatrix> es(l.evaluate(x), Eigen::EigenvaluesOnly);
            margin = std::min(margin, es.eigenvalues().minCoeff());
        }
        return margin;
    }

    namespace
    {
        // phi_t(x) = -t f0(x) - sum log(slacks) - sum log det F(x)
        class Barrier
        {
        public:
            explicit Barrier(const Problem& p) : p_(p)
            {
                const auto rows = static_cast<Eigen::Index>(p.linear.size());
                A_.resize(rows, p.num_vars);
                b_.resize(rows);
                for (Eigen::Index i = 0; i < rows; ++i)
                {
                    A_.row(i) = p.linear[i].a.transpose();
                    b_[i] = p.linear[i].b;
                }
                for (const auto& l : p.lmis)
                    sparse_.push_back(sparse_pattern(l));
            }

            /// Largest step in (0, 1] keeping every linear slack at least 1% of its current value.
            double max_linear_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) const
            {
                if (A_.rows() == 0)
                    return 1.0;
                const Eigen::VectorXd s = A_ * x + b_;
                const Eigen::VectorXd ds = A_ * dx;
                double step = 1.0;
                for (Eigen::Index i = 0; i < s.size(); ++i)
                    if (ds[i] < 0.0)
                        step = std::min(step, -0.99 * s[i] / ds[i]);
                return step;
            }

            double value(const Eigen::VectorXd& x, double t) const
            {
                const double f0 = p_.objective.value(x);
                if (!std::isfinite(f0))
                    return kInf;
                double phi = -t * f0;
                if (A_.rows() > 0)
                {
                    const Eigen::ArrayXd s = (A_ * x + b_).array();
                    if (!(s > 0.0).all())
                        return kInf;
                    phi -= s.log().sum();
                }
                for (const auto& c : p_.concave)
                {
                    const double s = c.f.value(x);
                    if (!(s > 0.0))
                        return kInf;
                    phi -= std::log(s);
                }
                for (const auto& l : p_.lmis)
                {
                    Eigen::LLT<CMatrix> llt(l.evaluate(x));
                    if (llt.info() != Eigen::Success)
                        return kInf;
                    const auto diag = llt.matrixLLT().diagonal().real();
                    if ((diag.array() <= 0.0).any())
                        return kInf;
                    phi -= 2.0 * diag.array().log().sum();
                }
                return std::isfinite(phi) ? phi : kInf;
            }

            void derivatives(const Eigen::VectorXd& x, double t, Eigen::VectorXd& g, Eigen::MatrixXd& H) const
            {
                const int n = p_.num_vars;
                g.setZero(n);
                H.setZero(n, n);
                p_.objective.add_gradient(x, -t, g);
                p_.objective.add_hessian(x, -t, H);

                if (A_.rows() > 0)
                {
                    const Eigen::VectorXd inv = (A_ * x + b_).cwiseInverse();
                    g -= A_.transpose() * inv;
                    const Eigen::MatrixXd scaled = inv.asDiagonal() * A_;
                    H.noalias() += scaled.transpose() * scaled;
                }

                Eigen::VectorXd gc(n);
                for (const auto& c : p_.concave)
                {
                    const double s = c.f.value(x);
                    gc.setZero();
                    c.f.add_gradient(x, 1.0, gc);
                    g -= gc / s;
                    H.selfadjointView<Eigen::Lower>().rankUpdate(gc, 1.0 / (s * s));
                    c.f.add_hessian(x, -1.0 / s, H);
                }

                for (std::size_t i = 0; i < p_.lmis.size(); ++i)
                {
                    if (sparse_[i].empty())
                        add_lmi(p_.lmis[i], x, g, H);
                    else
                        add_sparse_lmi(p_.lmis[i], sparse_[i], x, g, H);
                }

                H = H.selfadjointView<Eigen::Lower>();
            }

        private:
            struct Entry
            {
                Eigen::Index row;
                Eigen::Index col;
                cdouble value;
            };
            using Pattern = std::vector<std::vector<Entry>>;

            // Nonzeros of each coefficient matrix, or empty when any of them is dense.
            static Pattern sparse_pattern(const LmiConstraint& l)
            {
                Pattern pat;
                for (const auto& C : l.coeff)
                {
                    std::vector<Entry> nz;
                    for (Eigen::Index j = 0; j < C.cols(); ++j)
                        for (Eigen::Index i = 0; i < C.rows(); ++i)
                            if (C(i, j) != cdouble(0.0))
                                nz.push_back({i, j, C(i, j)});
                    if (nz.size() > 2)
                        return {};
                    pat.push_back(std::move(nz));
                }
                return pat;
            }

            // grad_a = -tr(Z C_a), H_ab = Re tr(Z C_a Z C_b) with Z = F^{-1}.
            static void add_sparse_lmi(const LmiConstraint& l, const Pattern& pat, const Eigen::VectorXd& x,
                                       Eigen::VectorXd& g, Eigen::MatrixXd& H)
            {
                const CMatrix F = l.evaluate(x);
                const Eigen::LLT<CMatrix> llt(F);
                const CMatrix Z = llt.solve(CMatrix::Identity(F.rows(), F.cols()));
                const auto terms = pat.size();
                for (std::size_t a = 0; a < terms; ++a)
                {
                    cdouble tr = 0.0;
                    for (const auto& e : pat[a])
                        tr += e.value * Z(e.col, e.row);
                    g[l.index[a]] -= tr.real();
                    for (std::size_t b = 0; b <= a; ++b)
                    {
                        cdouble acc = 0.0;
                        for (const auto& ea : pat[a])
                            for (const auto& eb : pat[b])
                                acc += ea.value * Z(ea.col, eb.row) * eb.value * Z(eb.col, ea.row);
                        const int r = std::max(l.index[a], l.index[b]);
                        const int c = std::min(l.index[a], l.index[b]);
                        H(r, c) += acc.real();
                        if (a != b && l.index[a] == l.index[b])
                            H(r, c) += acc.real();
                    }
                }
            }

            static void add_lmi(const LmiConstraint& l, const Eigen::VectorXd& x, Eigen::VectorXd& g,
                                Eigen::MatrixXd& H)
            {
                const Eigen::LLT<CMatrix> llt(l.evaluate(x));
                const auto L = llt.matrixL();
                const Eigen::Index m = l.constant.rows();
                const auto terms = static_cast<Eigen::Index>(l.index.size());
                // columns hold vec(L^{-1} F_j L^{-H})
                CMatrix stacked(m * m, terms);
                for (Eigen::Index j = 0; j < terms; ++j)
                {
                    const CMatrix half = L.solve(l.coeff[j]);
                    const CMatrix Gj = L.solve(half.adjoint());
                    stacked.col(j) = Eigen::Map<const CVector>(Gj.data(), m * m);
                    g[l.index[j]] -= Gj.trace().real();
                }
                const Eigen::MatrixXd gram = (stacked.adjoint() * stacked).real();
                for (Eigen::Index i = 0; i < terms; ++i)
                    for (Eigen::Index j = 0; j <= i; ++j)
                    {
                        const int a = std::max(l.index[i], l.index[j]);
                        const int b = std::min(l.index[i], l.index[j]);
                        H(a, b) += gram(i, j);
                        if (i != j && l.index[i] == l.index[j])
                            H(a, b) += gram(i, j);
                    }
            }

            const Problem& p_;
            Eigen::MatrixXd A_;
            Eigen::VectorXd b_;
            std::vector<Pattern> sparse_;
        };

        struct PathOutcome
        {
            Eigen::VectorXd x;
            double gap = kInf;
            int steps = 0;
            bool converged = false;
            bool stopped_early = false;
            bool stalled = false;
        };

        Eigen::VectorXd newton_direction(Eigen::MatrixXd H, const Eigen::VectorXd& g)
        {
            Eigen::LLT<Eigen::MatrixXd> llt(H);
            double reg = 0.0;
            const double scale = std::max(H.diagonal().cwiseAbs().maxCoeff(), 1e-300);
            while (llt.info() != Eigen::Success)
            {
                reg = reg == 0.0 ? 1e-14 * scale : reg * 100.0;
                if (reg > scale)
                    return Eigen::VectorXd::Zero(g.size());
                H.diagonal().array() += reg;
                llt.compute(H);
            }
            return -llt.solve(g);
        }

        PathOutcome follow_path(const Problem& p, Eigen::VectorXd x, const Options& opt,
                                const std::function<bool(const Eigen::VectorXd&)>& stop_early)
        {
            const Barrier barrier(p);
            const double nu = std::max(1.0, p.barrier_degree());
            double t = opt.t_init;
            PathOutcome out;
            Eigen::VectorXd g;
            Eigen::MatrixXd H;

            while (true)
            {
                bool centered = false;
                for (int it = 0; it < opt.max_newton_per_center; ++it)
                {
                    if (out.steps >= opt.max_newton_total)
                    {
                        out.x = x;
                        out.gap = nu / t;
                        out.stalled = true;
                        return out;
                    }
                    barrier.derivatives(x, t, g, H);
                    const Eigen::VectorXd dx = newton_direction(H, g);
                    const double dec2 = -g.dot(dx);
                    if (!(dec2 > 0.0) || dec2 / 2.0 <= opt.newton_tol)
                    {
                        centered = true;
                        break;
                    }
                    double step = barrier.max_linear_step(x, dx);
                    const double phi0 = barrier.value(x, t);
                    double phi1 = barrier.value(x + step * dx, t);
                    const double slack = 1e-11 * (1.0 + std::abs(phi0));
                    while (!(phi1 <= phi0 - 0.01 * step * dec2 + slack) && step > 1e-14)
                    {
                        step *= 0.5;
                        phi1 = barrier.value(x + step * dx, t);
                    }
                    ++out.steps;
                    if (step <= 1e-14)
                    {
                        centered = true;  // no further progress representable
                        break;
                    }
                    x += step * dx;
                    if (phi0 - phi1 <= 1e-13 * std::abs(phi0))
                    {
                        centered = true;  // decrease below the barrier's rounding level
                        break;
                    }
                    if (stop_early && stop_early(x))
                    {
                        out.x = x;
                        out.gap = nu / t;
                        out.stopped_early = true;
                        return out;
                    }
                }
                (void)centered;
                if (nu / t <= opt.gap_tol)
                {
                    out.x = x;
                    out.gap = nu / t;
                    out.converged = true;
                    return out;
                }
                t *= opt.t_growth;
            }
        }

        bool in_log_domain(const LogAffine& f, const Eigen::VectorXd& x)
        {
            return std::isfinite(f.value(x)) || f.logs.empty();
        }
    }

    Result maximize(const Problem& p, const Eigen::VectorXd& start, const Options& opt)
    {
        Result res;
        if (start.size() != p.num_vars)
        {
            res.detail = "start point has the wrong dimension";
            return res;
        }
        if (!in_log_domain(p.objective, start))
        {
            res.detail = "start point outside the objective's domain";
            return res;
        }
        for (const auto& c : p.concave)
            if (!in_log_domain(c.f, start))
            {
                res.detail = "start point outside a constraint's domain";
                return res;
            }
        if (!(feasibility_margin(p, start, false) > 0.0))
        {
            res.detail = "start point is not strictly feasible for the fixed constraints";
            return res;
        }

        Eigen::VectorXd x = start;
        double relax_margin = kInf;
        for (const auto& c : p.linear)
            if (c.relaxable)
                relax_margin = std::min(relax_margin, c.a.dot(x) + c.b);
        for (const auto& c : p.concave)
            if (c.relaxable)
                relax_margin = std::min(relax_margin, c.f.value(x));

        if (!(relax_margin > 0.0))
        {
            // phase I: maximize s subject to relaxed slacks >= s
            const int n = p.num_vars;
            Problem aux;
            aux.num_vars = n + 1;
            aux.objective.linear = Eigen::VectorXd::Zero(n + 1);
            aux.objective.linear[n] = 1.0;
            for (const auto& c : p.linear)
            {
                LinearConstraint lc{Eigen::VectorXd::Zero(n + 1), c.b, false};
                lc.a.head(n) = c.a;
                if (c.relaxable)
                    lc.a[n] = -1.0;
                aux.linear.push_back(std::move(lc));
            }
            LinearConstraint cap{Eigen::VectorXd::Zero(n + 1), 1.0, false};
            cap.a[n] = -1.0;
            aux.linear.push_back(std::move(cap));
            for (const auto& c : p.concave)
            {
                ConcaveConstraint cc{c.f.padded(1), false};
                if (c.relaxable)
                {
                    if (cc.f.linear.size() == 0)
                        cc.f.linear = Eigen::VectorXd::Zero(n + 1);
                    cc.f.linear[n] -= 1.0;
                }
                aux.concave.push_back(std::move(cc));
            }
            aux.lmis = p.lmis;

            Eigen::VectorXd x1(n + 1);
            x1.head(n) = x;
            x1[n] = relax_margin - 1.0;
            Options o1 = opt;
            o1.gap_tol = opt.gap_tol;
            const PathOutcome ph = follow_path(aux, x1, o1, [n](const Eigen::VectorXd& z) { return z[n] > 0.0; });
            res.phase_one = true;
            res.newton_steps += ph.steps;
            if (!ph.stopped_early)
            {
                res.x = ph.x.head(n);
                res.objective = p.objective.value(res.x);
                res.status = ph.converged ? Status::Infeasible : Status::NumericalFailure;
                res.detail = ph.converged ? "relaxed constraints cannot be met (phase I optimum <= 0)"
                                          : "phase I did not converge";
                return res;
            }
            x = ph.x.head(n);
        }

        const PathOutcome main = follow_path(p, x, opt, {});
        res.newton_steps += main.steps;
        res.x = main.x;
        res.gap = main.gap;
        res.objective = p.objective.value(main.x);
        if (main.converged)
        {
            res.status = Status::Optimal;
        }
        else
        {
            res.status = Status::NumericalFailure;
            res.detail = "Newton budget exhausted before reaching the gap tolerance";
        }
        return res;
    }
}
