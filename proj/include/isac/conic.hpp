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

#ifndef ISAC_CONIC_HPP
#define ISAC_CONIC_HPP

#include <string>
#include <vector>

#include "isac/types.hpp"

// Small dense interior-point solver for the beamforming subproblems.
//
// Problems have the form
//
//   maximize    f0(x)
//   subject to  a_j . x + b_j >= 0               (linear)
//               f_c(x) >= 0                       (concave, log-affine)
//               F0 + sum_i x_i F_i  >= 0 (PSD)    (Hermitian LMI blocks)
//
// where every f is log-affine: sum_l w_l log(a_l . x + b_l) + g . x + c with
// w_l > 0. The solver follows the log-barrier central path with damped Newton
// centering and certifies its result with the barrier duality gap nu / t.
// Constraints flagged `relaxable` may be violated at the start point; a
// phase-I problem then searches for a strictly feasible point first.

namespace isac::conic
{
    struct LogTerm
    {
        double weight = 1.0;
        Eigen::VectorXd a;
        double b = 0.0;
    };

    /// sum_l w_l log(a_l . x + b_l) + linear . x + constant (concave for w_l > 0).
    struct LogAffine
    {
        std::vector<LogTerm> logs;
        Eigen::VectorXd linear;  // empty means zero
        double constant = 0.0;

        /// -inf outside the log domain.
        double value(const Eigen::VectorXd& x) const;
        void add_gradient(const Eigen::VectorXd& x, double scale, Eigen::VectorXd& grad) const;
        /// Adds scale * Hessian to the lower triangle of `hess` (the Hessian itself
        /// is negative semidefinite).
        void add_hessian(const Eigen::VectorXd& x, double scale, Eigen::MatrixXd& hess) const;
        /// Extends every coefficient vector with `extra` trailing zeros.
        LogAffine padded(int extra) const;
    };

    struct LinearConstraint
    {
        Eigen::VectorXd a;
        double b = 0.0;
        bool relaxable = false;
    };

    struct ConcaveConstraint
    {
        LogAffine f;
        bool relaxable = true;
    };

    /// F0 + sum_j x[index[j]] * coeff[j] must be Hermitian positive semidefinite.
    struct LmiConstraint
    {
        CMatrix constant;
        std::vector<int> index;
        std::vector<CMatrix> coeff;

        CMatrix evaluate(const Eigen::VectorXd& x) const;
    };

    struct Problem
    {
        int num_vars = 0;
        LogAffine objective;
        std::vector<LinearConstraint> linear;
        std::vector<ConcaveConstraint> concave;
        std::vector<LmiConstraint> lmis;

        /// Barrier parameter nu (number of scalar barriers plus LMI sizes).
        double barrier_degree() const;
    };

    enum class Status
    {
        Optimal,
        Infeasible,
        NumericalFailure
    };

    const char* to_string(Status s);

    struct Options
    {
        double gap_tol = 1e-8;         // absolute, in objective units
        double t_growth = 16.0;
        double t_init = 1.0;
        double newton_tol = 1e-9;      // lambda^2 / 2
        int max_newton_per_center = 60;
        int max_newton_total = 1500;
    };

    struct Result
    {
        Status status = Status::NumericalFailure;
        Eigen::VectorXd x;
        double objective = 0.0;
        double gap = 0.0;
        int newton_steps = 0;
        bool phase_one = false;
        std::string detail;
    };

    /// Margin by which x satisfies every constraint (min linear/concave slack,
    /// min LMI eigenvalue). Non-positive means x is not strictly feasible.
    double feasibility_margin(const Problem& p, const Eigen::VectorXd& x, bool include_relaxable = true);

    /// Maximizes p.objective. `start` must be strictly feasible for every
    /// non-relaxable constraint and inside the domain of every log term.
    Result maximize(const Problem& p, const Eigen::VectorXd& start, const Options& opt = {});
}

#endif
