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

#include "isac/phy.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace isac::phy
{
    ArrayGeometry ArrayGeometry::from_carrier(int n_tx, int n_rx, double carrier_hz, double spacing_wavelengths)
    {
        ArrayGeometry g;
        g.n_tx = n_tx;
        g.n_rx = n_rx;
        g.wavelength = kSpeedOfLight / carrier_hz;
        g.spacing = spacing_wavelengths * g.wavelength;
        g.validate();
        return g;
    }

    void ArrayGeometry::validate() const
    {
        if (n_tx < 2 || n_rx < 1 || !(spacing > 0.0) || !(wavelength > 0.0))
            throw DomainError("array geometry requires N_t >= 2, N_r >= 1, positive spacing and wavelength");
    }

    CVector steering_vector(double theta, const ArrayGeometry& geom)
    {
        CVector a(geom.n_tx);
        const double step = 2.0 * kPi * geom.spacing / geom.wavelength * std::sin(theta);
        for (int m = 0; m < geom.n_tx; ++m)
            a[m] = std::polar(1.0, step * m);
        return a;
    }

    CVector channel_vector(double theta, double d, const ArrayGeometry& geom, double alpha0)
    {
        if (!(d > 0.0))
            throw DomainError("channel distance must be positive, got " + std::to_string(d));
        const cdouble gain = std::polar(alpha0 / d, 2.0 * kPi * d / geom.wavelength);
        return gain * steering_vector(theta, geom);
    }

    CMatrix omni_covariance(double p_total, int n_tx)
    {
        return CMatrix::Identity(n_tx, n_tx) * (p_total / n_tx);
    }

    double omni_sinr(double d, int num_objects, double alpha0, double p_total, double sigma_c2)
    {
        const double per_object = alpha0 * alpha0 * p_total / (d * d * num_objects);
        return per_object / (per_object * (num_objects - 1) + sigma_c2);
    }

    double directional_sinr(const CVector& h, std::span<const CVector> beams, std::size_t k, double sigma_c2)
    {
        double interference = 0.0;
        for (std::size_t i = 0; i < beams.size(); ++i)
            if (i != k)
                interference += std::norm(h.dot(beams[i]));
        return std::norm(h.dot(beams[k])) / (interference + sigma_c2);
    }

    double rate(double gamma) { return std::log2(1.0 + gamma); }

    cdouble reflection_coeff(double d, cdouble rcs) { return rcs / (d * d); }

    double radar_snr_omni(cdouble beta, double p_total, double mf_gain, double sigma2)
    {
        return p_total * mf_gain * std::norm(beta) / sigma2;
    }

    double radar_snr_dir(double theta, std::span<const CVector> beams, cdouble beta, double mf_gain, double sigma2,
                         const ArrayGeometry& geom)
    {
        const CVector a = steering_vector(theta, geom);
        double energy = 0.0;
        for (const auto& w : beams)
            energy += std::norm(a.dot(w));
        return mf_gain * std::norm(beta) * energy / sigma2;
    }

    void require_hermitian_psd(const CMatrix& W, const char* what)
    {
        if (W.rows() != W.cols())
            throw ContractViolation(std::string(what) + " is not square");
        const double asym = (W - W.adjoint()).cwiseAbs().maxCoeff();
        if (asym > 1e-9 * std::max(1.0, W.cwiseAbs().maxCoeff()))
            throw ContractViolation(std::string(what) + " is not Hermitian (asymmetry " + std::to_string(asym) + ")");
        const double tr = W.trace().real();
        Eigen::SelfAdjointEigenSolver<CMatrix> es(W, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-8 * std::max(tr, 0.0))
            throw ContractViolation(std::string(what) + " is not positive semidefinite");
    }

    namespace
    {
        double quad_form(const CMatrix& W, const CVector& a) { return a.dot(W * a).real(); }
    }

    double beampattern_gain(const CMatrix& W, double theta, const ArrayGeometry& geom)
    {
        require_hermitian_psd(W);
        return std::max(0.0, quad_form(W, steering_vector(theta, geom)));
    }

    std::vector<double> beampattern_scan(const CMatrix& W, std::span<const double> thetas, const ArrayGeometry& geom)
    {
        require_hermitian_psd(W);
        std::vector<double> out(thetas.size());
        const auto n = static_cast<std::ptrdiff_t>(thetas.size());
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i)
            out[i] = std::max(0.0, quad_form(W, steering_vector(thetas[i], geom)));
        return out;
    }

    std::vector<double> beampattern_scan_serial(const CMatrix& W, std::span<const double> thetas,
                                                const ArrayGeometry& geom)
    {
        require_hermitian_psd(W);
        std::vector<double> out;
        out.reserve(thetas.size());
        for (double th : thetas)
            out.push_back(std::max(0.0, quad_form(W, steering_vector(th, geom))));
        return out;
    }
}
