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

#ifndef ISAC_PHY_HPP
#define ISAC_PHY_HPP

#include <span>
#include <vector>

#include "isac/types.hpp"

namespace isac::phy
{
    /// Transmit/receive uniform linear arrays sharing one element spacing.
    struct ArrayGeometry
    {
        int n_tx = 30;
        int n_rx = 30;
        double spacing = 0.5 * kSpeedOfLight / 30e9;
        double wavelength = kSpeedOfLight / 30e9;

        /// Geometry with spacing = spacing_wavelengths * lambda, lambda = c / carrier.
        static ArrayGeometry from_carrier(int n_tx, int n_rx, double carrier_hz, double spacing_wavelengths = 0.5);
        void validate() const;
    };

    CVector steering_vector(double theta, const ArrayGeometry& geom);

    /// LoS channel (alpha0 / d) exp(j 2 pi d / lambda) a(theta). Throws DomainError for d <= 0.
    CVector channel_vector(double theta, double d, const ArrayGeometry& geom, double alpha0);

    CMatrix omni_covariance(double p_total, int n_tx);

    double omni_sinr(double d, int num_objects, double alpha0, double p_total, double sigma_c2);

    /// |h^H w_k|^2 / (sum_{i != k} |h^H w_i|^2 + sigma_c2)
    double directional_sinr(const CVector& h, std::span<const CVector> beams, std::size_t k, double sigma_c2);

    double rate(double gamma);

    cdouble reflection_coeff(double d, cdouble rcs);

    double radar_snr_omni(cdouble beta, double p_total, double mf_gain, double sigma2);

    double radar_snr_dir(double theta, std::span<const CVector> beams, cdouble beta, double mf_gain, double sigma2,
                         const ArrayGeometry& geom);

    /// Real part of a^H(theta) W a(theta). Throws ContractViolation when W is not
    /// Hermitian PSD within tolerance.
    double beampattern_gain(const CMatrix& W, double theta, const ArrayGeometry& geom);

    /// Checks the BeamMatrix invariants: Hermitian within 1e-9 and
    /// eigenvalues >= -1e-8 trace. Throws ContractViolation on failure.
    void require_hermitian_psd(const CMatrix& W, const char* what = "beam matrix");

    /// Beampattern of W over a list of angles. OpenMP-parallel over angles.
    std::vector<double> beampattern_scan(const CMatrix& W, std::span<const double> thetas,
                                         const ArrayGeometry& geom);

    /// Single-threaded reference for beampattern_scan.
    std::vector<double> beampattern_scan_serial(const CMatrix& W, std::span<const double> thetas,
                                                const ArrayGeometry& geom);
}

#endif
