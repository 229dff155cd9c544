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

#ifndef ISAC_TYPES_HPP
#define ISAC_TYPES_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace isac
{
    using cdouble = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;
    using Vec3 = Eigen::Vector3d;
    using Mat3 = Eigen::Matrix3d;

    inline constexpr double kSpeedOfLight = 299792458.0;
    inline constexpr double kPi = std::numbers::pi;

    constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
    constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

    // Error hierarchy. Every failure the library reports derives from isac::Error.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class DomainError : public Error
    {
    public:
        using Error::Error;
    };

    class InvalidScenario : public Error
    {
    public:
        using Error::Error;
    };

    class DegenerateGeometry : public Error
    {
    public:
        using Error::Error;
    };

    class FilterDivergence : public Error
    {
    public:
        using Error::Error;
    };

    class ContractViolation : public Error
    {
    public:
        using Error::Error;
    };

    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };

    class SolverError : public Error
    {
    public:
        using Error::Error;
    };
}

#endif
