// SPDX-License-Identifier: Apache-2.0
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

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "ceqmimo/types.hpp"

namespace ceqmimo
{

// Sentinel resolution for the unit-modulus (phase-only, unquantized phase) CEQ.
inline constexpr int infinite_resolution = 0;

enum class CeqKind
{
    finite,   // b-bit phase quantizer
    infinite, // x / |x|
    ideal     // no DAC distortion, zeta = 1
};

double bussgang_zeta(int bits);

// Second-order Bussgang scalar evaluated from its own series (not from zeta).
double bussgang_zeta_bar(int bits);

struct CeqConfig
{
    CeqKind kind = CeqKind::finite;
    int bits = 2;
    double zeta = 0.0;
    double zeta_bar = 0.0;

    static CeqConfig with_bits(int b);
    static CeqConfig infinite();
    static CeqConfig ideal();

    // (1/zeta^2 - 1), the quantization-noise weight of the small-angle model.
    double distortion_factor() const { return 1.0 / (zeta * zeta) - 1.0; }
    int levels() const { return 1 << bits; }
    std::string label() const;
};

// Parse "2", "3", ..., "inf" or "ideal".
CeqConfig parse_ceq(const std::string &text);

template <typename Scalar>
std::complex<Scalar> quantize(const std::complex<Scalar> &x, const CeqConfig &cfg)
{
    constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    switch (cfg.kind)
    {
    case CeqKind::ideal:
        return x;
    case CeqKind::infinite:
    {
        const Scalar r = std::abs(x);
        return r > Scalar(0) ? x / r : std::complex<Scalar>(1, 0);
    }
    case CeqKind::finite:
        break;
    }
    const long levels = 1L << cfg.bits;
    long m = 0;
    if (x != std::complex<Scalar>(0, 0))
    {
        Scalar theta = std::atan2(x.imag(), x.real());
        if (theta < Scalar(0))
            theta += two_pi;
        // Region m is (2*pi*m/L, 2*pi*(m+1)/L]; a boundary goes to the lower index.
        m = static_cast<long>(std::ceil(theta * Scalar(levels) / two_pi)) - 1;
        if (m < 0)
            m = 0;
        if (m >= levels)
            m = levels - 1;
    }
    const Scalar phase = (std::numbers::pi_v<Scalar> + two_pi * Scalar(m)) / Scalar(levels);
    return std::polar(Scalar(1), phase);
}

// Elementwise quantization of any complex Eigen expression.
template <typename Derived>
auto quantize(const Eigen::MatrixBase<Derived> &x, const CeqConfig &cfg)
{
    using C = typename Derived::Scalar;
    return x.unaryExpr([cfg](const C &v) { return quantize(v, cfg); });
}

// Output correlation of two unit-variance jointly Gaussian inputs with correlation rho.
cd arcsine_entry(cd rho, const CeqConfig &cfg);

CMatrix arcsine_correlation(const CMatrix &r_hat, const CeqConfig &cfg);

enum class NoiseModel
{
    exact,
    small_angle
};

CMatrix quantization_noise_covariance(const CMatrix &r_x, const CeqConfig &cfg, NoiseModel mode);

} // namespace ceqmimo
