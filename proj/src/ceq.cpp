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

#include "ceqmimo/ceq.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace ceqmimo
{

namespace
{

constexpr double pi = std::numbers::pi;

struct GaussLegendre64
{
    static constexpr int n = 64;
    std::array<double, n> x{};
    std::array<double, n> w{};

    GaussLegendre64()
    {
        for (int i = 0; i < n / 2; ++i)
        {
            double z = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it)
            {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j)
                {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
                }
                dp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16)
                    break;
            }
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

const GaussLegendre64 &gauss_legendre()
{
    static const GaussLegendre64 rule;
    return rule;
}

double clamped_asin(double v) { return std::asin(std::clamp(v, -1.0, 1.0)); }

void check_bits(int bits)
{
    if (bits == infinite_resolution)
        return;
    if (bits < 2)
        throw std::invalid_argument("CEQ resolution must be >= 2 bits or infinite");
    if (bits > 30)
        throw std::invalid_argument("CEQ resolution above 30 bits is not supported, use infinite");
}

} // namespace

double bussgang_zeta(int bits)
{
    check_bits(bits);
    if (bits == infinite_resolution)
        return std::sqrt(pi / 4.0);
    const double levels = std::ldexp(1.0, bits);
    return levels / (2.0 * std::sqrt(pi)) * std::sin(pi / levels);
}

double bussgang_zeta_bar(int bits)
{
    check_bits(bits);
    if (bits == infinite_resolution)
        return pi / 4.0;
    const double levels = std::ldexp(1.0, bits);
    const double s = std::sin(pi / levels);
    double acc = 0.0;
    for (long d = 0; d < (1L << (bits - 1)); ++d)
    {
        const double c = std::cos(2.0 * pi * double(d) / levels);
        acc += c * c;
    }
    return levels / pi * s * s * acc;
}

CeqConfig CeqConfig::with_bits(int b)
{
    if (b == infinite_resolution)
        return infinite();
    CeqConfig c;
    c.kind = CeqKind::finite;
    c.bits = b;
    c.zeta = bussgang_zeta(b);
    c.zeta_bar = bussgang_zeta_bar(b);
    return c;
}

CeqConfig CeqConfig::infinite()
{
    CeqConfig c;
    c.kind = CeqKind::infinite;
    c.bits = infinite_resolution;
    c.zeta = bussgang_zeta(infinite_resolution);
    c.zeta_bar = bussgang_zeta_bar(infinite_resolution);
    return c;
}

CeqConfig CeqConfig::ideal()
{
    CeqConfig c;
    c.kind = CeqKind::ideal;
    c.bits = infinite_resolution;
    c.zeta = 1.0;
    c.zeta_bar = 1.0;
    return c;
}

std::string CeqConfig::label() const
{
    switch (kind)
    {
    case CeqKind::finite:
        return std::to_string(bits);
    case CeqKind::infinite:
        return "inf";
    case CeqKind::ideal:
        return "ideal";
    }
    return {};
}

CeqConfig parse_ceq(const std::string &text)
{
    if (text == "inf" || text == "infinite")
        return CeqConfig::infinite();
    if (text == "ideal")
        return CeqConfig::ideal();
    std::size_t used = 0;
    int b = 0;
    try
    {
        b = std::stoi(text, &used);
    }
    catch (const std::exception &)
    {
        throw std::invalid_argument("invalid CEQ resolution '" + text + "'");
    }
    if (used != text.size() || b < 2)
        throw std::invalid_argument("invalid CEQ resolution '" + text + "'");
    return CeqConfig::with_bits(b);
}

cd arcsine_entry(cd rho, const CeqConfig &cfg)
{
    const double mag = std::abs(rho);
    if (mag > 1.0)
        rho /= mag;

    switch (cfg.kind)
    {
    case CeqKind::ideal:
        return rho;
    case CeqKind::infinite:
    {
        // 0.5 * int_0^pi e^{j phi} asin(Re(rho e^{-j phi})) d phi. The integrand has period pi, so the
        // panel is shifted to start at arg(rho), which puts the arcsine kinks on its endpoints.
        const auto &gl = gauss_legendre();
        const double start = std::arg(rho);
        cd acc = 0.0;
        for (int i = 0; i < GaussLegendre64::n; ++i)
        {
            const double phi = start + 0.5 * pi * (gl.x[i] + 1.0);
            const cd e = std::polar(1.0, phi);
            acc += gl.w[i] * e * clamped_asin((rho * std::conj(e)).real());
        }
        return 0.25 * pi * acc;
    }
    case CeqKind::finite:
        break;
    }
    const double levels = std::ldexp(1.0, cfg.bits);
    const double s = std::sin(pi / levels);
    cd acc = 0.0;
    for (long d = 0; d < (1L << (cfg.bits - 1)); ++d)
    {
        const cd e = std::polar(1.0, 2.0 * pi * double(d) / levels);
        acc += e * clamped_asin((rho * std::conj(e)).real());
    }
    return levels / pi * s * s * acc;
}

CMatrix arcsine_correlation(const CMatrix &r_hat, const CeqConfig &cfg)
{
    if (r_hat.rows() != r_hat.cols())
        throw std::invalid_argument("arcsine_correlation: matrix must be square");
    const Index n = r_hat.rows();
    for (Index i = 0; i < n; ++i)
    {
        if (std::abs(r_hat(i, i) - 1.0) > 1e-9)
            throw std::invalid_argument("arcsine_correlation: diagonal must be unit");
        for (Index j = 0; j < n; ++j)
            if (std::abs(r_hat(i, j)) > 1.0 + 1e-9)
                throw std::invalid_argument("arcsine_correlation: entry magnitude exceeds one");
    }
    CMatrix r_z(n, n);
    for (Index j = 0; j < n; ++j)
    {
        r_z(j, j) = 1.0;
        for (Index i = j + 1; i < n; ++i)
        {
            r_z(i, j) = arcsine_entry(r_hat(i, j), cfg);
            r_z(j, i) = std::conj(r_z(i, j));
        }
    }
    return r_z;
}

CMatrix quantization_noise_covariance(const CMatrix &r_x, const CeqConfig &cfg, NoiseModel mode)
{
    if (r_x.rows() != r_x.cols())
        throw std::invalid_argument("quantization_noise_covariance: matrix must be square");
    const Index n = r_x.rows();
    if (mode == NoiseModel::small_angle)
        return CMatrix::Identity(n, n) * (1.0 - cfg.zeta * cfg.zeta);

    RVector inv_sqrt(n);
    for (Index i = 0; i < n; ++i)
    {
        const double d = r_x(i, i).real();
        if (!(d > 0.0))
            throw std::domain_error("quantization_noise_covariance: zero diagonal entry (singular Bussgang gain)");
        inv_sqrt(i) = 1.0 / std::sqrt(d);
    }
    CMatrix r_hat = inv_sqrt.asDiagonal() * r_x * inv_sqrt.asDiagonal();
    r_hat.diagonal().setOnes();
    return arcsine_correlation(r_hat, cfg) - (cfg.zeta * cfg.zeta) * r_hat;
}

} // namespace ceqmimo
