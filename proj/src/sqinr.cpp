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

#include "ceqmimo/sqinr.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ceqmimo
{

namespace
{

void check_state(const PrecodingState &s, const FreqChannels &ch, bool need_q)
{
    if (Index(s.t.size()) != ch.subcarriers())
        throw std::invalid_argument("precoder subcarrier count does not match channel");
    for (const auto &t : s.t)
        if (t.rows() != ch.antennas() || t.cols() != s.streams())
            throw std::invalid_argument("precoder dimensions do not match channel");
    if (s.streams() < ch.users())
        throw std::invalid_argument("fewer precoder streams than users");
    if (need_q && s.q.size() != s.streams() * ch.subcarriers())
        throw std::invalid_argument("DL power vector has wrong length");
    if (s.has_dither() && Index(s.dither.size()) != ch.subcarriers())
        throw std::invalid_argument("dither factor count does not match channel");
}

double gain(const CVector &t, const CVector &h) { return std::norm(t.cwiseProduct(h).sum()); }

// sum_ij q_ij |t_ij|^2 elementwise: the per-antenna load of the stacked powers.
RVector antenna_load(const std::vector<CMatrix> &t, const RVector &pw)
{
    const Index streams = t.front().cols();
    RVector load = RVector::Zero(t.front().rows());
    for (std::size_t n = 0; n < t.size(); ++n)
        load += t[n].cwiseAbs2() * pw.segment(Index(n) * streams, streams);
    return load;
}

} // namespace

double dl_sqinr_approx(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys, Index k, Index n)
{
    check_state(s, ch, true);
    const Index S = s.streams();
    const CVector &h = ch.h[n].col(k);
    double mui = 0.0;
    for (Index i = 0; i < S; ++i)
        if (i != k)
            mui += s.q(n * S + i) * gain(s.t[n].col(i), h);
    const double qn = sys.ceq.distortion_factor() * ch.qn_weight * h.cwiseAbs2().dot(antenna_load(s.t, s.q));
    return s.q(n * S + k) * gain(s.t[n].col(k), h) / (mui + sys.noise_scale() + qn);
}

RVector dl_sqinr_approx(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys)
{
    check_state(s, ch, true);
    const Index K = ch.users(), S = s.streams();
    const RVector load = antenna_load(s.t, s.q);
    const double f = sys.ceq.distortion_factor() * ch.qn_weight;
    RVector out(ch.links());
    for (Index n = 0; n < ch.subcarriers(); ++n)
    {
        const RMatrix g = (s.t[n].transpose() * ch.h[n]).cwiseAbs2(); // g(i, k) = |t_i^T h_k|^2
        for (Index k = 0; k < K; ++k)
        {
            double mui = 0.0;
            for (Index i = 0; i < S; ++i)
                if (i != k)
                    mui += s.q(n * S + i) * g(i, k);
            const double qn = f * ch.h[n].col(k).cwiseAbs2().dot(load);
            out(stack_index(k, n, K)) = s.q(n * S + k) * g(k, k) / (mui + sys.noise_scale() + qn);
        }
    }
    return out;
}

RVector transmit_power_profile(const PrecodingState &s, const FreqChannels &ch)
{
    check_state(s, ch, true);
    RVector load = antenna_load(s.t, s.q);
    for (const auto &b : s.dither)
        load += b.cwiseAbs2().rowwise().sum();
    return ch.qn_weight * load;
}

std::vector<CMatrix> distortion_spectrum(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys,
                                         NoiseModel mode)
{
    check_state(s, ch, true);
    const Index M = ch.antennas(), NS = ch.subcarriers(), N = ch.n_fft, S = s.streams();
    const double zeta2 = sys.ceq.zeta * sys.ceq.zeta;
    if (mode == NoiseModel::small_angle)
        return std::vector<CMatrix>(NS, CMatrix::Identity(M, M) * (1.0 - zeta2));

    // Per-subcarrier input covariances C_n.
    std::vector<CMatrix> c(NS);
    for (Index n = 0; n < NS; ++n)
    {
        c[n] = s.t[n] * s.q.segment(n * S, S).cast<cd>().asDiagonal() * s.t[n].adjoint();
        if (s.has_dither())
            c[n] += s.dither[n] * s.dither[n].adjoint();
    }

    // Time-domain lag blocks B(d) = w sum_n exp(+j 2 pi bin_n d / N) C_n; B(N - d) = B(d)^H.
    const double two_pi = 2.0 * std::numbers::pi;
    auto lag_block = [&](Index d) {
        CMatrix b = CMatrix::Zero(M, M);
        for (Index n = 0; n < NS; ++n)
            b += std::polar(1.0, two_pi * double(ch.bins[n] * d % N) / double(N)) * c[n];
        return CMatrix(b * ch.qn_weight);
    };

    const CMatrix b0 = lag_block(0);
    RVector inv_sqrt(M);
    for (Index a = 0; a < M; ++a)
    {
        const double v = b0(a, a).real();
        if (!(v > 0.0))
            throw std::domain_error("degenerate precoder: an antenna carries no signal");
        inv_sqrt(a) = 1.0 / std::sqrt(v);
    }

    std::vector<CMatrix> eta(N);
    for (Index d = 0; d <= N / 2; ++d)
    {
        CMatrix r_hat = inv_sqrt.asDiagonal() * (d == 0 ? b0 : lag_block(d)) * inv_sqrt.asDiagonal();
        CMatrix r_z(M, M);
        if (d == 0)
        {
            r_hat.diagonal().setOnes();
            r_hat = (0.5 * (r_hat + r_hat.adjoint())).eval();
            r_z = arcsine_correlation(r_hat, sys.ceq);
        }
        else
        {
            for (Index j = 0; j < M; ++j)
                for (Index i = 0; i < M; ++i)
                    r_z(i, j) = arcsine_entry(r_hat(i, j), sys.ceq);
        }
        eta[d] = r_z - zeta2 * r_hat;
        if (d > 0 && N - d != d)
            eta[N - d] = eta[d].adjoint();
    }

    std::vector<CMatrix> g(NS, CMatrix::Zero(M, M));
    for (Index n = 0; n < NS; ++n)
    {
        for (Index d = 0; d < N; ++d)
            g[n] += std::polar(1.0, -two_pi * double(ch.bins[n] * d % N) / double(N)) * eta[d];
        g[n] = (0.5 * (g[n] + g[n].adjoint())).eval();
    }
    return g;
}

RVector dl_sqinr_exact(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys, NoiseModel mode)
{
    check_state(s, ch, true);
    const Index K = ch.users(), S = s.streams(), M = ch.antennas();
    const RVector profile = transmit_power_profile(s, ch);
    for (Index a = 0; a < M; ++a)
        if (!(profile(a) > 0.0))
            throw std::domain_error("degenerate precoder: an antenna carries no signal");
    const RVector q_pa = s.q_pa.size() == M ? s.q_pa : RVector(profile.cwiseSqrt());
    const std::vector<CMatrix> g = distortion_spectrum(s, ch, sys, mode);

    // Effective linear gain Q_pa * A with A = zeta * diag(profile)^(-1/2).
    const RVector lin = sys.ceq.zeta * q_pa.cwiseQuotient(profile.cwiseSqrt());

    RVector out(ch.links());
    for (Index n = 0; n < ch.subcarriers(); ++n)
    {
        const CMatrix heff = lin.cast<cd>().asDiagonal() * ch.h[n]; // column k: A Q_pa h_k
        const RMatrix pw = (s.t[n].transpose() * heff).cwiseAbs2(); // pw(i, k) = |h_k^T Q A t_i|^2
        for (Index k = 0; k < K; ++k)
        {
            const CVector hq = q_pa.cast<cd>().cwiseProduct(ch.h[n].col(k));
            double interference = sys.noise_power + (hq.transpose() * g[n] * hq.conjugate())(0, 0).real();
            for (Index i = 0; i < S; ++i)
                if (i != k)
                    interference += s.q(n * S + i) * pw(i, k);
            if (s.has_dither())
                interference += (heff.col(k).transpose() * s.dither[n]).squaredNorm();
            out(stack_index(k, n, K)) = s.q(n * S + k) * pw(k, k) / interference;
        }
    }
    return out;
}

double dl_sqinr_exact(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys, Index k, Index n,
                      NoiseModel mode)
{
    if (k < 0 || k >= ch.users() || n < 0 || n >= ch.subcarriers())
        throw std::out_of_range("dl_sqinr_exact: link index");
    return dl_sqinr_exact(s, ch, sys, mode)(stack_index(k, n, ch.users()));
}

double ul_sqinr(const CVector &t, const RVector &p, const FreqChannels &ch, const SystemConfig &sys, Index k,
                Index n)
{
    const Index K = ch.users();
    if (t.size() != ch.antennas() || p.size() != ch.links())
        throw std::invalid_argument("ul_sqinr: dimension mismatch");
    double mui = 0.0;
    for (Index i = 0; i < K; ++i)
        if (i != k)
            mui += p(stack_index(i, n, K)) * gain(t, ch.h[n].col(i));
    RVector load = RVector::Zero(ch.antennas());
    for (Index j = 0; j < ch.subcarriers(); ++j)
        load += ch.h[j].cwiseAbs2() * p.segment(j * K, K);
    const double qn = sys.ceq.distortion_factor() * ch.qn_weight * t.cwiseAbs2().dot(load);
    return p(stack_index(k, n, K)) * gain(t, ch.h[n].col(k)) / (mui + sys.noise_scale() + qn);
}

RVector ul_sqinr(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys)
{
    check_state(s, ch, false);
    if (s.streams() != ch.users())
        throw std::invalid_argument("ul_sqinr: stream count must equal user count");
    RVector out(ch.links());
    for (Index n = 0; n < ch.subcarriers(); ++n)
        for (Index k = 0; k < ch.users(); ++k)
            out(stack_index(k, n, ch.users())) = ul_sqinr(s.t[n].col(k), s.p, ch, sys, k, n);
    return out;
}

CouplingSystem build_coupling(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys,
                              CouplingVariant variant)
{
    check_state(s, ch, false);
    const Index K = ch.users(), NS = ch.subcarriers(), L = ch.links(), M = ch.antennas();
    if (s.streams() != K)
        throw std::invalid_argument("build_coupling: stream count must equal user count");
    if (s.targets.size() != L || (s.targets.array() <= 0.0).any())
        throw std::invalid_argument("build_coupling: targets must be positive, one per link");

    CouplingSystem c;
    c.sigma2 = sys.noise_power;
    c.zeta = sys.ceq.zeta;
    c.users = K;
    c.subcarriers = NS;
    c.d.resize(L);
    c.psi = RMatrix::Zero(L, L);

    RMatrix h2(M, L), t2(M, L);
    for (Index n = 0; n < NS; ++n)
    {
        const RMatrix g = (s.t[n].transpose() * ch.h[n]).cwiseAbs2(); // g(i, k) = |t_i^T h_k|^2
        for (Index k = 0; k < K; ++k)
        {
            const Index r = stack_index(k, n, K);
            if (!(g(k, k) > 0.0))
                throw std::domain_error("build_coupling: beamformer orthogonal to its channel");
            c.d(r) = s.targets(r) / g(k, k);
            for (Index i = 0; i < K; ++i)
                if (i != k)
                    c.psi(r, stack_index(i, n, K)) = g(i, k);
        }
        h2.middleCols(n * K, K) = ch.h[n].cwiseAbs2();
        t2.middleCols(n * K, K) = s.t[n].cwiseAbs2();
    }

    const double f = sys.ceq.distortion_factor();
    if (variant == CouplingVariant::full)
    {
        c.phi = (f * ch.qn_weight) * h2.transpose() * t2;
    }
    else
    {
        c.phi = RMatrix::Zero(L, L);
        const double w = f * ch.qn_weight * double(NS);
        for (Index n = 0; n < NS; ++n)
            c.phi.block(n * K, n * K, K, K) = w * h2.middleCols(n * K, K).transpose() * t2.middleCols(n * K, K);
    }
    return c;
}

RVector per_antenna_power(const PrecodingState &s, const FreqChannels &ch, PerAntennaMode mode, double p_bs)
{
    const Index M = ch.antennas();
    if (mode == PerAntennaMode::equal)
    {
        if (!(p_bs > 0.0))
            throw std::invalid_argument("per_antenna_power: p_bs must be positive");
        return RVector::Constant(M, std::sqrt(p_bs / double(M)));
    }
    check_state(s, ch, true);
    if ((s.q.array() < 0.0).any())
        throw std::invalid_argument("per_antenna_power: negative DL power");
    RVector profile = transmit_power_profile(s, ch);
    if (!(profile.sum() > 0.0))
        throw std::domain_error("per_antenna_power: all-zero DL power");
    if (s.has_dither())
        profile *= p_bs / profile.sum();
    return profile.cwiseSqrt();
}

} // namespace ceqmimo
