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

#include "ceqmimo/linksim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ceqmimo/ceq.hpp"
#include "ceqmimo/metrics.hpp"
#include "ceqmimo/sqinr.hpp"

namespace ceqmimo
{

namespace
{

// Gray-labelled 4-PAM levels for the 16-QAM axes.
constexpr double pam4[4] = {-3.0, -1.0, 3.0, 1.0};

unsigned pam4_label(double v)
{
    if (v < -2.0)
        return 0;
    if (v < 0.0)
        return 1;
    if (v < 2.0)
        return 3;
    return 2;
}

} // namespace

int bits_per_symbol(Constellation c)
{
    switch (c)
    {
    case Constellation::qpsk:
        return 2;
    case Constellation::qam16:
        return 4;
    case Constellation::gaussian:
        break;
    }
    return 0;
}

cd modulate(Constellation c, unsigned label)
{
    switch (c)
    {
    case Constellation::qpsk:
        return cd(1.0 - 2.0 * double(label & 1u), 1.0 - 2.0 * double((label >> 1) & 1u)) / std::sqrt(2.0);
    case Constellation::qam16:
        return cd(pam4[label & 3u], pam4[(label >> 2) & 3u]) / std::sqrt(10.0);
    case Constellation::gaussian:
        break;
    }
    throw std::invalid_argument("modulate: Gaussian symbols have no labels");
}

unsigned demodulate(Constellation c, cd y)
{
    switch (c)
    {
    case Constellation::qpsk:
        return (y.real() < 0.0 ? 1u : 0u) | (y.imag() < 0.0 ? 2u : 0u);
    case Constellation::qam16:
    {
        const cd v = y * std::sqrt(10.0);
        return pam4_label(v.real()) | (pam4_label(v.imag()) << 2);
    }
    case Constellation::gaussian:
        break;
    }
    throw std::invalid_argument("demodulate: Gaussian symbols have no labels");
}

Constellation parse_constellation(const std::string &name)
{
    if (name == "gaussian")
        return Constellation::gaussian;
    if (name == "qpsk")
        return Constellation::qpsk;
    if (name == "qam16")
        return Constellation::qam16;
    throw std::invalid_argument("unknown constellation '" + name + "'");
}

void LinkConfig::validate(Index l_taps) const
{
    if (n_ofdm_symbols < 1)
        throw std::invalid_argument("linksim: n_ofdm_symbols must be >= 1");
    if (n_cp < l_taps - 1 || n_cp < 0)
        throw std::invalid_argument("linksim: cyclic prefix shorter than the channel memory");
    if (pilot_symbols < 1)
        throw std::invalid_argument("linksim: pilot_symbols must be >= 1");
    if (chunk < 1 || workers < 1)
        throw std::invalid_argument("linksim: chunk and workers must be >= 1");
    if (!(noise_power >= 0.0))
        throw std::invalid_argument("linksim: noise power must be >= 0");
}

CMatrix transmit(const CMatrix &symbols, const PrecodingState &st, const FreqChannels &view, const CeqConfig &ceq,
                 Index n_cp, Rng *dither_rng)
{
    const Index M = view.antennas(), NS = view.subcarriers(), N = view.n_fft, S = st.streams();
    if (symbols.rows() != S || symbols.cols() != NS || Index(st.t.size()) != NS || st.q_pa.size() != M)
        throw std::invalid_argument("transmit: dimension mismatch");

    CMatrix grid = CMatrix::Zero(M, N);
    for (Index n = 0; n < NS; ++n)
    {
        grid.col(view.bins[n]) =
            st.t[n] * (st.q.segment(n * S, S).cwiseSqrt().cast<cd>().cwiseProduct(symbols.col(n)));
        if (st.has_dither())
        {
            if (!dither_rng)
                throw std::invalid_argument("transmit: dither requires a random generator");
            grid.col(view.bins[n]) += st.dither[n] * complex_normal_matrix(st.dither[n].cols(), 1, *dither_rng);
        }
    }
    CMatrix x = time_frequency_transform(grid, TransformDirection::ifft);

    if (ceq.kind == CeqKind::ideal)
    {
        // Linear chain: unit-power normalization per antenna in place of the quantizer.
        const RVector profile = transmit_power_profile(st, view);
        x = profile.cwiseSqrt().cwiseInverse().cast<cd>().asDiagonal() * x;
    }
    else
    {
        x = quantize(x, ceq).eval();
    }
    x = st.q_pa.cast<cd>().asDiagonal() * x;

    CMatrix out(M, N + n_cp);
    out.leftCols(n_cp) = x.rightCols(n_cp);
    out.rightCols(N) = x;
    return out;
}

CMatrix receive(const CMatrix &tx, const std::vector<CMatrix> &taps, Index n_cp, double noise_power, Rng *rng)
{
    const Index L = Index(taps.size());
    const Index N = tx.cols() - n_cp;
    if (L == 0 || n_cp < L - 1 || N <= 0 || taps.front().rows() != tx.rows())
        throw std::invalid_argument("receive: dimension mismatch");
    const Index K = taps.front().cols();
    CMatrix y = CMatrix::Zero(K, N);
    for (Index l = 0; l < L; ++l)
        y.noalias() += taps[l].transpose() * tx.middleCols(n_cp - l, N);
    if (noise_power > 0.0)
    {
        if (!rng)
            throw std::invalid_argument("receive: noise requires a random generator");
        y += complex_normal_matrix(K, N, *rng, noise_power);
    }
    return time_frequency_transform(y, TransformDirection::fft);
}

namespace
{

struct Accumulator
{
    // Per (k, n): sum |y|^2, sum y s^*, sum |s|^2 over all symbols, and the same over the pilot block.
    RVector syy, sss, pss;
    CVector sys, pys;
    std::vector<long long> bit_errors, bits;

    explicit Accumulator(Index links, Index users)
        : syy(RVector::Zero(links)), sss(RVector::Zero(links)), pss(RVector::Zero(links)),
          sys(CVector::Zero(links)), pys(CVector::Zero(links)), bit_errors(users, 0), bits(users, 0)
    {
    }
};

// Pilot mode: the first pilot_symbols OFDM symbols of each chunk fix the detection scalar for that chunk.
// Genie mode: the scalar is fitted over the whole chunk, so received samples are kept until the end.
Accumulator run_chunk(const std::vector<CMatrix> &taps, const FreqChannels &view, const PrecodingState &st,
                      const CeqConfig &ceq, Index K, const LinkConfig &cfg, Index count,
                      std::uint64_t stream)
{
    const Index NS = view.subcarriers(), S = st.streams(), links = K * NS;
    Rng rng = make_rng(cfg.seed, stream);
    Accumulator acc(links, K);
    std::uniform_int_distribution<unsigned> label_dist(0, (1u << std::max(bits_per_symbol(cfg.constellation), 1)) - 1);
    const bool labelled = cfg.constellation != Constellation::gaussian;
    const bool genie = cfg.scaling == DetectionScaling::genie;
    const Index pilots = genie ? count : std::min(cfg.pilot_symbols, count);

    CMatrix sym(S, NS);
    std::vector<unsigned> labels(links);
    std::vector<cd> kept_y;
    std::vector<unsigned> kept_labels;
    if (genie && labelled)
    {
        kept_y.reserve(std::size_t(count * links));
        kept_labels.reserve(std::size_t(count * links));
    }

    auto detect = [&](Index r, cd y, unsigned label) {
        const cd g = acc.pys(r) / acc.pss(r);
        const unsigned got = demodulate(cfg.constellation, y / g);
        acc.bit_errors[r % K] += std::popcount(got ^ label);
        acc.bits[r % K] += bits_per_symbol(cfg.constellation);
    };

    for (Index s = 0; s < count; ++s)
    {
        for (Index n = 0; n < NS; ++n)
            for (Index i = 0; i < S; ++i)
            {
                if (i < K && labelled)
                {
                    const unsigned lab = label_dist(rng);
                    labels[stack_index(i, n, K)] = lab;
                    sym(i, n) = modulate(cfg.constellation, lab);
                }
                else
                {
                    sym(i, n) = complex_normal(rng);
                }
            }
        const CMatrix tx = transmit(sym, st, view, ceq, cfg.n_cp, &rng);
        const CMatrix y = receive(tx, taps, cfg.n_cp, cfg.noise_power, &rng);
        for (Index n = 0; n < NS; ++n)
            for (Index k = 0; k < K; ++k)
            {
                const Index r = stack_index(k, n, K);
                const cd yy = y(k, view.bins[n]);
                const cd ss = sym(k, n);
                acc.syy(r) += std::norm(yy);
                acc.sss(r) += std::norm(ss);
                acc.sys(r) += yy * std::conj(ss);
                if (s < pilots)
                {
                    acc.pss(r) += std::norm(ss);
                    acc.pys(r) += yy * std::conj(ss);
                }
                if (!labelled)
                    continue;
                if (genie)
                {
                    kept_y.push_back(yy);
                    kept_labels.push_back(labels[r]);
                }
                else if (s >= pilots)
                {
                    detect(r, yy, labels[r]);
                }
            }
    }
    for (std::size_t i = 0; i < kept_y.size(); ++i)
        detect(Index(i % std::size_t(links)), kept_y[i], kept_labels[i]);
    return acc;
}

} // namespace

LinkSimReport simulate(const std::vector<CMatrix> &taps, const FreqChannels &view, const PrecodingState &st,
                       const CeqConfig &ceq, Index real_users, const LinkConfig &cfg)
{
    cfg.validate(Index(taps.size()));
    const Index K = real_users, NS = view.subcarriers(), links = K * NS;
    if (K < 1 || K > st.streams() || taps.front().cols() != K)
        throw std::invalid_argument("simulate: user count mismatch");

    const Index n_chunks = (cfg.n_ofdm_symbols + cfg.chunk - 1) / cfg.chunk;
    std::vector<Accumulator> parts(n_chunks, Accumulator(links, K));
    auto work = [&](Index c) {
        const Index first = c * cfg.chunk;
        const Index count = std::min(cfg.chunk, cfg.n_ofdm_symbols - first);
        parts[c] = run_chunk(taps, view, st, ceq, K, cfg, count, std::uint64_t(c));
    };
    if (cfg.workers <= 1 || n_chunks <= 1)
    {
        for (Index c = 0; c < n_chunks; ++c)
            work(c);
    }
    else
    {
        std::vector<std::thread> pool;
        const Index w = std::min<Index>(cfg.workers, n_chunks);
        for (Index id = 0; id < w; ++id)
            pool.emplace_back([&, id] {
                for (Index c = id; c < n_chunks; c += w)
                    work(c);
            });
        for (auto &th : pool)
            th.join();
    }

    // Deterministic merge in chunk order.
    Accumulator total(links, K);
    for (const auto &p : parts)
    {
        total.syy += p.syy;
        total.sss += p.sss;
        total.sys += p.sys;
        for (Index k = 0; k < K; ++k)
        {
            total.bit_errors[k] += p.bit_errors[k];
            total.bits[k] += p.bits[k];
        }
    }

    LinkSimReport rep;
    rep.users = K;
    rep.symbols = cfg.n_ofdm_symbols;
    rep.empirical_sqinr.resize(links);
    RVector err_k = RVector::Zero(K), sig_k = RVector::Zero(K);
    for (Index r = 0; r < links; ++r)
    {
        const cd g = total.sys(r) / total.sss(r);
        const double signal = std::norm(g) * total.sss(r);
        const double residual = std::max(total.syy(r) - signal, 0.0);
        rep.empirical_sqinr(r) = residual > 0.0 ? signal / residual : std::numeric_limits<double>::infinity();
        err_k(r % K) += residual;
        sig_k(r % K) += signal;
    }
    rep.evm = (err_k.cwiseQuotient(sig_k)).cwiseSqrt();
    rep.ber.resize(K);
    for (Index k = 0; k < K; ++k)
        rep.ber(k) = total.bits[k] > 0 ? double(total.bit_errors[k]) / double(total.bits[k])
                                       : std::numeric_limits<double>::quiet_NaN();
    const RVector finite = rep.empirical_sqinr.unaryExpr([](double v) { return std::isfinite(v) ? v : 1e300; });
    rep.sum_rate = sum_rate(finite, K);
    rep.min_rate = min_rate(finite, K);
    return rep;
}

void write_linksim_csv_header(std::ostream &os)
{
    os << "realization_id,algorithm,row,user,subcarrier,empirical_sqinr,analytical_sqinr,ber,evm\n";
}

void write_linksim_csv(std::ostream &os, const LinkSimReport &rep, const RVector &analytical, Index subcarriers,
                       const std::string &realization, const std::string &algorithm)
{
    const Index K = rep.users;
    for (Index n = 0; n < subcarriers; ++n)
        for (Index k = 0; k < K; ++k)
        {
            const Index r = stack_index(k, n, K);
            os << realization << ',' << algorithm << ",link," << k << ',' << n << ',' << rep.empirical_sqinr(r)
               << ',' << (analytical.size() > r ? analytical(r) : std::numeric_limits<double>::quiet_NaN())
               << ",,\n";
        }
    for (Index k = 0; k < K; ++k)
        os << realization << ',' << algorithm << ",user," << k << ",,,," << rep.ber(k) << ',' << rep.evm(k)
           << '\n';
}

} // namespace ceqmimo
