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

#include "ceqmimo/channel.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "ceqmimo/random.hpp"

namespace ceqmimo
{

void ChannelConfig::validate() const
{
    if (k_users < 1)
        throw std::invalid_argument("channel: k_users must be >= 1");
    if (l_taps < 1)
        throw std::invalid_argument("channel: l_taps must be >= 1");
    if (n_sc < l_taps)
        throw std::invalid_argument("channel: n_sc must be >= l_taps");
    if (n_bs < k_users)
        throw std::invalid_argument("channel: n_bs must be >= k_users");
    if (!(est_error >= 0.0 && est_error <= 1.0))
        throw std::invalid_argument("channel: est_error must lie in [0, 1]");
    if (!(pdp_decay >= 0.0))
        throw std::invalid_argument("channel: pdp_decay must be >= 0");
    if (k_users > 1 && !(user_correlation > -1.0 / double(k_users - 1) && user_correlation < 1.0))
        throw std::invalid_argument("channel: user_correlation outside the positive-definite range");
}

RVector power_delay_profile(Index l_taps, double decay)
{
    RVector pdp(l_taps);
    for (Index l = 0; l < l_taps; ++l)
        pdp(l) = std::exp(-decay * double(l));
    return pdp / pdp.sum();
}

std::vector<CMatrix> taps_to_frequency(const std::vector<CMatrix> &taps, Index n_sc)
{
    if (taps.empty() || Index(taps.size()) > n_sc)
        throw std::invalid_argument("taps_to_frequency: need 1 <= L <= N_SC taps");
    std::vector<CMatrix> freq(n_sc, CMatrix::Zero(taps.front().rows(), taps.front().cols()));
    for (Index n = 0; n < n_sc; ++n)
        for (std::size_t l = 0; l < taps.size(); ++l)
            freq[n] += std::polar(1.0, -2.0 * std::numbers::pi * double(n) * double(l) / double(n_sc)) * taps[l];
    return freq;
}

ChannelRealization from_taps(std::vector<CMatrix> taps, Index n_sc)
{
    ChannelRealization out;
    out.freq = taps_to_frequency(taps, n_sc);
    out.freq_est = out.freq;
    out.taps = std::move(taps);
    return out;
}

ChannelRealization generate(const ChannelConfig &cfg)
{
    cfg.validate();
    Rng rng = make_rng(cfg.seed);
    const RVector pdp = power_delay_profile(cfg.l_taps, cfg.pdp_decay);

    CMatrix color = CMatrix::Identity(cfg.k_users, cfg.k_users);
    if (cfg.user_correlation != 0.0)
    {
        RMatrix c = RMatrix::Constant(cfg.k_users, cfg.k_users, cfg.user_correlation);
        c.diagonal().setOnes();
        color = Eigen::LLT<RMatrix>(c).matrixL().toDenseMatrix().cast<cd>();
    }

    std::vector<CMatrix> taps(cfg.l_taps);
    for (Index l = 0; l < cfg.l_taps; ++l)
        taps[l] = std::sqrt(pdp(l)) * complex_normal_matrix(cfg.n_bs, cfg.k_users, rng) * color.transpose();

    ChannelRealization out = from_taps(std::move(taps), cfg.n_sc);
    if (cfg.est_error > 0.0)
    {
        const double keep = std::sqrt(1.0 - cfg.est_error * cfg.est_error);
        for (auto &h : out.freq_est)
            h = keep * h + cfg.est_error * complex_normal_matrix(h.rows(), h.cols(), rng);
    }
    return out;
}

CMatrix time_frequency_transform(const CMatrix &x, TransformDirection direction)
{
    const Index n = x.cols();
    if (n == 0)
        throw std::invalid_argument("time_frequency_transform: empty transform length");
    if (n == 1) // kissfft does not handle length 1
        return x;
    Eigen::FFT<double> fft;
    CMatrix out(x.rows(), n);
    CVector in_row(n), out_row(n);
    const double scale = std::sqrt(double(n));
    for (Index r = 0; r < x.rows(); ++r)
    {
        in_row = x.row(r).transpose();
        if (direction == TransformDirection::fft)
        {
            fft.fwd(out_row, in_row);
            out.row(r) = out_row.transpose() / scale;
        }
        else
        {
            fft.inv(out_row, in_row);
            out.row(r) = out_row.transpose() * scale;
        }
    }
    return out;
}

namespace
{

void append_double(std::string &s, double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    s.append(buf, res.ptr);
}

double parse_double(const std::string &tok)
{
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw std::runtime_error("read_tensor: malformed value '" + tok + "'");
    return v;
}

} // namespace

void write_tensor(std::ostream &os, const std::vector<CMatrix> &tensor)
{
    const Index d1 = tensor.empty() ? 0 : tensor.front().rows();
    const Index d2 = tensor.empty() ? 0 : tensor.front().cols();
    os << "ceqmimo-tensor " << tensor.size() << ' ' << d1 << ' ' << d2 << '\n';
    std::string line;
    for (const auto &m : tensor)
    {
        if (m.rows() != d1 || m.cols() != d2)
            throw std::invalid_argument("write_tensor: ragged tensor");
        for (Index i = 0; i < d1; ++i)
            for (Index j = 0; j < d2; ++j)
            {
                line.clear();
                append_double(line, m(i, j).real());
                line.push_back(' ');
                append_double(line, m(i, j).imag());
                line.push_back('\n');
                os << line;
            }
    }
}

std::vector<CMatrix> read_tensor(std::istream &is)
{
    std::string magic;
    long long d0 = -1, d1 = -1, d2 = -1;
    if (!(is >> magic >> d0 >> d1 >> d2) || magic != "ceqmimo-tensor" || d0 < 0 || d1 < 0 || d2 < 0)
        throw std::runtime_error("read_tensor: bad header");
    std::vector<CMatrix> out(d0, CMatrix(d1, d2));
    std::string re, im;
    for (auto &m : out)
        for (Index i = 0; i < d1; ++i)
            for (Index j = 0; j < d2; ++j)
            {
                if (!(is >> re >> im))
                    throw std::runtime_error("read_tensor: truncated data");
                m(i, j) = cd(parse_double(re), parse_double(im));
            }
    return out;
}

void write_channel(const std::string &path, const ChannelRealization &ch)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("write_channel: cannot open " + path);
    os << "taps\n";
    write_tensor(os, ch.taps);
    os << "freq\n";
    write_tensor(os, ch.freq);
    os << "freq_est\n";
    write_tensor(os, ch.freq_est);
}

ChannelRealization read_channel(const std::string &path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("read_channel: cannot open " + path);
    ChannelRealization ch;
    std::string name;
    for (auto *dst : {&ch.taps, &ch.freq, &ch.freq_est})
    {
        if (!(is >> name))
            throw std::runtime_error("read_channel: missing section");
        *dst = read_tensor(is);
    }
    return ch;
}

FreqChannels FreqChannels::from(const std::vector<CMatrix> &freq, const std::vector<Index> &active)
{
    if (freq.empty())
        throw std::invalid_argument("FreqChannels: no subcarriers");
    FreqChannels out;
    out.n_fft = Index(freq.size());
    out.qn_weight = 1.0 / double(out.n_fft);
    if (active.empty())
    {
        out.h = freq;
        for (Index n = 0; n < out.n_fft; ++n)
            out.bins.push_back(n);
        return out;
    }
    for (Index bin : active)
    {
        if (bin < 0 || bin >= out.n_fft)
            throw std::invalid_argument("FreqChannels: active bin out of range");
        out.h.push_back(freq[bin]);
        out.bins.push_back(bin);
    }
    return out;
}

FreqChannels FreqChannels::single(Index n) const
{
    if (n < 0 || n >= subcarriers())
        throw std::out_of_range("FreqChannels::single: subcarrier index");
    FreqChannels out;
    out.h = {h[n]};
    out.bins = {bins[n]};
    out.n_fft = n_fft;
    out.qn_weight = qn_weight * double(subcarriers());
    return out;
}

std::vector<Index> active_bins(Index n_sc, Index guards)
{
    if (guards < 0 || guards >= n_sc)
        throw std::invalid_argument("active_bins: guard count must lie in [0, n_sc)");
    // Guards occupy the band edges, which sit around bin n_sc/2 in FFT ordering.
    const Index lo = n_sc / 2 - guards / 2;
    const Index hi = lo + guards;
    std::vector<Index> out;
    for (Index n = 0; n < n_sc; ++n)
        if (n < lo || n >= hi)
            out.push_back(n);
    return out;
}

} // namespace ceqmimo
