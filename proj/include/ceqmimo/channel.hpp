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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ceqmimo/types.hpp"

namespace ceqmimo
{

struct ChannelConfig
{
    Index n_bs = 16;
    Index k_users = 4;
    Index n_sc = 16;
    Index l_taps = 4;
    double pdp_decay = 0.5;
    std::uint64_t seed = 1;
    double est_error = 0.0;
    double user_correlation = 0.0; // pairwise correlation coefficient across users

    void validate() const;
};

// Power-delay profile exp(-decay * l), normalized to unit sum.
RVector power_delay_profile(Index l_taps, double decay);

struct ChannelRealization
{
    std::vector<CMatrix> taps;     // L entries of n_bs x K
    std::vector<CMatrix> freq;     // N_SC entries of n_bs x K
    std::vector<CMatrix> freq_est; // transmitter-side estimate

    Index antennas() const { return taps.empty() ? 0 : taps.front().rows(); }
    Index users() const { return taps.empty() ? 0 : taps.front().cols(); }
    Index subcarriers() const { return Index(freq.size()); }
};

ChannelRealization generate(const ChannelConfig &cfg);

// Unnormalized N-point DFT along the tap axis: freq[n] = sum_l H_l exp(-j 2 pi n l / N).
std::vector<CMatrix> taps_to_frequency(const std::vector<CMatrix> &taps, Index n_sc);

ChannelRealization from_taps(std::vector<CMatrix> taps, Index n_sc);

enum class TransformDirection
{
    fft,
    ifft
};

// Unitary DFT along each row; the column count is the transform length.
CMatrix time_frequency_transform(const CMatrix &x, TransformDirection direction);

// Text tensor format: "ceqmimo-tensor <d0> <d1> <d2>" then d0*d1*d2 lines "re im", row-major.
void write_tensor(std::ostream &os, const std::vector<CMatrix> &tensor);
std::vector<CMatrix> read_tensor(std::istream &is);
void write_channel(const std::string &path, const ChannelRealization &ch);
ChannelRealization read_channel(const std::string &path);

// Per-active-subcarrier view consumed by the SQINR, coupling and solver code.
struct FreqChannels
{
    std::vector<CMatrix> h;  // n_bs x users per active subcarrier
    std::vector<Index> bins; // FFT bin of each active subcarrier
    Index n_fft = 0;
    double qn_weight = 0.0; // weight of the cross-subcarrier distortion sum

    Index antennas() const { return h.empty() ? 0 : h.front().rows(); }
    Index users() const { return h.empty() ? 0 : h.front().cols(); }
    Index subcarriers() const { return Index(h.size()); }
    Index links() const { return users() * subcarriers(); }

    // Total DL budget that maps to per-antenna power p_bs.
    double budget(double p_bs) const { return p_bs / qn_weight; }

    // Empty `active` means all bins are active.
    static FreqChannels from(const std::vector<CMatrix> &freq, const std::vector<Index> &active = {});
    FreqChannels single(Index n) const;
};

// Bins 0..n_sc-1 minus `guards` bins split evenly at both band edges around n_sc/2.
std::vector<Index> active_bins(Index n_sc, Index guards);

} // namespace ceqmimo
