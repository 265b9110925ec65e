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

#include "ceqmimo/channel.hpp"
#include "ceqmimo/precoding.hpp"
#include "ceqmimo/random.hpp"

namespace ceqmimo
{

enum class Constellation
{
    gaussian, // unit-variance circular Gaussian, no bit labels
    qpsk,
    qam16
};

int bits_per_symbol(Constellation c);
cd modulate(Constellation c, unsigned label);
unsigned demodulate(Constellation c, cd y);
Constellation parse_constellation(const std::string &name);

enum class DetectionScaling
{
    pilot, // scalar from the first pilot_symbols of each chunk; the rest are detected
    genie  // least-squares scalar over the whole chunk; every symbol is detected
};

struct LinkConfig
{
    Constellation constellation = Constellation::qpsk;
    Index n_ofdm_symbols = 10000;
    Index n_cp = 8;
    Index pilot_symbols = 16; // OFDM symbols per pilot block used for the detection scalar
    DetectionScaling scaling = DetectionScaling::pilot;
    double noise_power = 1.0;
    std::uint64_t seed = 1;
    Index chunk = 1024; // OFDM symbols per RNG substream
    int workers = 1;

    void validate(Index l_taps) const;
};

struct LinkSimReport
{
    RVector empirical_sqinr; // true users, stacked n * K + k over active subcarriers
    RVector ber;             // per user; NaN for Gaussian symbols
    RVector evm;             // per user
    double sum_rate = 0.0;
    double min_rate = 0.0;
    Index symbols = 0;
    Index users = 0;
};

// One OFDM symbol. `symbols` is streams x active subcarriers. Returns n_bs x (n_fft + n_cp) samples.
CMatrix transmit(const CMatrix &symbols, const PrecodingState &st, const FreqChannels &view, const CeqConfig &ceq,
                 Index n_cp, Rng *dither_rng = nullptr);

// Linear convolution with the taps, CP removal, AWGN and unitary FFT. Returns K x n_fft.
CMatrix receive(const CMatrix &tx, const std::vector<CMatrix> &taps, Index n_cp, double noise_power, Rng *rng);

// `view` supplies the active bins of the true channel; `taps` are the true time-domain taps.
LinkSimReport simulate(const std::vector<CMatrix> &taps, const FreqChannels &view, const PrecodingState &st,
                       const CeqConfig &ceq, Index real_users, const LinkConfig &cfg);

void write_linksim_csv_header(std::ostream &os);
void write_linksim_csv(std::ostream &os, const LinkSimReport &rep, const RVector &analytical, Index subcarriers,
                       const std::string &realization, const std::string &algorithm);

} // namespace ceqmimo
