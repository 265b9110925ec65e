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

#include <vector>

#include "ceqmimo/ceq.hpp"
#include "ceqmimo/channel.hpp"
#include "ceqmimo/precoding.hpp"

namespace ceqmimo
{

double dl_sqinr_approx(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys, Index k, Index n);

// All users of `ch`, stacked n * K + k.
RVector dl_sqinr_approx(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys);

// Distortion covariance seen on each active subcarrier, from the time-domain arcsine law.
std::vector<CMatrix> distortion_spectrum(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys,
                                         NoiseModel mode = NoiseModel::exact);

// Per-antenna input power diag((1/N) sum_n T_n Q_n T_n^H + dither).
RVector transmit_power_profile(const PrecodingState &s, const FreqChannels &ch);

RVector dl_sqinr_exact(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys,
                       NoiseModel mode = NoiseModel::exact);
double dl_sqinr_exact(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys, Index k, Index n,
                      NoiseModel mode = NoiseModel::exact);

double ul_sqinr(const CVector &t, const RVector &p, const FreqChannels &ch, const SystemConfig &sys, Index k,
                Index n);
RVector ul_sqinr(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys);

enum class CouplingVariant
{
    full,
    per_subcarrier
};

struct CouplingSystem
{
    RVector d;   // target / direct gain
    RMatrix psi; // MUI coupling
    RMatrix phi; // quantization coupling
    double sigma2 = 0.0;
    double zeta = 1.0;
    Index users = 0;
    Index subcarriers = 0;

    double noise_scale() const { return sigma2 / (zeta * zeta); }
    RMatrix interference() const { return psi + phi; }
    // D (Psi + Phi), transposed inside for the uplink.
    RMatrix dl_matrix() const { return d.asDiagonal() * interference(); }
    RMatrix ul_matrix() const { return d.asDiagonal() * interference().transpose(); }
};

CouplingSystem build_coupling(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys,
                              CouplingVariant variant = CouplingVariant::full);

enum class PerAntennaMode
{
    load_matched, // power per antenna follows its average load
    equal
};

// Diagonal of Q_pa. With dither present the load_matched profile is rescaled to trace p_bs.
RVector per_antenna_power(const PrecodingState &s, const FreqChannels &ch, PerAntennaMode mode, double p_bs);

} // namespace ceqmimo
