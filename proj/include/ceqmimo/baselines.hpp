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

#include "ceqmimo/power.hpp"
#include "ceqmimo/precoding.hpp"
#include "ceqmimo/sqinr.hpp"

namespace ceqmimo
{

// T_n = H_n^* (H_n^T H_n^*)^{-1}, columns normalized.
std::vector<CMatrix> zf_precoder(const FreqChannels &ch);

// T_n = H_n^* (H_n^T H_n^* + alpha I)^{-1}, columns normalized.
std::vector<CMatrix> rzf_precoder(const FreqChannels &ch, double alpha);

// Fixed beamformers with balanced DL powers and the given per-antenna rule.
BeamformingSolution fixed_beamformer_solution(const FreqChannels &ch, std::vector<CMatrix> t, const RVector &targets,
                                              const SystemConfig &sys, PerAntennaMode mode,
                                              const PowerIterationOptions &opt = {});

BeamformingSolution zf_opt_power(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys);
BeamformingSolution zf_equal_power(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys);

// sigma_d times an orthonormal basis of null(H_n^T), per subcarrier; empty when N_BS == K.
std::vector<CMatrix> null_space_dither(const FreqChannels &ch, double sigma_d);

struct ZfDitherResult
{
    BeamformingSolution solution;
    double ratio = 0.0; // chosen sigma_d^2 relative to the mean per-antenna signal power
    std::vector<double> evaluated_min_sqinr;
};

// ZF Opt-Pwr plus null-space Gaussian dither; grid entries are sigma_d^2 ratios.
ZfDitherResult zf_gaussian_dither(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys,
                                  const std::vector<double> &ratio_grid);

enum class UnquantizedPrecoder
{
    zf,
    rzf
};

// Infinite-resolution reference (zeta = 1, no distortion). A negative alpha selects K sigma^2 / P_BS.
BeamformingSolution unquantized_zf_rzf(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys,
                                       UnquantizedPrecoder kind, double alpha = -1.0);

} // namespace ceqmimo
