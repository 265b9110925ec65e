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

#include <optional>

#include "ceqmimo/sqinr.hpp"

namespace ceqmimo
{

enum class LinkDirection
{
    downlink,
    uplink
};

struct ExtendedCoupling
{
    RMatrix m;
    LinkDirection kind = LinkDirection::downlink;
    double p_budget = 0.0;
};

ExtendedCoupling build_extended(const CouplingSystem &c, LinkDirection kind, double p_budget);

struct PowerIterationOptions
{
    double tolerance = 1e-10; // relative Collatz-Wielandt gap
    int max_iterations = 10000;
    bool use_dense_solver = false;
};

struct Eigenpair
{
    double lambda = 0.0;
    RVector v; // strictly positive, last entry 1
    int iterations = 0;
};

Eigenpair dominant_eigenpair(const RMatrix &m, const PowerIterationOptions &opt = {});

struct PowerSolution
{
    double r_opt = 0.0;
    double lambda_max = 0.0;
    RVector power;
};

PowerSolution solve_power(const CouplingSystem &c, LinkDirection kind, double p_budget,
                          const PowerIterationOptions &opt = {});

// Powers meeting every target exactly, or nullopt when the targets are infeasible.
std::optional<RVector> fixed_target_power(const CouplingSystem &c, LinkDirection kind);

} // namespace ceqmimo
