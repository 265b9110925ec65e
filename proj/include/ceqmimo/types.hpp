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

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace ceqmimo
{

template <typename Scalar>
using MatrixXcT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorXcT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using cd = std::complex<double>;
using Index = Eigen::Index;
using CMatrix = MatrixXcT<double>;
using CVector = VectorXcT<double>;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Position of (user k, subcarrier n) in every stacked per-link vector.
constexpr Index stack_index(Index k, Index n, Index users) { return n * users + k; }

// Reshape a stacked vector (index n*K + k) into a K x N grid.
inline RMatrix as_user_grid(const RVector &stacked, Index users)
{
    return Eigen::Map<const RMatrix>(stacked.data(), users, stacked.size() / users);
}

} // namespace ceqmimo
