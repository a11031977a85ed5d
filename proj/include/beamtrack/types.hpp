/*
   Copyright 2026 The beamtrack Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Core>

namespace beamtrack {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

// Per-antenna complex weights or responses, length N_t.
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
inline constexpr Scalar kSpeedOfLight = Scalar(299792458.0);

template <typename Scalar>
inline constexpr Scalar kPi = std::numbers::pi_v<Scalar>;

} // namespace beamtrack
