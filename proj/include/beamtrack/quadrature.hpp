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

#include <cmath>
#include <limits>

#include "beamtrack/errors.hpp"
#include "beamtrack/types.hpp"

namespace beamtrack {

template <typename Scalar>
struct QuadratureRule {
    RealVector<Scalar> nodes;
    RealVector<Scalar> weights;
};

/// n-point Gauss-Legendre rule on [a, b]; nodes ascending.
/// Roots of P_n by Newton iteration from the Tricomi initial guess.
template <typename Scalar>
QuadratureRule<Scalar> gauss_legendre(int n, Scalar a, Scalar b) {
    using std::abs;
    using std::cos;
    if (n < 1)
        throw DomainError("gauss_legendre: need at least one node");
    if (!(b > a))
        throw DomainError("gauss_legendre: need a < b");
    QuadratureRule<Scalar> rule{RealVector<Scalar>(n), RealVector<Scalar>(n)};
    const Scalar mid = (a + b) / Scalar(2);
    const Scalar half = (b - a) / Scalar(2);
    const int roots = (n + 1) / 2;
    for (int i = 0; i < roots; ++i) {
        Scalar z = cos(kPi<Scalar> * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
        Scalar derivative = Scalar(0);
        for (int iter = 0; iter < 100; ++iter) {
            Scalar p1 = Scalar(1);
            Scalar p2 = Scalar(0);
            for (int j = 1; j <= n; ++j) {
                const Scalar p3 = p2;
                p2 = p1;
                p1 = ((Scalar(2 * j - 1)) * z * p2 - Scalar(j - 1) * p3) / Scalar(j);
            }
            derivative = Scalar(n) * (z * p1 - p2) / (z * z - Scalar(1));
            const Scalar step = p1 / derivative;
            z -= step;
            if (abs(step) <= Scalar(4) * std::numeric_limits<Scalar>::epsilon())
                break;
        }
        const Scalar w = Scalar(2) / ((Scalar(1) - z * z) * derivative * derivative);
        rule.nodes(i) = mid - half * z;
        rule.nodes(n - 1 - i) = mid + half * z;
        rule.weights(i) = half * w;
        rule.weights(n - 1 - i) = half * w;
    }
    return rule;
}

} // namespace beamtrack
