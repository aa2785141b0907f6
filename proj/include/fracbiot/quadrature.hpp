/*
 * include/fracbiot/quadrature.hpp
 *
 * Copyright 2026 The fracbiot Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cmath>

namespace fracbiot::quad {

/// Three-point rule on a triangle, exact for quadratics. Barycentric
/// coordinates of the points; each weight is area / 3.
inline constexpr std::array<std::array<double, 3>, 3> kTrianglePoints{{
    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
    {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
}};

/// Two-point Gauss rule on [0, 1]: positions and weights.
inline const std::array<double, 2> kGauss2Points{0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
inline constexpr std::array<double, 2> kGauss2Weights{0.5, 0.5};

/// Seven-point degree-5 rule on a triangle (Dunavant); weights sum to 1.
struct Rule7 {
    std::array<std::array<double, 3>, 7> points;
    std::array<double, 7> weights;
};

inline Rule7 degree5_rule() {
    const double a1 = 0.059715871789770, b1 = 0.470142064105115;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456;
    const double w0 = 0.225, w1 = 0.132394152788506, w2 = 0.125939180544827;
    return Rule7{{{{1.0 / 3, 1.0 / 3, 1.0 / 3},
                   {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
                   {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}}},
                 {w0, w1, w1, w1, w2, w2, w2}};
}

}  // namespace fracbiot::quad
