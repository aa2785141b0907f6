/*
 * include/fracbiot/norms.hpp
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

#include <functional>
#include <vector>

#include "fracbiot/mesh.hpp"

namespace fracbiot {

enum class NormKind {
    L2_bulk,
    H1_bulk,
    L2_frac,
    HN1_frac,  ///< sqrt(||f||^2 + ||d_N f||^2)
    H1_frac,
    L2_gamma,
    L2_time_composite,
    H1_time_composite,
};

/// Multipliers applied to the field on each part before integration.
struct NormWeights {
    double bulk = 1.0;
    double fracture = 1.0;
};

/// Spatial norm of a P1 field given by vertex values, with exact P1 quadrature.
/// L2_gamma uses the bulk-plus trace. Time-composite kinds are rejected here.
double compute_norm(const FracturedMesh& mesh, const std::vector<double>& values, NormKind kind,
                    const NormWeights& weights = {});
double compute_norm(const FracturedMesh& mesh, const std::vector<Vec2>& values, NormKind kind,
                    const NormWeights& weights = {});

/// Sum over the triangles with the given label of fn(triangle) (for custom
/// piecewise-constant integrands fn returns area times the integrand).
double sum_over_elements(const FracturedMesh& mesh, Subdomain label, const std::function<double(int)>& fn);

/// sqrt of the trapezoidal time integral of squared spatial norms.
double l2_in_time(const std::vector<double>& times, const std::vector<double>& squared_norms);

/// sqrt(L2-in-time^2 + sum_k dt_k ||(x_k - x_{k-1}) / dt_k||^2) where the
/// second series holds the squared norms of the backward differences
/// x_k - x_{k-1}, k >= 1 (its first entry is ignored).
double h1_in_time(const std::vector<double>& times, const std::vector<double>& squared_norms,
                  const std::vector<double>& squared_difference_norms);

/// Time composite of a spatial norm over a series of vertex fields.
double compute_time_norm(const FracturedMesh& mesh, const std::vector<double>& times,
                         const std::vector<std::vector<double>>& series, NormKind spatial, NormKind composite,
                         const NormWeights& weights = {});
double compute_time_norm(const FracturedMesh& mesh, const std::vector<double>& times,
                         const std::vector<std::vector<Vec2>>& series, NormKind spatial, NormKind composite,
                         const NormWeights& weights = {});

/// L2 and H1-seminorm errors of a P1 field against a closed-form function
/// (degree-5 quadrature), over the given subdomains' charts.
double l2_error(const FracturedMesh& mesh, const std::vector<double>& values,
                const std::function<double(Subdomain, const Vec2&)>& exact);
double h1_seminorm_error(const FracturedMesh& mesh, const std::vector<double>& values,
                         const std::function<Vec2(Subdomain, const Vec2&)>& exact_gradient);

}  // namespace fracbiot
