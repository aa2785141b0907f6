/*
 * include/fracbiot/materials.hpp
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
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "fracbiot/mesh.hpp"

namespace fracbiot {

/// Fourth-order elasticity tensor in Voigt form acting on (e_xx, e_yy, 2 e_xy).
using Tensor4 = Eigen::Matrix3d;

/// Isotropic tensor with Lame parameters (lambda, mu).
Tensor4 isotropic_tensor(double lambda, double mu);

/// Component C_ijkl of a Voigt tensor, indices in {0, 1}.
double tensor_entry(const Tensor4& C, int i, int j, int k, int l);

/// Builds the Voigt matrix from a full index function C_ijkl.
Tensor4 tensor_from_entries(const std::function<double(int, int, int, int)>& entry);

/// (C^N)_ik = sum_jl C_ijkl N_j N_l.
Mat2 normal_tensor(const Tensor4& C, const Vec2& normal = Vec2(1.0, 0.0));

/// Coefficient field in a chart: value at point x of triangle `element`.
template <class T>
using Field = std::function<T(const Vec2& x, int element)>;

/// Time-dependent source in a chart.
template <class T>
using Source = std::function<T(const Vec2& x, double t)>;

using InitialField = std::function<double(const Vec2& x)>;

struct SubdomainMaterial {
    Field<Tensor4> C;
    Field<Mat2> K;
    Field<Mat2> alpha;
    Field<double> omega;
    Source<Vec2> f;
    Source<double> q;
    InitialField p0;
};

/// Material data per subdomain, each given in its own chart, plus gravity.
struct MaterialFields {
    std::array<SubdomainMaterial, 3> sub;
    Vec2 gravity = Vec2::Zero();

    SubdomainMaterial& operator[](Subdomain s) { return sub[static_cast<int>(s)]; }
    const SubdomainMaterial& operator[](Subdomain s) const { return sub[static_cast<int>(s)]; }
};

template <class T>
Field<T> constant_field(T value) {
    return [value](const Vec2&, int) { return value; };
}

/// Value `lower` for s < 0 and `upper` for s > 0 (fracture chart).
template <class T>
Field<T> two_layer_field(T lower, T upper) {
    return [lower, upper](const Vec2& x, int) { return x.x() < 0.0 ? lower : upper; };
}

/// Linear interpolation between the values at y = 0 and y = 1.
template <class T>
Field<T> affine_in_y_field(T at0, T at1) {
    return [at0, at1](const Vec2& x, int) -> T { return ((1.0 - x.y()) * at0 + x.y() * at1); };
}

/// One value per triangle id of the mesh.
template <class T>
Field<T> per_element_field(std::vector<T> values) {
    return [values = std::move(values)](const Vec2&, int element) { return values.at(element); };
}

template <class T>
Source<T> constant_source(T value) {
    return [value](const Vec2&, double) { return value; };
}

/// The default test data shared by sweeps, the CLI and the acceptance run.
/// Bulk: lambda = mu = 1, K = alpha = I, omega = 1, f = (0.2, 0), q_+ = 1,
/// q_- = 0, p0 = cos(pi x / 2). Fracture: lambda = 1, mu = 1/2,
/// K = diag(2, 1), alpha = diag(1, 1/2), omega = 1, p0 = 1 and sources
/// varying with y as 1 + sin(pi y) / 2.
MaterialFields default_materials();

/// All sources, the initial pressure and gravity set to zero.
MaterialFields with_zero_data(MaterialFields m);

}  // namespace fracbiot
