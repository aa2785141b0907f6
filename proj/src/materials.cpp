/*
 * src/materials.cpp
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

#include "fracbiot/materials.hpp"

#include <cmath>
#include <numbers>

namespace fracbiot {

Tensor4 isotropic_tensor(double lambda, double mu) {
    Tensor4 D;
    D << lambda + 2.0 * mu, lambda, 0.0,
         lambda, lambda + 2.0 * mu, 0.0,
         0.0, 0.0, mu;
    return D;
}

namespace {

int voigt(int i, int j) { return i == j ? i : 2; }

}  // namespace

double tensor_entry(const Tensor4& C, int i, int j, int k, int l) { return C(voigt(i, j), voigt(k, l)); }

Tensor4 tensor_from_entries(const std::function<double(int, int, int, int)>& entry) {
    static constexpr int idx[3][2] = {{0, 0}, {1, 1}, {0, 1}};
    Tensor4 D;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) D(a, b) = entry(idx[a][0], idx[a][1], idx[b][0], idx[b][1]);
    return D;
}

Mat2 normal_tensor(const Tensor4& C, const Vec2& normal) {
    Mat2 CN = Mat2::Zero();
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l) CN(i, k) += tensor_entry(C, i, j, k, l) * normal(j) * normal(l);
    return CN;
}

MaterialFields default_materials() {
    using std::numbers::pi;
    MaterialFields m;
    for (Subdomain s : {Subdomain::Plus, Subdomain::Minus}) {
        auto& b = m[s];
        b.C = constant_field<Tensor4>(isotropic_tensor(1.0, 1.0));
        b.K = constant_field<Mat2>(Mat2::Identity());
        b.alpha = constant_field<Mat2>(Mat2::Identity());
        b.omega = constant_field<double>(1.0);
        b.f = constant_source<Vec2>(Vec2(0.2, 0.0));
        b.p0 = [](const Vec2& x) { return std::cos(pi * x.x() / 2.0); };
    }
    m[Subdomain::Plus].q = constant_source<double>(1.0);
    m[Subdomain::Minus].q = constant_source<double>(0.0);

    auto& f = m[Subdomain::Fracture];
    f.C = constant_field<Tensor4>(isotropic_tensor(1.0, 0.5));
    f.K = constant_field<Mat2>(Eigen::Vector2d(2.0, 1.0).asDiagonal());
    f.alpha = constant_field<Mat2>(Eigen::Vector2d(1.0, 0.5).asDiagonal());
    f.omega = constant_field<double>(1.0);
    f.f = [](const Vec2& x, double) -> Vec2 { return Vec2(1.0, 0.5) * (1.0 + 0.5 * std::sin(pi * x.y())); };
    f.q = [](const Vec2& x, double) { return 1.0 + 0.5 * std::sin(pi * x.y()); };
    f.p0 = [](const Vec2&) { return 1.0; };
    return m;
}

MaterialFields with_zero_data(MaterialFields m) {
    for (auto& s : m.sub) {
        s.f = constant_source<Vec2>(Vec2::Zero());
        s.q = constant_source<double>(0.0);
        s.p0 = [](const Vec2&) { return 0.0; };
    }
    m.gravity = Vec2::Zero();
    return m;
}

}  // namespace fracbiot
