/*
 * include/fracbiot/spaces.hpp
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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracbiot/materials.hpp"
#include "fracbiot/mesh.hpp"

namespace fracbiot {

enum class SpaceKind {
    V_full,
    Phi_full,
    V_sharp,
    Phi_sharp,
    V_gt1,
    V_1,
    Phi_lt_m1,
    Phi_m1,
    Phi_open,
    Phi_1,
    Phi_gt1,
    Gamma_P1,
};

std::string to_string(SpaceKind kind);
bool is_vector_kind(SpaceKind kind);

/// P1 space on the fracture mesh with the interface identifications of its
/// kind. Scalar spaces have one dof per node, vector spaces two (dof = 2 node + c).
struct SpaceDescriptor {
    SpaceKind kind = SpaceKind::Phi_full;
    int components = 1;
    int n_nodes = 0;
    int n_dofs = 0;
    /// Node of every mesh vertex, -1 where the vertex is outside the support.
    std::vector<int> vertex_node;
    /// Node carrying gamma node j, -1 if the kind has no gamma unknown.
    std::vector<int> gamma_node;
    std::vector<bool> dirichlet;  ///< per dof

    int dof(int vertex, int component = 0) const {
        const int n = vertex_node[vertex];
        return n < 0 ? -1 : components * n + component;
    }
    int constrained_count() const;
};

struct SpaceOptions {
    /// Phi_gt1 only: keep independent fracture pressure nodes (storage present).
    bool fracture_nodes = true;
};

SpaceDescriptor build_space(const FracturedMesh& mesh, SpaceKind kind, const SpaceOptions& options = {});

/// Coefficient vector of the nodal interpolant of a scalar field given per
/// subdomain chart. Constrained dofs are set to zero.
Eigen::VectorXd interpolate_scalar(const FracturedMesh& mesh, const SpaceDescriptor& space,
                                   const std::function<double(Subdomain, const Vec2&)>& fn);

/// Values per mesh vertex (zero where the vertex is outside the support).
std::vector<double> scalar_vertex_values(const SpaceDescriptor& space, const Eigen::VectorXd& coeffs);
std::vector<Vec2> vector_vertex_values(const SpaceDescriptor& space, const Eigen::VectorXd& coeffs);

/// Gradient of the P1 function with the given vertex values on one triangle.
Vec2 p1_gradient(const FracturedMesh& mesh, const std::vector<double>& vertex_values, int element);
Mat2 p1_jacobian(const FracturedMesh& mesh, const std::vector<Vec2>& vertex_values, int element);

/// grad_par + eps^{-1} grad_N on fracture elements, plain gradient on bulk ones.
Vec2 eval_scaled_gradient(const FracturedMesh& mesh, const std::vector<double>& vertex_values, int element,
                          double epsilon);
/// Row i is the scaled gradient of component i.
Mat2 eval_scaled_jacobian(const FracturedMesh& mesh, const std::vector<Vec2>& vertex_values, int element,
                          double epsilon);
/// Symmetric part of the scaled Jacobian.
Mat2 eval_scaled_strain(const FracturedMesh& mesh, const std::vector<Vec2>& vertex_values, int element,
                        double epsilon);

}  // namespace fracbiot
