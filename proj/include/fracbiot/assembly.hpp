/*
 * include/fracbiot/assembly.hpp
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

#include <map>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fracbiot/materials.hpp"
#include "fracbiot/mesh.hpp"
#include "fracbiot/scaling.hpp"
#include "fracbiot/spaces.hpp"

namespace fracbiot {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class FormName {
    // Transformed epsilon problem.
    A_hat,
    B_hat,
    C_hat,
    D_hat,
    L_hat,
    Q_hat,
    // Bulk parts of the limit problems.
    A_b0,
    B_b0,
    C_b0,
    D_b0,
    L_b0,
    Q_b0,
    // Fracture and interface terms of the limit problems.
    fracture_normal_stiffness,     ///< <C_f^N d_N u, d_N v> on the fracture
    fracture_normal_conductivity,  ///< <K_f^N d_N p, d_N phi> on the fracture
    interface_mass_jump,           ///< <a^{-1} C_gamma^N [u], [v]> or <a^{-1} K_gamma^N [p], [phi]>, lumped
    gamma_stiffness,               ///< <a K_gamma grad p, grad phi> via column-constant extension
    gamma_mass,                    ///< <p, phi> on gamma
    coupling_alpha_eff,            ///< <p alpha_f^eff, d_N v> on the fracture
    fracture_mass,                 ///< <omega_f^eff p, phi> on the fracture
    gamma_coupling_stress,         ///< <p C_gamma^N A_N((C_f^N)^{-1} alpha_f^eff), [v]> on gamma
    gamma_coupling_flow,           ///< <p A_N alpha_f^eff, [v]> on gamma
    fracture_load,                 ///< <f_f^eff, v> + <G_f alpha_f^eff, d_N v> on the fracture
    fracture_flow_load,            ///< <q_f^eff, phi> on the fracture
    gamma_load,                    ///< <a A_N f_f^eff, v_-> + <F_gamma^eff + gravity stress, [v]>
    gamma_flow_load,               ///< <a A_N q_f^eff, phi_-> + <Q_gamma^eff, [phi]>
};

std::string to_string(FormName name);
bool is_linear_form(FormName name);
bool needs_epsilon(FormName name);
bool needs_effective(FormName name);

struct FormSpec {
    FormName name = FormName::A_hat;
    std::optional<double> epsilon;
    std::optional<ScalingExponents> exponents;
    double time = 0.0;  ///< evaluation time of sources in linear forms
    /// fracture_load only: include the gravity term of the fracture stress.
    bool fracture_gravity = true;
};

/// Bilinear forms fill `matrix` (rows: test dofs, columns: trial dofs);
/// linear forms fill `rhs` (test dofs) and leave the matrix empty.
struct SparseSystem {
    SparseMatrix matrix;
    Eigen::VectorXd rhs;
    int size() const { return static_cast<int>(rhs.size()); }
};

SparseSystem assemble(const FormSpec& form, const SpaceDescriptor& trial, const SpaceDescriptor& test,
                      const FracturedMesh& mesh, const MaterialFields& materials,
                      const EffectiveParams* effective = nullptr);

/// Symmetric elimination of the Dirichlet dofs of a square system. Values
/// default to zero; a value for an unconstrained dof is an error.
SparseSystem apply_constraints(SparseSystem system, const SpaceDescriptor& space,
                               const std::map<int, double>& values = {});

/// Zeroes rows of constrained test dofs and columns of constrained trial dofs.
SparseMatrix zero_constrained(const SparseMatrix& m, const SpaceDescriptor& rows, const SpaceDescriptor& cols);

/// Sets constrained entries of a load vector to zero.
void zero_constrained(Eigen::VectorXd& rhs, const SpaceDescriptor& space);

/// Potential of gravity in the transformed epsilon problem and in the limit,
/// evaluated in the chart of the subdomain.
double gravity_potential(const Geometry& geometry, const Vec2& gravity, Subdomain sub, const Vec2& x,
                         std::optional<double> epsilon);

}  // namespace fracbiot
