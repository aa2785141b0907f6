/*
 * include/fracbiot/full_solver.hpp
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
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fracbiot/assembly.hpp"
#include "fracbiot/materials.hpp"
#include "fracbiot/mesh.hpp"
#include "fracbiot/scaling.hpp"
#include "fracbiot/spaces.hpp"

namespace fracbiot {

struct BiotRunConfig {
    ScalingExponents exponents;
    double epsilon = 1.0;
    MaterialFields materials = default_materials();
    double T = 0.5;
    double dt = 1.0 / 40.0;
    double tolerance = 1e-10;  ///< relative residual accepted from the direct solves

    /// Throws ValidationError unless dt > 0, T >= dt, T / dt is an integer
    /// and epsilon lies in (0, 1].
    void validate() const;
    int steps() const;
};

/// Time series of coefficient vectors for one run.
struct TransientSolution {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> p_coeffs;
    std::vector<Eigen::VectorXd> u_coeffs;
    std::shared_ptr<const SpaceDescriptor> pressure_space;
    std::shared_ptr<const SpaceDescriptor> displacement_space;
    std::optional<double> epsilon;  ///< empty for limit solutions

    std::vector<double> pressure_vertices(std::size_t k) const;
    std::vector<Vec2> displacement_vertices(std::size_t k) const;
};

/// Constrained discrete operators of a linear Biot-type system
///   A u - Bm p = L(t),   Bf^T du/dt + C dp/dt + D p = Q(t).
/// A carries identity rows on constrained displacement dofs; the other
/// matrices and the loads are zero in constrained rows and columns.
struct BiotOperators {
    std::shared_ptr<const SpaceDescriptor> p_space;
    std::shared_ptr<const SpaceDescriptor> u_space;
    SparseMatrix A, Bm, Bf, C, D;
    std::function<Eigen::VectorXd(double)> load_u;
    std::function<Eigen::VectorXd(double)> load_p;
    Eigen::VectorXd p0;
    double tolerance = 1e-10;
};

BiotOperators build_full_operators(const FracturedMesh& mesh, const BiotRunConfig& config);

struct BiotState {
    double t = 0.0;
    Eigen::VectorXd p;
    Eigen::VectorXd u;
};

/// Backward-Euler stepping with one factorization of the block matrix.
class MonolithicStepper {
public:
    MonolithicStepper(const BiotOperators& ops, double dt);
    BiotState step(const BiotState& state) const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

Eigen::VectorXd initial_displacement(const BiotOperators& ops);
TransientSolution solve_operators(const BiotOperators& ops, double T, double dt, std::optional<double> epsilon);
TransientSolution solve_operators_schur(const BiotOperators& ops, double T, double dt, std::optional<double> epsilon,
                                        int dof_cap = 4000);

Eigen::VectorXd solve_initial_displacement(const FracturedMesh& mesh, const BiotRunConfig& config);
BiotState step_monolithic(const FracturedMesh& mesh, const BiotRunConfig& config, const BiotState& state);
TransientSolution solve_transient(const FracturedMesh& mesh, const BiotRunConfig& config);
TransientSolution solve_transient_schur(const FracturedMesh& mesh, const BiotRunConfig& config, int dof_cap = 4000);

/// The reduced pressure matrix C + Bf^T A^{-1} Bm restricted to free dofs.
Eigen::MatrixXd reduced_pressure_matrix(const BiotOperators& ops);

/// 1/2 u^T A u + 1/2 p^T C p.
double discrete_energy(const BiotOperators& ops, const Eigen::VectorXd& u, const Eigen::VectorXd& p);

/// CSV per time level (vertex id, subdomain, x, y, p, u_x, u_y) and a manifest.
void dump_solution(const FracturedMesh& mesh, const TransientSolution& sol, const std::string& directory,
                   const std::string& config_hash);

}  // namespace fracbiot
