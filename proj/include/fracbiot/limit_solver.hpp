/*
 * include/fracbiot/limit_solver.hpp
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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fracbiot/full_solver.hpp"
#include "fracbiot/scaling.hpp"

namespace fracbiot {

enum class MechForm { TwoScale, ReducedDF, Decoupled };
enum class FlowForm { ConstantPressure, InterfacePDE, Neutral, NormalODE, ReducedBarrier, Wall };

std::string to_string(MechForm f);
std::string to_string(FlowForm f);

struct LimitOptions {
    bool prefer_reduced = false;
    /// With prefer_reduced: which of the two reductions to attempt.
    bool reduce_mechanics = true;
    bool reduce_flow = true;
};

/// A limit model: regime, the chosen mechanics and flow formulations and the
/// spaces they live in. The mesh must outlive the problem.
struct LimitProblem {
    RegimeDescriptor regime;
    MechForm mech_form = MechForm::TwoScale;
    FlowForm flow_form = FlowForm::Neutral;
    bool fracture_ode = false;      ///< Wall with storage: pointwise fracture pressure equation
    bool stress_has_pressure = false;  ///< fracture stress carries the fracture pressure
    std::shared_ptr<const EffectiveParams> effective;
    std::shared_ptr<const SpaceDescriptor> pressure_space;
    std::shared_ptr<const SpaceDescriptor> displacement_space;
    const FracturedMesh* mesh = nullptr;
};

/// Selects the formulation for the regime. With prefer_reduced the reduced
/// forms are used, or a ValidationError names the failed constancy condition.
LimitProblem build_limit_problem(const RegimeDescriptor& regime, std::shared_ptr<const EffectiveParams> effective,
                                 const FracturedMesh& mesh, const LimitOptions& options = {});

/// Validates the exponents, computes the effective parameters and builds.
LimitProblem build_limit_problem(const FracturedMesh& mesh, const MaterialFields& materials,
                                 const ScalingExponents& exponents, const LimitOptions& options = {});

BiotOperators build_limit_operators(const LimitProblem& problem, const MaterialFields& materials,
                                    double tolerance = 1e-10);

TransientSolution solve_limit(const LimitProblem& problem, const MaterialFields& materials, double T, double dt);

/// Per time level, the displacement at every mesh vertex: bulk values from the
/// reduced solution, fracture values from the column-wise 1D elasticity solves.
std::vector<std::vector<Vec2>> reconstruct_fracture_displacement(const LimitProblem& problem,
                                                                 const TransientSolution& solution,
                                                                 const MaterialFields& materials);

/// Per time level, the pressure at every mesh vertex, the fracture filled by
/// the column-wise 1D conductivity solves between the bulk traces.
std::vector<std::vector<double>> reconstruct_fracture_pressure(const LimitProblem& problem,
                                                               const TransientSolution& solution);

}  // namespace fracbiot
