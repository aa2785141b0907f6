/*
 * include/fracbiot/scaling.hpp
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
#include <string>
#include <vector>

#include "fracbiot/materials.hpp"
#include "fracbiot/mesh.hpp"
#include "fracbiot/rational.hpp"

namespace fracbiot {

/// Exponents of epsilon in the fracture reference quantities.
struct ScalingExponents {
    Rational nu_C{1};
    Rational nu_K{0};
    Rational nu_omega{-1};
    Rational nu_alpha_par{0};
    Rational nu_alpha_perp{0};
    Rational nu_f{-1};
    Rational nu_q{-1};
};

enum class FlowRegime { IdealConduit, Conduit, Neutral, Barrier, Wall };
enum class MechRegime { Soft, VerySoft };

std::string to_string(FlowRegime r);
std::string to_string(MechRegime r);

struct RegimeDescriptor {
    FlowRegime flow = FlowRegime::Neutral;
    MechRegime mech = MechRegime::Soft;
    bool storage_present = false;      ///< nu_omega = -1
    bool biot_coupled = false;         ///< 2 nu_alpha_perp = nu_C - 1
    bool flow_source_present = false;  ///< nu_q = -1
    bool mech_source_present = false;  ///< 2 nu_f = nu_C - 3
    bool W_is_zero = false;            ///< fracture touches a flow-Dirichlet boundary
};

/// theta(nu) = (nu - 1) / 2 and iota(nu) = (nu + 1) / 2.
double theta(const Rational& nu);
double iota(const Rational& nu);

struct ClauseViolation {
    std::string clause;
    std::string message;
};

/// Every violated admissibility clause, in clause order. Empty when valid.
std::vector<ClauseViolation> check_exponents(const ScalingExponents& exp, const Geometry& geometry);

/// Regime flags read off the exponents without checking admissibility.
RegimeDescriptor classify(const ScalingExponents& exp, const Geometry& geometry);

/// Validates and classifies. Throws ValidationError naming the first violated
/// clause; the message lists all of them.
RegimeDescriptor validate_exponents(const ScalingExponents& exp, const Geometry& geometry);

/// Normal average per gamma node of a fracture function, by two-point Gauss
/// quadrature on every column segment.
std::vector<double> average_normal(const FracturedMesh& mesh, const Field<double>& f);
/// Normal average per gamma node of P1 nodal data given per mesh vertex
/// (trapezoidal rule along the column, exact for P1 data).
std::vector<double> average_normal(const FracturedMesh& mesh, const std::vector<double>& vertex_values);

/// Integral over the fracture chart divided by the integral of a over gamma.
double average_fracture(const FracturedMesh& mesh, const Field<double>& f);
double average_fracture(const FracturedMesh& mesh, const std::vector<double>& vertex_values);

/// All limit-model coefficients. Gamma quantities are stored per gamma node;
/// fracture fields are callables with the case switches already applied.
struct EffectiveParams {
    RegimeDescriptor regime;
    ScalingExponents exponents;

    std::vector<double> y;
    std::vector<double> aperture;
    std::vector<Mat2> C_gamma_N;
    std::vector<Mat2> K_gamma;
    std::vector<double> K_gamma_N;
    std::vector<Vec2> alpha_gamma;      ///< normal average of alpha_f^eff
    std::vector<Vec2> stress_coupling;  ///< C_gamma^N A_N((C_f^N)^{-1} alpha_f^eff)
    std::vector<Vec2> gravity_stress;   ///< C_gamma^N A_N(G_f (C_f^N)^{-1} alpha_f^eff)
    std::vector<double> omega_average;  ///< A_N omega_f^eff
    std::vector<Vec2> F_gamma_eff_initial;
    std::vector<double> Q_gamma_eff_initial;

    bool alpha_constant_per_column = true;
    bool K_N_constant_per_column = true;
    double fracture_area = 0.0;  ///< integral of a over gamma

    Field<Mat2> C_f_N;
    Field<Vec2> alpha_f_eff;
    Field<double> K_f_N;
    Field<double> omega_f_eff;
    Source<Vec2> f_f_eff;
    Source<double> q_f_eff;

    std::function<Vec2(int node, double t)> F_gamma_eff;
    std::function<double(int node, double t)> Q_gamma_eff;
    std::function<Vec2(int node, double t)> f_thickness_integral;    ///< a A_N f_f^eff
    std::function<double(int node, double t)> q_thickness_integral;  ///< a A_N q_f^eff
};

EffectiveParams compute_effective(const MaterialFields& materials, const ScalingExponents& exp,
                                  const RegimeDescriptor& regime, const FracturedMesh& mesh);

/// Reference values of the dimensional problem.
struct DimensionalInputs {
    double a_star = 1.0;     ///< fracture width [m]
    double L_star = 1.0;     ///< domain length [m]
    double K_star = 1.0;     ///< bulk hydraulic conductivity [m/s]
    double rho_star = 1.0;   ///< fluid density [kg/m^3]
    double g_star = 1.0;     ///< gravitational acceleration [m/s^2]
    double T_final = 1.0;    ///< time horizon [s]
};

/// Plain dimensional data: positions, pressure heads, displacements and
/// scalar material values of bulk and fracture.
struct FieldSet {
    std::vector<Vec2> positions;
    std::vector<double> times;
    std::vector<double> pressure_head;
    std::vector<Vec2> displacement;
    double C_bulk = 0.0, K_bulk = 0.0, omega_bulk = 0.0, f_bulk = 0.0, q_bulk = 0.0;
    double C_frac = 0.0, K_frac = 0.0, omega_frac = 0.0, f_frac = 0.0, q_frac = 0.0;
    Vec2 gravity = Vec2::Zero();
};

struct ReferenceScales {
    double epsilon = 1.0;
    double t_star = 1.0;
    double C_b = 1.0, f_b = 1.0, omega_b = 1.0, q_b = 1.0;
    double L_star = 1.0, K_b = 1.0, g_star = 1.0;
    ScalingExponents exponents;
};

struct Nondimensionalized {
    ReferenceScales scales;
    double T = 0.0;
    FieldSet fields;
};

/// epsilon = a*/L*, t* = L*/K_b*, C_b* = rho* g* L*, f_b* = rho* g*,
/// omega_b* = 1/C_b*, q_b* = K_b*/L*; fracture references carry the powers
/// epsilon^nu of the exponents.
Nondimensionalized nondimensionalize(const DimensionalInputs& in, const FieldSet& raw,
                                     const ScalingExponents& exp = {});
/// Inverse of nondimensionalize for the field set.
FieldSet redimensionalize(const ReferenceScales& scales, const FieldSet& scaled);

}  // namespace fracbiot
