/*
 * tests/test_limit_solver.cpp
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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fracbiot/errors.hpp"
#include "fracbiot/limit_solver.hpp"
#include "fracbiot/norms.hpp"
#include "fracbiot/study.hpp"
#include "test_support.hpp"

namespace fracbiot {
namespace {

using testing::regime_exponents;

struct FormCase {
    int nu_C;
    int nu_K;
    MechForm mech;
    FlowForm flow;
    bool fracture_ode;
};

class LimitForms : public ::testing::TestWithParam<FormCase> {};

TEST_P(LimitForms, SelectsTwoScaleFormsPerRegime) {
    const FormCase& c = GetParam();
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.25);
    const LimitProblem pb = build_limit_problem(mesh, default_materials(), regime_exponents(c.nu_C, c.nu_K));
    EXPECT_EQ(pb.mech_form, c.mech);
    EXPECT_EQ(pb.flow_form, c.flow);
    EXPECT_EQ(pb.fracture_ode, c.fracture_ode);
}

INSTANTIATE_TEST_SUITE_P(
    AllRegimes, LimitForms,
    ::testing::Values(FormCase{1, -2, MechForm::TwoScale, FlowForm::ConstantPressure, false},
                      FormCase{1, -1, MechForm::TwoScale, FlowForm::InterfacePDE, false},
                      FormCase{1, 0, MechForm::TwoScale, FlowForm::Neutral, false},
                      FormCase{1, 1, MechForm::TwoScale, FlowForm::NormalODE, false},
                      FormCase{1, 2, MechForm::TwoScale, FlowForm::Wall, true},
                      FormCase{2, -2, MechForm::Decoupled, FlowForm::ConstantPressure, false},
                      FormCase{2, -1, MechForm::Decoupled, FlowForm::InterfacePDE, false},
                      FormCase{2, 0, MechForm::Decoupled, FlowForm::Neutral, false},
                      FormCase{2, 1, MechForm::Decoupled, FlowForm::NormalODE, false},
                      FormCase{2, 2, MechForm::Decoupled, FlowForm::Wall, true}),
    [](const ::testing::TestParamInfo<FormCase>& info) {
        return testing::regime_label(info.param.nu_C, info.param.nu_K);
    });

TEST(LimitProblem, SoftConduitReducesToDiscreteFractureModel) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.25);
    LimitOptions o;
    o.prefer_reduced = true;
    const LimitProblem pb = build_limit_problem(mesh, default_materials(), regime_exponents(1, -1), o);
    EXPECT_EQ(pb.mech_form, MechForm::ReducedDF);
    EXPECT_EQ(pb.flow_form, FlowForm::InterfacePDE);
}

TEST(LimitProblem, BarrierWithStorageRefusesReduction) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.25);
    const LimitProblem pb = build_limit_problem(mesh, default_materials(), regime_exponents(1, 1));
    EXPECT_EQ(pb.flow_form, FlowForm::NormalODE);
    LimitOptions o;
    o.prefer_reduced = true;
    o.reduce_mechanics = false;
    try {
        build_limit_problem(mesh, default_materials(), regime_exponents(1, 1), o);
        FAIL() << "reduction should be refused";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("storage"), std::string::npos);
    }
}

TEST(LimitProblem, ReducedMechanicsRefusesPressureStressOutsideLowConductivity) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.25);
    ScalingExponents e = regime_exponents(1, 1);
    e.nu_omega = Rational{0};
    LimitOptions o;
    o.prefer_reduced = true;
    o.reduce_flow = false;
    EXPECT_THROW(build_limit_problem(mesh, default_materials(), e, o), ValidationError);
}

TEST(LimitProblem, ReducedMechanicsRefusesAlphaVaryingAcrossColumn) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.25);
    MaterialFields m = default_materials();
    m[Subdomain::Fracture].alpha = two_layer_field<Mat2>(Mat2::Identity(), 2.0 * Mat2::Identity());
    LimitOptions o;
    o.prefer_reduced = true;
    EXPECT_THROW(build_limit_problem(mesh, m, regime_exponents(1, -1), o), ValidationError);
}

TEST(LimitProblem, BarrierReductionRefusesVaryingNormalConductivityWithCoupling) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.25);
    MaterialFields m = default_materials();
    m[Subdomain::Fracture].K = two_layer_field<Mat2>(Mat2::Identity(), 3.0 * Mat2::Identity());
    ScalingExponents e = regime_exponents(1, 1);
    e.nu_omega = Rational{0};
    LimitOptions o;
    o.prefer_reduced = true;
    o.reduce_mechanics = false;
    EXPECT_THROW(build_limit_problem(mesh, m, e, o), ValidationError);
}

TEST(LimitSolver, ZeroDataGivesZeroSeries) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    const MaterialFields zero = with_zero_data(default_materials());
    for (int nu_C : {1, 2}) {
        for (int nu_K = -2; nu_K <= 2; ++nu_K) {
            const LimitProblem pb = build_limit_problem(mesh, zero, regime_exponents(nu_C, nu_K));
            const TransientSolution sol = solve_limit(pb, zero, 0.2, 0.05);
            for (std::size_t k = 0; k < sol.times.size(); ++k) {
                EXPECT_LE(sol.p_coeffs[k].norm(), 1e-12);
                EXPECT_LE(sol.u_coeffs[k].norm(), 1e-12);
            }
        }
    }
}

TEST(LimitSolver, EnergyDoesNotIncreaseWithoutSources) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    MaterialFields m = with_zero_data(default_materials());
    m[Subdomain::Plus].p0 = [](const Vec2& x) { return std::cos(1.5707963267948966 * x.x()); };
    m[Subdomain::Minus].p0 = [](const Vec2& x) { return 0.5 * std::cos(1.5707963267948966 * x.x()); };
    m[Subdomain::Fracture].p0 = [](const Vec2& x) { return 1.0 + 0.5 * x.x(); };
    for (int nu_C : {1, 2}) {
        for (int nu_K = -2; nu_K <= 2; ++nu_K) {
            const LimitProblem pb = build_limit_problem(mesh, m, regime_exponents(nu_C, nu_K));
            const BiotOperators ops = build_limit_operators(pb, m);
            const TransientSolution sol = solve_operators(ops, 0.5, 0.05, std::nullopt);
            double previous = discrete_energy(ops, sol.u_coeffs[0], sol.p_coeffs[0]);
            for (std::size_t k = 1; k < sol.times.size(); ++k) {
                const double e = discrete_energy(ops, sol.u_coeffs[k], sol.p_coeffs[k]);
                EXPECT_LE(e, previous * (1.0 + 1e-12) + 1e-14) << "nu_C=" << nu_C << " nu_K=" << nu_K;
                previous = e;
            }
        }
    }
}

TEST(LimitSolver, PressureIsContinuousAcrossGammaBelowBarrier) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    for (int nu_K : {-2, -1, 0}) {
        const LimitProblem pb = build_limit_problem(mesh, default_materials(), regime_exponents(1, nu_K));
        const TransientSolution sol = solve_limit(pb, default_materials(), 0.1, 0.05);
        const auto p = sol.pressure_vertices(sol.times.size() - 1);
        for (int j = 0; j < mesh.gamma_count(); ++j) EXPECT_EQ(p[mesh.gamma_plus[j]], p[mesh.gamma_minus[j]]);
    }
}

TEST(LimitSolver, IdealConduitCarriesOneFracturePressure) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    const LimitProblem pb = build_limit_problem(mesh, default_materials(), regime_exponents(1, -2));
    std::set<int> nodes;
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (mesh.vertex_subdomain[v] == Subdomain::Fracture) nodes.insert(pb.pressure_space->vertex_node[v]);
    EXPECT_EQ(nodes.size(), 1u);
    const TransientSolution sol = solve_limit(pb, default_materials(), 0.1, 0.05);
    EXPECT_EQ(fracture_gradient_norm(mesh, sol), 0.0);
}

TEST(LimitSolver, IdealConduitPressureStaysAtZeroForOddData) {
    // Data odd under the reflection s -> -s of the whole configuration: the
    // interface fluxes from both sides cancel and the fracture pressure keeps
    // its initial mean, which is zero.
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    MaterialFields m = default_materials();
    for (Subdomain s : {Subdomain::Plus, Subdomain::Minus}) {
        m[s].p0 = [](const Vec2& x) { return std::sin(3.141592653589793 * x.x()) * (1.0 + x.y()); };
        m[s].q = [](const Vec2& x, double) { return x.x() * (1.0 + x.y()); };
        m[s].f = [](const Vec2& x, double) { return Vec2(1.0, x.x()); };
    }
    m[Subdomain::Fracture].p0 = [](const Vec2& x) { return x.x(); };
    m[Subdomain::Fracture].q = [](const Vec2& x, double) { return x.x(); };
    m[Subdomain::Fracture].f = [](const Vec2& x, double) { return Vec2(1.0, x.x()); };
    const LimitProblem pb = build_limit_problem(mesh, m, regime_exponents(1, -2));
    const TransientSolution sol = solve_limit(pb, m, 0.5, 0.05);
    const int fracture_vertex = mesh.columns[mesh.gamma_count() / 2][1];
    for (std::size_t k = 0; k < sol.times.size(); ++k)
        EXPECT_NEAR(sol.pressure_vertices(k)[fracture_vertex], 0.0, 1e-12);
}

TEST(LimitSolver, VerySoftFractureDisplacementVanishesOnBothInterfaces) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    const LimitProblem pb = build_limit_problem(mesh, default_materials(), regime_exponents(2, 0));
    const TransientSolution sol = solve_limit(pb, default_materials(), 0.1, 0.05);
    const auto u = sol.displacement_vertices(sol.times.size() - 1);
    bool interior_nonzero = false;
    for (int j = 0; j < mesh.gamma_count(); ++j) {
        EXPECT_EQ(u[mesh.columns[j].front()], Vec2::Zero());
        EXPECT_EQ(u[mesh.columns[j].back()], Vec2::Zero());
        interior_nonzero |= u[mesh.columns[j][1]].norm() > 0.0;
    }
    EXPECT_TRUE(interior_nonzero);
}

TEST(LimitSolver, WallKeepsFlowCompartmentsApart) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    const LimitProblem pb = build_limit_problem(mesh, default_materials(), regime_exponents(1, 2));
    const BiotOperators ops = build_limit_operators(pb, default_materials());
    const SpaceDescriptor& ps = *ops.p_space;
    std::vector<int> owner(ps.n_dofs, -1);
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const int d = ps.dof(v);
        if (d >= 0) owner[d] = static_cast<int>(mesh.vertex_subdomain[v]);
    }
    for (const SparseMatrix* M : {&ops.C, &ops.D}) {
        for (int k = 0; k < M->outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(*M, k); it; ++it)
                if (it.value() != 0.0) EXPECT_EQ(owner[it.row()], owner[it.col()]);
    }
}

TEST(LimitSolver, NeutralWithoutFractureFlowTermsMatchesBulkReference) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    ScalingExponents e = regime_exponents(1, 0);
    e.nu_omega = Rational{0};
    e.nu_alpha_par = Rational{1};
    e.nu_alpha_perp = Rational{1};
    e.nu_q = Rational{0};
    const MaterialFields m = default_materials();
    const LimitProblem pb = build_limit_problem(mesh, m, e);
    const BiotOperators ops = build_limit_operators(pb, m);

    // Reference: the same mechanics, flow from the bulk forms alone on the
    // pressure space that glues the two bulks along gamma.
    BiotOperators ref = ops;
    const SpaceDescriptor& ps = *ops.p_space;
    const SpaceDescriptor& us = *ops.u_space;
    const auto bulk = [&](FormName n, const SpaceDescriptor& trial, const SpaceDescriptor& test) {
        FormSpec spec;
        spec.name = n;
        return assemble(spec, trial, test, mesh, m).matrix;
    };
    ref.C = zero_constrained(bulk(FormName::C_b0, ps, ps), ps, ps);
    ref.D = zero_constrained(bulk(FormName::D_b0, ps, ps), ps, ps);
    ref.Bm = zero_constrained(bulk(FormName::B_b0, ps, us), us, ps);
    ref.Bf = ref.Bm;
    ref.load_p = [&](double t) {
        FormSpec spec;
        spec.name = FormName::Q_b0;
        spec.time = t;
        Eigen::VectorXd r = assemble(spec, ps, ps, mesh, m).rhs;
        zero_constrained(r, ps);
        return r;
    };
    const TransientSolution a = solve_operators(ops, 0.5, 0.05, std::nullopt);
    const TransientSolution b = solve_operators(ref, 0.5, 0.05, std::nullopt);
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        EXPECT_LE((a.p_coeffs[k] - b.p_coeffs[k]).norm(), 1e-10);
        EXPECT_LE((a.u_coeffs[k] - b.u_coeffs[k]).norm(), 1e-10);
    }
}

TEST(LimitSolver, BulkFieldsIgnoreFractureBiotTensorWhenDecoupled) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    for (int nu_K : {-2, 0, 2}) {
        ScalingExponents e = regime_exponents(1, nu_K);
        e.nu_alpha_perp = Rational{1, 2};
        MaterialFields a = default_materials();
        MaterialFields b = default_materials();
        b[Subdomain::Fracture].alpha = constant_field<Mat2>(Eigen::Vector2d(7.0, 3.0).asDiagonal());
        const TransientSolution sa = solve_limit(build_limit_problem(mesh, a, e), a, 0.2, 0.05);
        const TransientSolution sb = solve_limit(build_limit_problem(mesh, b, e), b, 0.2, 0.05);
        for (std::size_t k = 0; k < sa.times.size(); ++k) {
            const auto pa = sa.pressure_vertices(k), pb = sb.pressure_vertices(k);
            const auto ua = sa.displacement_vertices(k), ub = sb.displacement_vertices(k);
            for (int v = 0; v < mesh.vertex_count(); ++v) {
                if (mesh.vertex_subdomain[v] == Subdomain::Fracture) continue;
                EXPECT_NEAR(pa[v], pb[v], 1e-12);
                EXPECT_NEAR((ua[v] - ub[v]).norm(), 0.0, 1e-12);
            }
        }
    }
}

TransientSolution single_level(const LimitProblem& pb, const Eigen::VectorXd& p, const Eigen::VectorXd& u) {
    TransientSolution sol;
    sol.times = {0.0};
    sol.p_coeffs = {p};
    sol.u_coeffs = {u};
    sol.pressure_space = pb.pressure_space;
    sol.displacement_space = pb.displacement_space;
    return sol;
}

TEST(Reconstruction, DisplacementIsAffineBetweenTracesWithoutLoads) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    ScalingExponents e = regime_exponents(1, 0);
    e.nu_alpha_perp = Rational{1};
    e.nu_f = Rational{0};
    const MaterialFields m = with_zero_data(default_materials());
    LimitOptions o;
    o.prefer_reduced = true;
    const LimitProblem pb = build_limit_problem(mesh, m, e, o);
    ASSERT_EQ(pb.mech_form, MechForm::ReducedDF);
    const SpaceDescriptor& us = *pb.displacement_space;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(us.n_dofs);
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (mesh.vertex_subdomain[v] == Subdomain::Fracture || us.vertex_node[v] < 0) continue;
        const double side = mesh.vertex_subdomain[v] == Subdomain::Plus ? 1.0 : -1.0;
        u[us.dof(v, 0)] = side;
        u[us.dof(v, 1)] = 2.0 * side;
    }
    const auto rec = reconstruct_fracture_displacement(
        pb, single_level(pb, Eigen::VectorXd::Zero(pb.pressure_space->n_dofs), u), m);
    for (int j = 1; j + 1 < mesh.gamma_count(); ++j) {
        for (int v : mesh.columns[j]) {
            const double s = mesh.vertices[v].x();
            const double lin = -1.0 + 2.0 * (s + 0.5);
            EXPECT_NEAR(rec[0][v].x(), lin, 1e-12);
            EXPECT_NEAR(rec[0][v].y(), 2.0 * lin, 1e-12);
        }
    }
}

TEST(Reconstruction, DisplacementIsConstantForEqualTraces) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    ScalingExponents e = regime_exponents(1, 0);
    const MaterialFields m = with_zero_data(default_materials());
    LimitOptions o;
    o.prefer_reduced = true;
    const LimitProblem pb = build_limit_problem(mesh, m, e, o);
    const SpaceDescriptor& us = *pb.displacement_space;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(us.n_dofs);
    for (int d = 0; d < us.n_dofs; ++d) u[d] = d % 2 == 0 ? 0.3 : -0.7;
    const auto rec = reconstruct_fracture_displacement(
        pb, single_level(pb, Eigen::VectorXd::Zero(pb.pressure_space->n_dofs), u), m);
    for (int j = 1; j + 1 < mesh.gamma_count(); ++j)
        for (int v : mesh.columns[j]) EXPECT_LT((rec[0][v] - Vec2(0.3, -0.7)).norm(), 1e-12);
}

ScalingExponents reducible_barrier() {
    ScalingExponents e = regime_exponents(1, 1);
    e.nu_omega = Rational{0};
    e.nu_alpha_par = Rational{1};
    e.nu_alpha_perp = Rational{1};
    return e;
}

TEST(Reconstruction, PressureIsAffineBetweenTracesWithoutSources) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    ScalingExponents e = reducible_barrier();
    e.nu_q = Rational{0};
    const MaterialFields m = default_materials();
    LimitOptions o;
    o.prefer_reduced = true;
    o.reduce_mechanics = false;
    const LimitProblem pb = build_limit_problem(mesh, m, e, o);
    ASSERT_EQ(pb.flow_form, FlowForm::ReducedBarrier);
    const SpaceDescriptor& ps = *pb.pressure_space;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(ps.n_dofs);
    for (int j = 0; j < mesh.gamma_count(); ++j) {
        p[ps.dof(mesh.gamma_plus[j])] = 2.0;
        p[ps.dof(mesh.gamma_minus[j])] = -1.0;
    }
    const auto rec =
        reconstruct_fracture_pressure(pb, single_level(pb, p, Eigen::VectorXd::Zero(pb.displacement_space->n_dofs)));
    for (int j = 0; j < mesh.gamma_count(); ++j)
        for (int v : mesh.columns[j]) EXPECT_NEAR(rec[0][v], -1.0 + 3.0 * (mesh.vertices[v].x() + 0.5), 1e-12);
}

TEST(Reconstruction, PressureIsConstantForEqualTraces) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    ScalingExponents e = reducible_barrier();
    e.nu_q = Rational{0};
    LimitOptions o;
    o.prefer_reduced = true;
    o.reduce_mechanics = false;
    const LimitProblem pb = build_limit_problem(mesh, default_materials(), e, o);
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(pb.pressure_space->n_dofs, 0.75);
    const auto rec =
        reconstruct_fracture_pressure(pb, single_level(pb, p, Eigen::VectorXd::Zero(pb.displacement_space->n_dofs)));
    for (int j = 0; j < mesh.gamma_count(); ++j)
        for (int v : mesh.columns[j]) EXPECT_NEAR(rec[0][v], 0.75, 1e-12);
}

TEST(Reconstruction, RejectsSolutionsOfOtherForms) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.25);
    const LimitProblem pb = build_limit_problem(mesh, default_materials(), regime_exponents(1, 0));
    const TransientSolution sol = solve_limit(pb, default_materials(), 0.05, 0.05);
    EXPECT_THROW(reconstruct_fracture_displacement(pb, sol, default_materials()), ValidationError);
    EXPECT_THROW(reconstruct_fracture_pressure(pb, sol), ValidationError);
}

TEST(Equivalence, DiscreteFractureMechanicsMatchesTwoScaleModel) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    for (int nu_K : {-2, -1, 0}) {
        const auto reports = check_equivalence(mesh, default_materials(), regime_exponents(1, nu_K), 0.5, 0.05);
        ASSERT_EQ(reports.size(), 1u);
        EXPECT_LE(reports[0].bulk_difference, 1e-8);
        EXPECT_LE(reports[0].reconstruction_difference, 1e-8);
    }
}

TEST(Equivalence, ReducedBarrierMatchesNormalOdeModel) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);
    const auto reports = check_equivalence(mesh, default_materials(), reducible_barrier(), 0.5, 0.05);
    int barrier_reports = 0;
    for (const auto& r : reports) {
        EXPECT_LE(r.bulk_difference, 1e-8) << r.theorem;
        EXPECT_LE(r.reconstruction_difference, 1e-8) << r.theorem;
        barrier_reports += r.theorem == "reduced barrier";
    }
    EXPECT_EQ(barrier_reports, 1);
}

TEST(Equivalence, ZeroDataGivesZeroDifference) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.25);
    const auto reports =
        check_equivalence(mesh, with_zero_data(default_materials()), regime_exponents(1, -1), 0.2, 0.05);
    for (const auto& r : reports) {
        EXPECT_EQ(r.bulk_difference, 0.0);
        EXPECT_EQ(r.reconstruction_difference, 0.0);
    }
}

TEST(Equivalence, RegimesWithoutReductionAreRefused) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.25);
    EXPECT_THROW(check_equivalence(mesh, default_materials(), regime_exponents(2, 0), 0.1, 0.05), ValidationError);
}

}  // namespace
}  // namespace fracbiot
