/*
 * tests/test_scaling.cpp
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
#include <random>
#include <string>
#include <vector>

#include "fracbiot/errors.hpp"
#include "fracbiot/scaling.hpp"
#include "test_support.hpp"

namespace fracbiot {
namespace {

using testing::clause_table;
using testing::EffectiveOracle;
using testing::regime_exponents;

TEST(Scaling, ClauseTableSpansEveryClause) {
    const auto table = clause_table();
    ASSERT_EQ(table.size(), 20u);
    for (const auto& c : table) {
        const auto violations = check_exponents(c.exponents, c.geometry);
        std::vector<std::string> names;
        for (const auto& v : violations) names.push_back(v.clause);
        EXPECT_EQ(names, c.clauses) << c.name;
        if (c.clauses.empty()) {
            EXPECT_NO_THROW(validate_exponents(c.exponents, c.geometry)) << c.name;
        } else {
            try {
                validate_exponents(c.exponents, c.geometry);
                ADD_FAILURE() << c.name << " was accepted";
            } catch (const ValidationError& e) {
                EXPECT_EQ(e.clause(), c.clauses.front()) << c.name;
                for (const auto& clause : c.clauses)
                    EXPECT_NE(std::string(e.what()).find(clause), std::string::npos) << c.name;
            }
        }
    }
}

TEST(Scaling, ClassifiesFlowAndMechanicsRegimes) {
    const Geometry g;
    const FlowRegime flows[] = {FlowRegime::IdealConduit, FlowRegime::Conduit, FlowRegime::Neutral,
                                FlowRegime::Barrier, FlowRegime::Wall};
    for (int nu_K = -2; nu_K <= 2; ++nu_K) {
        const RegimeDescriptor r = classify(regime_exponents(1, nu_K), g);
        EXPECT_EQ(r.flow, flows[nu_K + 2]);
        EXPECT_EQ(r.mech, MechRegime::Soft);
        EXPECT_TRUE(r.storage_present);
        EXPECT_TRUE(r.biot_coupled);
        EXPECT_TRUE(r.flow_source_present);
        EXPECT_TRUE(r.mech_source_present);
        EXPECT_FALSE(r.W_is_zero);
    }
    ScalingExponents e = regime_exponents(2, 0);
    e.nu_K = Rational{-3, 2};
    e.nu_omega = Rational{0};
    e.nu_alpha_perp = Rational{1};
    e.nu_q = Rational{0};
    e.nu_f = Rational{0};
    const RegimeDescriptor r = classify(e, g);
    EXPECT_EQ(r.flow, FlowRegime::IdealConduit);
    EXPECT_EQ(r.mech, MechRegime::VerySoft);
    EXPECT_FALSE(r.storage_present);
    EXPECT_FALSE(r.biot_coupled);
    EXPECT_FALSE(r.flow_source_present);
    EXPECT_FALSE(r.mech_source_present);

    Geometry top_dirichlet;
    top_dirichlet.flow_tags[static_cast<int>(BoundarySegment::FractureTop)] = FlowTag::Dirichlet;
    EXPECT_TRUE(classify(regime_exponents(1, 0), top_dirichlet).W_is_zero);
}

TEST(Scaling, ThetaAndIota) {
    EXPECT_EQ(theta(Rational{3}), 1.0);
    EXPECT_EQ(iota(Rational{3}), 2.0);
    EXPECT_EQ(theta(Rational{1}), 0.0);
    EXPECT_EQ(iota(Rational{-1}), 0.0);
    EXPECT_EQ(theta(Rational{1, 2}), -0.25);
    EXPECT_EQ(iota(Rational{1, 2}), 0.75);
}

class EffectiveOracles : public ::testing::Test {
protected:
    const Geometry geometry = EffectiveOracle::geometry();
    const FracturedMesh mesh = build_mesh(geometry, 1.0 / 8.0);

    EffectiveParams effective(const MaterialFields& m) const {
        const ScalingExponents e = regime_exponents(1, -1);
        return compute_effective(m, e, classify(e, geometry), mesh);
    }
    double a_minus(int j) const { return geometry.aperture_minus(mesh.gamma_y[j]); }
    double a_plus(int j) const { return geometry.aperture_plus(mesh.gamma_y[j]); }
};

TEST_F(EffectiveOracles, NormalElasticityIsTwoLayerHarmonicMean) {
    const MaterialFields m = EffectiveOracle::elastic_materials();
    const EffectiveParams ep = effective(m);
    const auto& C = m[Subdomain::Fracture].C;
    for (int j = 0; j < mesh.gamma_count(); ++j) {
        const Mat2 analytic = EffectiveOracle::C_gamma_N(a_minus(j), a_plus(j));
        EXPECT_LE((ep.C_gamma_N[j] - analytic).lpNorm<Eigen::Infinity>(), 1e-12);
        const Mat2 fine_inverse = EffectiveOracle::fine_average(a_minus(j), a_plus(j), [&](double s) -> Mat2 {
            return normal_tensor(C(Vec2(s, mesh.gamma_y[j]), -1)).inverse();
        });
        EXPECT_LE((ep.C_gamma_N[j] - fine_inverse.inverse()).lpNorm<Eigen::Infinity>(), 1e-8);
    }
}

TEST_F(EffectiveOracles, TangentialConductivityIsSchurComplement) {
    const MaterialFields m = EffectiveOracle::elastic_materials();
    const EffectiveParams ep = effective(m);
    const auto& K = m[Subdomain::Fracture].K;
    for (int j = 0; j < mesh.gamma_count(); ++j) {
        EXPECT_NEAR(ep.K_gamma[j](1, 1), EffectiveOracle::K_gamma_tangential(), 1e-12);
        EXPECT_NEAR(ep.K_gamma[j](0, 0), 0.0, 1e-12);
        EXPECT_NEAR(ep.K_gamma[j](0, 1), 0.0, 1e-12);
        const Mat2 fine = EffectiveOracle::fine_average(a_minus(j), a_plus(j), [&](double s) -> Mat2 {
            const Mat2 k = K(Vec2(s, mesh.gamma_y[j]), -1);
            return k - k.col(0) * k.row(0) / k(0, 0);
        });
        EXPECT_LE((ep.K_gamma[j] - fine).lpNorm<Eigen::Infinity>(), 1e-8);
    }
}

TEST_F(EffectiveOracles, NormalConductivityIsTwoLayerHarmonicMean) {
    const MaterialFields m = EffectiveOracle::normal_conductivity_materials();
    const EffectiveParams ep = effective(m);
    const auto& K = m[Subdomain::Fracture].K;
    for (int j = 0; j < mesh.gamma_count(); ++j) {
        EXPECT_NEAR(ep.K_gamma_N[j], EffectiveOracle::K_gamma_N(a_minus(j), a_plus(j)), 1e-12);
        const double fine = EffectiveOracle::fine_average(
            a_minus(j), a_plus(j), [&](double s) { return 1.0 / K(Vec2(s, mesh.gamma_y[j]), -1)(0, 0); });
        EXPECT_NEAR(ep.K_gamma_N[j], 1.0 / fine, 1e-8);
    }
}

TEST_F(EffectiveOracles, NormalAverageOfSquaredNormalCoordinate) {
    const auto avg = average_normal(mesh, Field<double>([](const Vec2& x, int) { return x.x() * x.x(); }));
    for (int j = 0; j < mesh.gamma_count(); ++j) {
        EXPECT_NEAR(avg[j], EffectiveOracle::average_s_squared(a_minus(j), a_plus(j)), 1e-12);
        const double fine = EffectiveOracle::fine_average(a_minus(j), a_plus(j), [](double s) { return s * s; });
        EXPECT_NEAR(avg[j], fine, 1e-8);
    }
}

TEST_F(EffectiveOracles, ApertureAndFractureAverage) {
    const EffectiveParams ep = effective(default_materials());
    for (int j = 0; j < mesh.gamma_count(); ++j) EXPECT_NEAR(ep.aperture[j], a_minus(j) + a_plus(j), 1e-12);
    // Integral of a(y) = 1 + y/4 over (0, 1).
    EXPECT_NEAR(ep.fracture_area, 1.125, 1e-12);
    EXPECT_NEAR(average_fracture(mesh, Field<double>([](const Vec2&, int) { return 2.0; })), 2.0, 1e-12);
}

TEST(EffectiveBounds, NormalTensorIsUniformlyElliptic) {
    std::mt19937 rng(20261016);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int sample = 0; sample < 100; ++sample) {
        const Tensor4 V = testing::random_spd<3>(rng);
        const double c = testing::ellipticity_constant(V);
        ASSERT_GT(c, 0.0);
        const Mat2 CN = normal_tensor(V);
        const double lambda_min = Eigen::SelfAdjointEigenSolver<Mat2>(CN).eigenvalues().minCoeff();
        EXPECT_GE(lambda_min, 0.5 * c * (1.0 - 1e-12)) << "sample " << sample;
        const Vec2 xi(dist(rng), dist(rng));
        EXPECT_GE(xi.dot(CN * xi), 0.5 * c * xi.squaredNorm() * (1.0 - 1e-12));
    }
}

TEST(EffectiveBounds, TangentialConductivityIsPositiveOnTangents) {
    std::mt19937 rng(1016);
    const Geometry g = EffectiveOracle::geometry();
    const FracturedMesh mesh = build_mesh(g, 0.25);
    const ScalingExponents e = regime_exponents(1, -1);
    const RegimeDescriptor r = classify(e, g);
    for (int sample = 0; sample < 100; ++sample) {
        MaterialFields m = default_materials();
        m[Subdomain::Fracture].K = two_layer_field<Mat2>(testing::random_spd<2>(rng), testing::random_spd<2>(rng));
        const EffectiveParams ep = compute_effective(m, e, r, mesh);
        for (int j = 0; j < mesh.gamma_count(); ++j) {
            const Mat2& K = ep.K_gamma[j];
            EXPECT_NEAR(K(0, 1), K(1, 0), 1e-12);
            const double lambda_min = Eigen::SelfAdjointEigenSolver<Mat2>(K).eigenvalues().minCoeff();
            EXPECT_GE(lambda_min, -1e-12) << "sample " << sample;
            EXPECT_GT(K(1, 1), 0.0) << "sample " << sample;
        }
    }
}

TEST(Averages, NodalAverageIsExactForAffineData) {
    Geometry g;
    g.aperture_plus = PiecewiseLinear::affine(0.5, 0.75);
    const FracturedMesh mesh = build_mesh(g, 1.0 / 8.0);
    std::vector<double> values(mesh.vertex_count(), 0.0);
    for (int v = 0; v < mesh.vertex_count(); ++v) values[v] = 3.0 + 2.0 * mesh.vertices[v].x();
    const auto avg = average_normal(mesh, values);
    for (int j = 0; j < mesh.gamma_count(); ++j) {
        const double am = g.aperture_minus(mesh.gamma_y[j]), ap = g.aperture_plus(mesh.gamma_y[j]);
        EXPECT_NEAR(avg[j], 3.0 + (ap - am), 1e-12);
    }
}

TEST(Nondimensionalize, RoundTripRestoresFields) {
    DimensionalInputs in;
    in.a_star = 0.01;
    in.L_star = 2.0;
    in.K_star = 1e-5;
    in.rho_star = 1000.0;
    in.g_star = 9.81;
    in.T_final = 3600.0;
    FieldSet raw;
    raw.positions = {Vec2(0.0, 0.0), Vec2(1.0, 2.0)};
    raw.times = {0.0, 1800.0, 3600.0};
    raw.pressure_head = {0.5, 1.5};
    raw.displacement = {Vec2(1e-3, -2e-3), Vec2(0.0, 5e-4)};
    raw.C_bulk = 1e9, raw.K_bulk = 2e-5, raw.omega_bulk = 1e-6, raw.f_bulk = 10.0, raw.q_bulk = 1e-7;
    raw.C_frac = 1e7, raw.K_frac = 1e-3, raw.omega_frac = 1e-4, raw.f_frac = 5.0, raw.q_frac = 1e-6;
    raw.gravity = Vec2(0.0, -9.81);
    const ScalingExponents e = regime_exponents(1, -1);

    const Nondimensionalized nd = nondimensionalize(in, raw, e);
    EXPECT_DOUBLE_EQ(nd.scales.epsilon, 0.005);
    EXPECT_DOUBLE_EQ(nd.scales.t_star, 2.0e5);
    EXPECT_DOUBLE_EQ(nd.T, 3600.0 / 2.0e5);
    EXPECT_DOUBLE_EQ(nd.fields.K_frac, 1e-3 / (std::pow(0.005, -1.0) * 1e-5));
    EXPECT_DOUBLE_EQ(nd.fields.gravity.y(), -1.0);

    const FieldSet back = redimensionalize(nd.scales, nd.fields);
    const auto rel = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
    for (std::size_t i = 0; i < raw.times.size(); ++i) EXPECT_TRUE(rel(back.times[i], raw.times[i]));
    for (std::size_t i = 0; i < raw.positions.size(); ++i) {
        EXPECT_LE((back.positions[i] - raw.positions[i]).norm(), 1e-12);
        EXPECT_LE((back.displacement[i] - raw.displacement[i]).norm(), 1e-15);
        EXPECT_TRUE(rel(back.pressure_head[i], raw.pressure_head[i]));
    }
    for (auto [a, b] : {std::pair{back.C_bulk, raw.C_bulk}, {back.K_bulk, raw.K_bulk}, {back.omega_bulk, raw.omega_bulk},
                        {back.f_bulk, raw.f_bulk}, {back.q_bulk, raw.q_bulk}, {back.C_frac, raw.C_frac},
                        {back.K_frac, raw.K_frac}, {back.omega_frac, raw.omega_frac}, {back.f_frac, raw.f_frac},
                        {back.q_frac, raw.q_frac}})
        EXPECT_TRUE(rel(a, b)) << a << " vs " << b;
    EXPECT_LE((back.gravity - raw.gravity).norm(), 1e-12);
}

TEST(Nondimensionalize, RejectsNonPositiveReferences) {
    DimensionalInputs in;
    in.L_star = 0.0;
    EXPECT_THROW(nondimensionalize(in, FieldSet{}), ValidationError);
}

}  // namespace
}  // namespace fracbiot
