/*
 * tests/test_study.cpp
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

#include <map>
#include <sstream>

#include "fracbiot/errors.hpp"
#include "fracbiot/study.hpp"
#include "test_support.hpp"

namespace fracbiot {
namespace {

using testing::regime_exponents;

SweepConfig small_sweep(int nu_C, int nu_K) {
    SweepConfig c;
    c.h = 0.25;
    c.T = 0.1;
    c.dt = 0.05;
    c.eps_list = {0.5, 0.25};
    c.exponents = regime_exponents(nu_C, nu_K);
    c.config_hash = "0123456789abcdef";
    return c;
}

TEST(Study, ValidatesEpsilonLists) {
    EXPECT_NO_THROW(validate_eps_list({1.0, 0.5, 0.25}));
    EXPECT_THROW(validate_eps_list({}), ValidationError);
    EXPECT_THROW(validate_eps_list({0.5, 0.5}), ValidationError);
    EXPECT_THROW(validate_eps_list({0.25, 0.5}), ValidationError);
    EXPECT_THROW(validate_eps_list({1.5, 0.5}), ValidationError);
    EXPECT_THROW(validate_eps_list({0.5, 0.0}), ValidationError);
    SweepConfig c = small_sweep(1, 0);
    c.eps_list = {0.25, 0.5};
    EXPECT_THROW(run_sweep(c), ValidationError);
}

TEST(Study, StrictDecreaseHonoursMinimumDrop) {
    EXPECT_TRUE(strictly_decreasing({4.0, 3.0, 2.0}));
    EXPECT_FALSE(strictly_decreasing({4.0, 4.0}));
    EXPECT_TRUE(strictly_decreasing({1.0, 0.9}, 0.05));
    EXPECT_FALSE(strictly_decreasing({1.0, 0.96}, 0.05));
    EXPECT_TRUE(strictly_decreasing({}));
    EXPECT_TRUE(strictly_decreasing({1.0}));
}

TEST(Study, TimeDerivativeRowsNeedCompatibleSources) {
    EXPECT_TRUE(time_derivative_rows_enabled(regime_exponents(1, 0)));
    ScalingExponents e = regime_exponents(1, 0);
    e.nu_omega = Rational{1};
    EXPECT_FALSE(time_derivative_rows_enabled(e));
}

TEST(Study, ReportListsEveryTheoremNormOncePerEpsilon) {
    for (int nu_K : {-2, 0, 2}) {
        const SweepConfig c = small_sweep(1, nu_K);
        const ErrorReport report = run_sweep(c);
        const RegimeDescriptor r = classify(c.exponents, c.geometry);
        std::map<std::pair<double, std::string>, int> count;
        for (const auto& row : report.rows) ++count[{row.epsilon, row.norm_name}];
        for (const auto& [key, n] : count) EXPECT_EQ(n, 1) << key.second;
        for (const auto& name : regime_norm_names(r, time_derivative_rows_enabled(c.exponents))) {
            for (double eps : c.eps_list) EXPECT_EQ(count[std::pair(eps, name)], 1) << name << " at " << eps;
        }
        for (const auto& name : report.norm_names()) EXPECT_EQ(report.series(name).size(), c.eps_list.size());
        EXPECT_FALSE(report.verdicts.empty());
        EXPECT_EQ(report.h, c.h);
        EXPECT_EQ(report.config_hash, c.config_hash);
    }
}

TEST(Study, ZeroDataGivesZeroErrors) {
    SweepConfig c = small_sweep(2, -1);
    c.materials = with_zero_data(default_materials());
    const ErrorReport report = run_sweep(c);
    ASSERT_FALSE(report.rows.empty());
    for (const auto& row : report.rows) EXPECT_EQ(row.value, 0.0) << row.norm_name;

    const FracturedMesh mesh = build_mesh(c.geometry, c.h);
    const SweepRuns runs = run_sweep_solutions(mesh, c);
    const AprioriReport ap = check_apriori(mesh, c.eps_list, runs.full, c.exponents);
    EXPECT_EQ(ap.quantities.size(), 5u);
    EXPECT_FALSE(ap.flagged());
    for (const auto& q : ap.quantities)
        for (double v : q.values) EXPECT_EQ(v, 0.0) << q.name;
}

TEST(Study, ReportBytesAreDeterministic) {
    SweepConfig c = small_sweep(1, -1);
    const ErrorReport a = run_sweep(c);
    c.jobs = 2;
    const ErrorReport b = run_sweep(c);
    std::ostringstream ca, cb, va, vb;
    a.write_csv(ca);
    b.write_csv(cb);
    a.write_verdicts(va);
    b.write_verdicts(vb);
    EXPECT_EQ(ca.str(), cb.str());
    EXPECT_EQ(va.str(), vb.str());
    EXPECT_NE(ca.str().find("epsilon"), std::string::npos);
    EXPECT_EQ(ca.str().find("\n\n"), std::string::npos);
}

TEST(Study, InadmissibleFractureSourceIsFlagged) {
    SweepConfig c = small_sweep(1, 0);
    c.h = 0.125;
    c.eps_list = {0.5, 0.25, 0.125};
    c.fracture_source_power = -2.0;
    const FracturedMesh mesh = build_mesh(c.geometry, c.h);
    const SweepRuns runs = run_sweep_solutions(mesh, c);
    EXPECT_TRUE(check_apriori(mesh, c.eps_list, runs.full, c.exponents).flagged());
    c.fracture_source_power = 0.0;
    const SweepRuns admissible = run_sweep_solutions(mesh, c);
    EXPECT_FALSE(check_apriori(mesh, c.eps_list, admissible.full, c.exponents).flagged());
}

TEST(Study, StructuralDiagnosticsOfLimitSolutions) {
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.25);
    const MaterialFields m = default_materials();
    const LimitProblem open = build_limit_problem(mesh, m, regime_exponents(1, 0));
    const TransientSolution sol = solve_limit(open, m, 0.1, 0.05);
    EXPECT_LT(continuity_defect(mesh, sol), 1e-12);
    EXPECT_GT(fracture_gradient_norm(mesh, sol), 0.0);
    const LimitProblem ideal = build_limit_problem(mesh, m, regime_exponents(1, -2));
    const TransientSolution constant = solve_limit(ideal, m, 0.1, 0.05);
    EXPECT_LT(continuity_defect(mesh, constant), 1e-12);
    EXPECT_EQ(fracture_gradient_norm(mesh, constant), 0.0);
}

}  // namespace
}  // namespace fracbiot
