/*
 * tests/test_utilities.cpp
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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracbiot/config.hpp"
#include "fracbiot/errors.hpp"
#include "fracbiot/io.hpp"
#include "fracbiot/norms.hpp"
#include "fracbiot/rational.hpp"

namespace fracbiot {
namespace {

TEST(Rational, NormalizesSignAndCommonFactors) {
    const Rational r(6, -4);
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 2);
    EXPECT_EQ(r.str(), "-3/2");
    EXPECT_EQ(Rational(4, 2).str(), "2");
    EXPECT_THROW(Rational(1, 0), ValidationError);
}

TEST(Rational, ArithmeticAndOrderingAreExact) {
    const Rational a(1, 3), b(1, 6);
    EXPECT_EQ(a + b, Rational(1, 2));
    EXPECT_EQ(a - b, Rational(1, 6));
    EXPECT_EQ(a * b, Rational(1, 18));
    EXPECT_EQ(a / b, Rational(2));
    EXPECT_EQ(-a, Rational(-1, 3));
    EXPECT_LT(b, a);
    EXPECT_EQ(Rational(2) * Rational(-1, 2), Rational(-1));
    EXPECT_THROW(a / Rational(0), ValidationError);
}

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
    EXPECT_EQ(Rational::parse("-1/2"), Rational(-1, 2));
    EXPECT_EQ(Rational::parse("3"), Rational(3));
    EXPECT_EQ(Rational::parse("-0.25"), Rational(-1, 4));
    EXPECT_EQ(Rational::parse("1e-3"), Rational(1, 1000));
    EXPECT_EQ(Rational::parse(" 2/4 "), Rational(1, 2));
    for (const char* bad : {"", "1/", "a", "1/0", "1.2.3", "--1"})
        EXPECT_THROW(Rational::parse(bad), ValidationError) << bad;
    std::ostringstream os;
    os << Rational(5, 3);
    EXPECT_EQ(os.str(), "5/3");
}

TEST(Io, FormatsDoublesRoundTrip) {
    for (double v : {0.1, -1.0 / 3.0, 1e-300, 12345.678, 0.0}) {
        const std::string s = format_double(v);
        EXPECT_EQ(std::stod(s), v) << s;
    }
    EXPECT_EQ(format_double(-0.0), format_double(0.0));
    EXPECT_EQ(csv_row({"a", "1", "x"}), "a,1,x\n");
}

TEST(Io, HashIsStableFnv1a) {
    EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
    EXPECT_NE(fnv1a_hex("abc"), fnv1a_hex("abd"));
}

TEST(Io, CreatesDirectories) {
    const auto dir = std::filesystem::temp_directory_path() / "fracbiot_io_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    ensure_directory(dir);
    EXPECT_TRUE(std::filesystem::is_directory(dir));
    ensure_directory(dir);
    std::filesystem::remove_all(dir.parent_path());
}

class Norms : public ::testing::Test {
protected:
    const FracturedMesh mesh = build_mesh(Geometry{}, 0.125);

    std::vector<double> vertex_field(const std::function<double(const Vec2&)>& fn) const {
        std::vector<double> v(mesh.vertex_count());
        for (int i = 0; i < mesh.vertex_count(); ++i) v[i] = fn(mesh.vertices[i]);
        return v;
    }
};

TEST_F(Norms, IntegratesP1FieldsExactly) {
    const auto ones = vertex_field([](const Vec2&) { return 1.0; });
    EXPECT_NEAR(compute_norm(mesh, ones, NormKind::L2_bulk), std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(compute_norm(mesh, ones, NormKind::L2_frac), 1.0, 1e-12);
    EXPECT_NEAR(compute_norm(mesh, ones, NormKind::L2_gamma), 1.0, 1e-12);

    // f = y: ||f||^2 = 1/3 per unit square, |grad f| = 1.
    const auto y = vertex_field([](const Vec2& x) { return x.y(); });
    EXPECT_NEAR(compute_norm(mesh, y, NormKind::L2_bulk), std::sqrt(2.0 / 3.0), 1e-12);
    EXPECT_NEAR(compute_norm(mesh, y, NormKind::H1_bulk), std::sqrt(2.0 / 3.0 + 2.0), 1e-12);
    EXPECT_NEAR(compute_norm(mesh, y, NormKind::HN1_frac), std::sqrt(1.0 / 3.0), 1e-12);
    EXPECT_NEAR(compute_norm(mesh, y, NormKind::H1_frac), std::sqrt(1.0 / 3.0 + 1.0), 1e-12);

    NormWeights w;
    w.bulk = 2.0;
    EXPECT_NEAR(compute_norm(mesh, ones, NormKind::L2_bulk, w), 2.0 * std::sqrt(2.0), 1e-12);
    std::vector<Vec2> vec(mesh.vertex_count(), Vec2(3.0, 4.0));
    EXPECT_NEAR(compute_norm(mesh, vec, NormKind::L2_frac), 5.0, 1e-12);
    EXPECT_THROW(compute_norm(mesh, ones, NormKind::L2_time_composite), ValidationError);
}

TEST_F(Norms, TimeCompositesUseTrapezoidalAndDifferenceQuotients) {
    const std::vector<double> times{0.0, 0.5, 1.0};
    EXPECT_NEAR(l2_in_time(times, {1.0, 1.0, 1.0}), 1.0, 1e-15);
    EXPECT_NEAR(l2_in_time(times, {0.0, 1.0, 0.0}), std::sqrt(0.5), 1e-15);
    // Differences of squared size 0.25 over steps of 0.5 contribute 0.5 each.
    EXPECT_NEAR(h1_in_time(times, {1.0, 1.0, 1.0}, {0.0, 0.25, 0.25}), std::sqrt(2.0), 1e-15);
    EXPECT_THROW(l2_in_time(times, {1.0}), ValidationError);

    const auto ones = vertex_field([](const Vec2&) { return 1.0; });
    const std::vector<std::vector<double>> series{ones, ones, ones};
    EXPECT_NEAR(compute_time_norm(mesh, times, series, NormKind::L2_frac, NormKind::H1_time_composite), 1.0,
                1e-12);
}

TEST_F(Norms, ErrorsVanishForInterpolatedLinearFunctions) {
    const auto f = vertex_field([](const Vec2& x) { return 1.0 + 2.0 * x.x() - x.y(); });
    const auto exact = [](Subdomain, const Vec2& x) { return 1.0 + 2.0 * x.x() - x.y(); };
    const auto grad = [](Subdomain, const Vec2&) { return Vec2(2.0, -1.0); };
    EXPECT_LT(l2_error(mesh, f, exact), 1e-13);
    EXPECT_LT(h1_seminorm_error(mesh, f, grad), 1e-13);
}

class Config : public ::testing::Test {
protected:
    static nlohmann::json sample() {
        return nlohmann::json::parse(R"({
            "geometry": {"aperture_plus": {"breakpoints": [0, 1], "values": [0.5, 0.75]}},
            "exponents": {"nu_C": "1", "nu_K": "-1/2", "nu_omega": "0", "nu_alpha_par": "0",
                          "nu_alpha_perp": "1", "nu_f": "-1", "nu_q": "0"},
            "materials": {
                "fracture": {"C": {"lambda": 1, "mu": "1/2"},
                             "K": {"kind": "two_layer", "lower": 1, "upper": [[2, 0], [0, 1]]},
                             "q": {"kind": "affine_in_y", "at0": 0, "at1": 1}},
                "gravity": [0, -1]
            },
            "discretization": {"h": 0.125, "dt": 0.1, "T": 0.5},
            "epsilon": 0.5,
            "sweep": {"eps_list": [0.5, 0.25], "fracture_source_power": 0},
            "limit": {"prefer_reduced": true}
        })");
    }
};

TEST_F(Config, ParsesEveryBlock) {
    const RunConfig cfg = RunConfig::from_json(sample());
    EXPECT_EQ(cfg.exponents.nu_K, Rational(-1, 2));
    EXPECT_EQ(cfg.h, 0.125);
    EXPECT_EQ(cfg.dt, 0.1);
    EXPECT_EQ(cfg.epsilon, 0.5);
    EXPECT_EQ(cfg.eps_list, (std::vector<double>{0.5, 0.25}));
    EXPECT_TRUE(cfg.prefer_reduced);
    EXPECT_DOUBLE_EQ(cfg.geometry.aperture_plus(0.5), 0.625);

    const MaterialFields m = cfg.build_materials();
    EXPECT_EQ(m.gravity, Vec2(0.0, -1.0));
    const auto& f = m[Subdomain::Fracture];
    EXPECT_EQ(f.K(Vec2(-0.1, 0.5), 0)(0, 0), 1.0);
    EXPECT_EQ(f.K(Vec2(0.1, 0.5), 0)(0, 0), 2.0);
    EXPECT_EQ(f.C(Vec2(0.0, 0.0), 0), isotropic_tensor(1.0, 0.5));
    EXPECT_DOUBLE_EQ(f.q(Vec2(0.0, 0.25), 0.0), 0.25);
}

TEST_F(Config, CanonicalEchoRoundTrips) {
    const RunConfig cfg = RunConfig::from_json(sample());
    const nlohmann::json echo = cfg.to_json();
    const RunConfig again = RunConfig::from_json(echo);
    EXPECT_EQ(again.to_json(), echo);
    EXPECT_EQ(again.hash(), cfg.hash());
    EXPECT_EQ(cfg.hash().size(), 16u);
    RunConfig other = cfg;
    other.dt = 0.05;
    EXPECT_NE(other.hash(), cfg.hash());
}

TEST_F(Config, RejectsUnknownKeysAndBadValues) {
    auto doc = sample();
    doc["discretisation"] = nlohmann::json::object();
    EXPECT_THROW(RunConfig::from_json(doc), ValidationError);

    doc = sample();
    doc["exponents"]["nu_K"] = "1/0";
    EXPECT_THROW(RunConfig::from_json(doc), ValidationError);

    doc = sample();
    doc["materials"]["fracture"]["K"] = {{"kind", "cubic"}};
    EXPECT_THROW(RunConfig::from_json(doc).build_materials(), ValidationError);

    doc = sample();
    doc["materials"]["plus"] = {{"f", {{"kind", "per_element"}, {"values", {1, 2}}}}};
    EXPECT_THROW(RunConfig::from_json(doc).build_materials(), ValidationError);
}

TEST_F(Config, LoadsFilesAndReportsParseErrors) {
    const auto dir = std::filesystem::temp_directory_path() / "fracbiot_config_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream os(dir / "good.json");
        os << sample().dump();
        std::ofstream bad(dir / "bad.json");
        bad << "{ \"epsilon\": ";
    }
    EXPECT_EQ(load_config((dir / "good.json").string()).hash(), RunConfig::from_json(sample()).hash());
    try {
        load_config((dir / "bad.json").string());
        ADD_FAILURE() << "malformed JSON was accepted";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.clause(), "config");
    }
    EXPECT_THROW(load_config((dir / "missing.json").string()), ValidationError);
    std::filesystem::remove_all(dir);
}

TEST_F(Config, SweepConfigurationExtendsWhenSlow) {
    const RunConfig cfg = RunConfig::from_json(sample());
    const SweepConfig fast = cfg.sweep(2, false);
    const SweepConfig slow = cfg.sweep(2, true);
    EXPECT_EQ(fast.eps_list, (std::vector<double>{0.5, 0.25}));
    EXPECT_EQ(slow.eps_list, (std::vector<double>{0.5, 0.25, 0.125}));
    EXPECT_EQ(fast.jobs, 2);
    EXPECT_EQ(fast.config_hash, cfg.hash());
    const BiotRunConfig run = cfg.full_run();
    EXPECT_EQ(run.epsilon, 0.5);
    EXPECT_EQ(run.T, 0.5);
}

}  // namespace
}  // namespace fracbiot
