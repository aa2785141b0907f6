/*
 * src/config.cpp
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

#include "fracbiot/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fracbiot/errors.hpp"
#include "fracbiot/io.hpp"

namespace fracbiot {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) { throw ValidationError("config", message); }

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) fail(where + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
}

/// Number or rational string such as "1/16".
double number(const json& v, const std::string& what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            return Rational::parse(v.get<std::string>()).to_double();
        } catch (const std::exception&) {
        }
    }
    fail(what + " must be a number or a rational string");
}

Rational rational(const json& v, const std::string& what) {
    try {
        if (v.is_string()) return Rational::parse(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    } catch (const std::exception&) {
    }
    fail(what + " must be a rational string such as \"-1/2\"");
}

PiecewiseLinear aperture(const json& v, const std::string& what) {
    if (v.is_number() || v.is_string()) return PiecewiseLinear::constant(number(v, what));
    only_keys(v, {"breakpoints", "values"}, what);
    PiecewiseLinear p;
    for (const auto& b : v.at("breakpoints")) p.breakpoints.push_back(number(b, what));
    for (const auto& x : v.at("values")) p.values.push_back(number(x, what));
    if (p.breakpoints.size() < 2 || p.breakpoints.size() != p.values.size())
        fail(what + " needs matching breakpoints and values (at least two)");
    return p;
}

json aperture_json(const PiecewiseLinear& p) { return {{"breakpoints", p.breakpoints}, {"values", p.values}}; }

Mat2 matrix(const json& v, const std::string& what) {
    if (v.is_number()) return v.get<double>() * Mat2::Identity();
    if (v.is_array() && v.size() == 2 && v[0].size() == 2 && v[1].size() == 2) {
        Mat2 m;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m(i, j) = number(v[i][j], what);
        return m;
    }
    fail(what + " must be a number or a 2x2 array");
}

Tensor4 tensor(const json& v, const std::string& what) {
    if (v.is_object()) {
        only_keys(v, {"lambda", "mu"}, what);
        return isotropic_tensor(number(v.at("lambda"), what), number(v.at("mu"), what));
    }
    if (v.is_array() && v.size() == 3) {
        Tensor4 t;
        for (int i = 0; i < 3; ++i) {
            if (v[i].size() != 3) fail(what + " must be a 3x3 Voigt array");
            for (int j = 0; j < 3; ++j) t(i, j) = number(v[i][j], what);
        }
        return t;
    }
    fail(what + " must be {\"lambda\", \"mu\"} or a 3x3 Voigt array");
}

Vec2 vector(const json& v, const std::string& what) {
    if (v.is_array() && v.size() == 2) return Vec2(number(v[0], what), number(v[1], what));
    fail(what + " must be a two-component array");
}

template <class T, class Parse>
Field<T> field(const json& v, const std::string& what, Parse&& parse) {
    if (!v.is_object() || !v.contains("kind")) return constant_field<T>(parse(v, what));
    const std::string kind = v.at("kind").get<std::string>();
    if (kind == "constant") {
        only_keys(v, {"kind", "value"}, what);
        return constant_field<T>(parse(v.at("value"), what));
    }
    if (kind == "two_layer") {
        only_keys(v, {"kind", "lower", "upper"}, what);
        return two_layer_field<T>(parse(v.at("lower"), what), parse(v.at("upper"), what));
    }
    if (kind == "affine_in_y") {
        only_keys(v, {"kind", "at0", "at1"}, what);
        return affine_in_y_field<T>(parse(v.at("at0"), what), parse(v.at("at1"), what));
    }
    if (kind == "per_element") {
        only_keys(v, {"kind", "values"}, what);
        std::vector<T> values;
        for (const auto& x : v.at("values")) values.push_back(parse(x, what));
        return per_element_field<T>(std::move(values));
    }
    fail(what + ": unknown coefficient kind '" + kind + "'");
}

/// Sources accept constant and affine-in-y specs and do not depend on time.
template <class T, class Parse>
Source<T> source(const json& v, const std::string& what, Parse&& parse) {
    if (v.is_object() && v.value("kind", "") == "per_element") fail(what + ": sources cannot be per_element");
    const Field<T> f = field<T>(v, what, parse);
    return [f](const Vec2& x, double) { return f(x, -1); };
}

void apply_subdomain(SubdomainMaterial& m, const json& block, const std::string& where) {
    only_keys(block, {"C", "K", "alpha", "omega", "f", "q", "p0"}, where);
    const auto scalar = [](const json& v, const std::string& w) { return number(v, w); };
    if (block.contains("C")) m.C = field<Tensor4>(block["C"], where + ".C", tensor);
    if (block.contains("K")) m.K = field<Mat2>(block["K"], where + ".K", matrix);
    if (block.contains("alpha")) m.alpha = field<Mat2>(block["alpha"], where + ".alpha", matrix);
    if (block.contains("omega")) m.omega = field<double>(block["omega"], where + ".omega", scalar);
    if (block.contains("f")) m.f = source<Vec2>(block["f"], where + ".f", vector);
    if (block.contains("q")) m.q = source<double>(block["q"], where + ".q", scalar);
    if (block.contains("p0")) {
        const Source<double> p0 = source<double>(block["p0"], where + ".p0", scalar);
        m.p0 = [p0](const Vec2& x) { return p0(x, 0.0); };
    }
}

}  // namespace

MaterialFields materials_from_json(const json& block) {
    only_keys(block, {"plus", "minus", "fracture", "gravity", "zero_data"}, "materials");
    MaterialFields m = default_materials();
    if (block.value("zero_data", false)) m = with_zero_data(std::move(m));
    for (Subdomain s : {Subdomain::Plus, Subdomain::Minus, Subdomain::Fracture}) {
        const std::string name = to_string(s);
        if (block.contains(name)) apply_subdomain(m[s], block[name], "materials." + name);
    }
    if (block.contains("gravity")) m.gravity = vector(block["gravity"], "materials.gravity");
    return m;
}

json RunConfig::to_json() const {
    json tags = json::object();
    for (int i = 0; i < kBoundarySegmentCount; ++i) {
        const auto s = static_cast<BoundarySegment>(i);
        tags[to_string(s)] = geometry.tag(s) == FlowTag::Dirichlet ? "dirichlet" : "neumann";
    }
    const auto& e = exponents;
    return {
        {"geometry",
         {{"aperture_plus", aperture_json(geometry.aperture_plus)},
          {"aperture_minus", aperture_json(geometry.aperture_minus)},
          {"flow_tags", tags}}},
        {"exponents",
         {{"nu_C", e.nu_C.str()},
          {"nu_K", e.nu_K.str()},
          {"nu_omega", e.nu_omega.str()},
          {"nu_alpha_par", e.nu_alpha_par.str()},
          {"nu_alpha_perp", e.nu_alpha_perp.str()},
          {"nu_f", e.nu_f.str()},
          {"nu_q", e.nu_q.str()}}},
        {"materials", materials},
        {"discretization", {{"h", h}, {"dt", dt}, {"T", T}}},
        {"epsilon", epsilon},
        {"sweep", {{"eps_list", eps_list}, {"fracture_source_power", fracture_source_power}}},
        {"limit", {{"prefer_reduced", prefer_reduced}}},
    };
}

RunConfig RunConfig::from_json(const json& doc) {
    only_keys(doc, {"geometry", "exponents", "materials", "discretization", "epsilon", "sweep", "limit"}, "config");
    RunConfig c;
    if (doc.contains("geometry")) {
        const json& g = doc["geometry"];
        only_keys(g, {"aperture_plus", "aperture_minus", "flow_tags"}, "geometry");
        if (g.contains("aperture_plus")) c.geometry.aperture_plus = aperture(g["aperture_plus"], "aperture_plus");
        if (g.contains("aperture_minus")) c.geometry.aperture_minus = aperture(g["aperture_minus"], "aperture_minus");
        if (g.contains("flow_tags")) {
            const json& tags = g["flow_tags"];
            if (!tags.is_object()) fail("geometry.flow_tags must be an object");
            for (const auto& [key, value] : tags.items()) {
                int idx = -1;
                for (int i = 0; i < kBoundarySegmentCount; ++i)
                    if (to_string(static_cast<BoundarySegment>(i)) == key) idx = i;
                if (idx < 0) fail("unknown boundary segment '" + key + "'");
                const std::string v = value.is_string() ? value.get<std::string>() : "";
                if (v != "dirichlet" && v != "neumann") fail("flow tag of " + key + " must be dirichlet or neumann");
                c.geometry.flow_tags[idx] = v == "dirichlet" ? FlowTag::Dirichlet : FlowTag::Neumann;
            }
        }
    }
    if (doc.contains("exponents")) {
        const json& e = doc["exponents"];
        only_keys(e, {"nu_C", "nu_K", "nu_omega", "nu_alpha_par", "nu_alpha_perp", "nu_f", "nu_q"}, "exponents");
        auto& x = c.exponents;
        const std::pair<const char*, Rational*> slots[] = {
            {"nu_C", &x.nu_C},          {"nu_K", &x.nu_K},   {"nu_omega", &x.nu_omega},
            {"nu_alpha_par", &x.nu_alpha_par}, {"nu_alpha_perp", &x.nu_alpha_perp},
            {"nu_f", &x.nu_f},          {"nu_q", &x.nu_q}};
        for (const auto& [key, slot] : slots)
            if (e.contains(key)) *slot = rational(e[key], std::string("exponents.") + key);
    }
    if (doc.contains("materials")) {
        c.materials = doc["materials"];
        materials_from_json(c.materials);
    }
    if (doc.contains("discretization")) {
        const json& d = doc["discretization"];
        only_keys(d, {"h", "dt", "T"}, "discretization");
        if (d.contains("h")) c.h = number(d["h"], "discretization.h");
        if (d.contains("dt")) c.dt = number(d["dt"], "discretization.dt");
        if (d.contains("T")) c.T = number(d["T"], "discretization.T");
    }
    if (doc.contains("epsilon")) c.epsilon = number(doc["epsilon"], "epsilon");
    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        only_keys(s, {"eps_list", "fracture_source_power"}, "sweep");
        if (s.contains("eps_list")) {
            c.eps_list.clear();
            for (const auto& v : s["eps_list"]) c.eps_list.push_back(number(v, "sweep.eps_list"));
        }
        if (s.contains("fracture_source_power"))
            c.fracture_source_power = number(s["fracture_source_power"], "sweep.fracture_source_power");
    }
    if (doc.contains("limit")) {
        const json& l = doc["limit"];
        only_keys(l, {"prefer_reduced"}, "limit");
        if (l.contains("prefer_reduced")) c.prefer_reduced = l["prefer_reduced"].get<bool>();
    }
    if (!(c.h > 0.0 && c.h <= 1.0)) fail("discretization.h must lie in (0, 1]");
    return c;
}

MaterialFields RunConfig::build_materials() const { return materials_from_json(materials); }

std::string RunConfig::hash() const { return fnv1a_hex(to_json().dump()); }

BiotRunConfig RunConfig::full_run() const {
    BiotRunConfig r;
    r.exponents = exponents;
    r.epsilon = epsilon;
    r.materials = build_materials();
    r.T = T;
    r.dt = dt;
    return r;
}

SweepConfig RunConfig::sweep(int jobs, bool slow) const {
    SweepConfig s;
    s.geometry = geometry;
    s.h = h;
    s.T = T;
    s.dt = dt;
    s.exponents = exponents;
    s.materials = build_materials();
    s.eps_list = eps_list;
    if (slow && !eps_list.empty()) s.eps_list.push_back(eps_list.back() / 2.0);
    s.jobs = jobs;
    s.fracture_source_power = fracture_source_power;
    s.config_hash = hash();
    return s;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        fail(std::string("unparsable config: ") + e.what());
    }
    try {
        return RunConfig::from_json(doc);
    } catch (const json::exception& e) {
        fail(std::string("invalid config: ") + e.what());
    }
}

}  // namespace fracbiot
