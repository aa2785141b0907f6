/*
 * include/fracbiot/config.hpp
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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracbiot/limit_solver.hpp"
#include "fracbiot/materials.hpp"
#include "fracbiot/mesh.hpp"
#include "fracbiot/scaling.hpp"
#include "fracbiot/study.hpp"

namespace fracbiot {

/// Run configuration read from a JSON file. The document keeps the
/// materials block as written, so that echoing a configuration and reading
/// the echo back reproduces it exactly; coefficient fields are built from
/// that block on demand.
///
/// Top-level keys (all optional):
///   geometry        {"aperture_plus", "aperture_minus", "flow_tags"}
///   exponents       {"nu_C", "nu_K", "nu_omega", "nu_alpha_par", "nu_alpha_perp", "nu_f", "nu_q"}
///                   as rational strings such as "-1/2"
///   materials       {"plus", "minus", "fracture": {coefficient specs}, "gravity": [gx, gy]}
///   discretization  {"h", "dt", "T"}
///   epsilon         number, used by solve-full
///   sweep           {"eps_list": [...], "fracture_source_power": 0}
///   limit           {"prefer_reduced": false}
///
/// The full schema with examples is documented in the README.
struct RunConfig {
    Geometry geometry;
    ScalingExponents exponents;
    nlohmann::json materials = nlohmann::json::object();
    double h = 1.0 / 16.0;
    double dt = 1.0 / 20.0;
    double T = 0.5;
    double epsilon = 0.25;
    std::vector<double> eps_list{0.5, 0.25, 0.125, 0.0625};
    double fracture_source_power = 0.0;
    bool prefer_reduced = false;

    /// Canonical JSON form: every field written out, exponents as "p/q".
    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& doc);

    MaterialFields build_materials() const;
    /// FNV-1a hash of the canonical JSON dump.
    std::string hash() const;

    BiotRunConfig full_run() const;
    SweepConfig sweep(int jobs, bool slow) const;
};

/// Reads and parses a configuration file. Malformed JSON, unknown keys and
/// invalid values raise ValidationError with clause "config".
RunConfig load_config(const std::string& path);

/// Coefficient specs of the materials block.
///
/// Tensors and matrices:  C as {"lambda": l, "mu": m} or a 3x3 Voigt matrix;
///                        K and alpha as a number (times identity) or [[a, b], [c, d]].
/// Every coefficient may be given as a plain value (constant) or as
///   {"kind": "constant", "value": X}
///   {"kind": "two_layer", "lower": X, "upper": X}   (split at the normal coordinate 0)
///   {"kind": "affine_in_y", "at0": X, "at1": X}
///   {"kind": "per_element", "values": [X, ...]}     (one entry per triangle)
/// Sources f, q and the initial pressure p0 accept "constant" and
/// "affine_in_y" specs; f and q are time independent.
MaterialFields materials_from_json(const nlohmann::json& block);

}  // namespace fracbiot
