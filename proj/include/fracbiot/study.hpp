/*
 * include/fracbiot/study.hpp
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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracbiot/full_solver.hpp"
#include "fracbiot/limit_solver.hpp"
#include "fracbiot/norms.hpp"

namespace fracbiot {

struct SweepConfig {
    Geometry geometry;
    double h = 1.0 / 16.0;
    double T = 0.5;
    double dt = 1.0 / 20.0;
    ScalingExponents exponents;
    MaterialFields materials = default_materials();
    std::vector<double> eps_list{0.5, 0.25, 0.125, 0.0625};
    int jobs = 1;
    double tolerance = 1e-10;
    /// The fracture flow source of the epsilon problem is multiplied by
    /// eps^fracture_source_power (zero keeps the data epsilon-independent).
    double fracture_source_power = 0.0;
    std::string config_hash;
};

struct ErrorRow {
    double epsilon = 0.0;
    std::string norm_name;
    double value = 0.0;
};

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ErrorReport {
    std::vector<ErrorRow> rows;
    std::string regime;
    double h = 0.0;
    double dt = 0.0;
    std::string config_hash;
    std::vector<Verdict> verdicts;

    /// Values of one norm in sweep order; empty if the norm is absent.
    std::vector<double> series(const std::string& norm_name) const;
    std::vector<std::string> norm_names() const;
    bool all_pass() const;

    void write_csv(std::ostream& os) const;
    void write_verdicts(std::ostream& os) const;
};

/// Full solutions per epsilon plus the limit solution, all on one mesh.
struct SweepRuns {
    std::vector<double> eps_list;
    std::vector<TransientSolution> full;
    LimitProblem limit_problem;
    TransientSolution limit;
    RegimeDescriptor regime;
    MaterialFields materials;  ///< epsilon-independent data of the sweep
};

/// Throws ValidationError unless the list is non-empty and strictly decreasing in (0, 1].
void validate_eps_list(const std::vector<double>& eps_list);

/// Norm names the convergence theorem of the regime lists (L2-in-time family
/// first, then the H1-in-time family when `with_time_derivative`).
std::vector<std::string> regime_norm_names(const RegimeDescriptor& regime, bool with_time_derivative);

/// Whether the data allow the H1-in-time convergences (2 nu_q >= nu_omega - 1).
bool time_derivative_rows_enabled(const ScalingExponents& exponents);

/// Solves every epsilon problem (in parallel with `jobs` threads) and the limit.
SweepRuns run_sweep_solutions(const FracturedMesh& mesh, const SweepConfig& config);

/// Theorem norms of full minus limit per epsilon, plus the structural rows
/// that apply to the regime. No verdicts.
std::vector<ErrorRow> compute_errors(const FracturedMesh& mesh, const SweepRuns& runs,
                                     const ScalingExponents& exponents);

/// run_sweep_solutions + compute_errors + convergence verdicts.
ErrorReport run_sweep(const SweepConfig& config);
ErrorReport make_report(const FracturedMesh& mesh, const SweepRuns& runs, const SweepConfig& config);

/// Monotone decrease by at least `min_drop` relative per step.
bool strictly_decreasing(const std::vector<double>& values, double min_drop = 0.0);

struct AprioriQuantity {
    std::string name;
    std::vector<double> values;  ///< per epsilon
    double ratio = 0.0;          ///< max over the sweep / value at the largest epsilon
    bool flagged = false;        ///< ratio > bound
};

struct AprioriReport {
    std::vector<AprioriQuantity> quantities;
    double bound = 3.0;
    bool flagged() const;
};

/// The five scaled quantities of the a priori estimates per full solution.
AprioriReport check_apriori(const FracturedMesh& mesh, const std::vector<double>& eps_list,
                            const std::vector<TransientSolution>& full, const ScalingExponents& exponents,
                            double bound = 3.0);

struct EquivalenceReport {
    std::string theorem;             ///< "discrete fracture mechanics" or "reduced barrier"
    double bulk_difference = 0.0;    ///< L2(I;H1) of the compared bulk field
    double reconstruction_difference = 0.0;  ///< max over time of the fracture L2 difference
};

/// Solves the two-scale and the reduced limit models on one mesh and compares
/// them. Throws ValidationError if no reduced form exists for the regime.
std::vector<EquivalenceReport> check_equivalence(const FracturedMesh& mesh, const MaterialFields& materials,
                                                 const ScalingExponents& exponents, double T, double dt);

/// ||eps^theta(nu_C) u_f||_{L2(gamma_+^1 and gamma_-^1)} at final time per epsilon.
std::vector<double> check_trace_decay(const FracturedMesh& mesh, const std::vector<double>& eps_list,
                                      const std::vector<TransientSolution>& full, const ScalingExponents& exponents);

/// ||p_+ - A_N p_f||_{L2(gamma)} at final time.
double continuity_defect(const FracturedMesh& mesh, const TransientSolution& sol);

/// ||grad p_f||_{L2(fracture)} (chart gradient) at final time.
double fracture_gradient_norm(const FracturedMesh& mesh, const TransientSolution& sol);

}  // namespace fracbiot
