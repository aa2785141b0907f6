/*
 * src/limit_solver.cpp
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

#include "fracbiot/limit_solver.hpp"

#include <Eigen/SparseLU>

#include "fracbiot/errors.hpp"
#include "fracbiot/quadrature.hpp"

namespace fracbiot {

std::string to_string(MechForm f) {
    switch (f) {
        case MechForm::TwoScale: return "TwoScale";
        case MechForm::ReducedDF: return "ReducedDF";
        case MechForm::Decoupled: return "Decoupled";
    }
    return "unknown";
}

std::string to_string(FlowForm f) {
    switch (f) {
        case FlowForm::ConstantPressure: return "ConstantPressure";
        case FlowForm::InterfacePDE: return "InterfacePDE";
        case FlowForm::Neutral: return "Neutral";
        case FlowForm::NormalODE: return "NormalODE";
        case FlowForm::ReducedBarrier: return "ReducedBarrier";
        case FlowForm::Wall: return "Wall";
    }
    return "unknown";
}

namespace {

SpaceKind pressure_kind(FlowForm f) {
    switch (f) {
        case FlowForm::ConstantPressure: return SpaceKind::Phi_lt_m1;
        case FlowForm::InterfacePDE: return SpaceKind::Phi_m1;
        case FlowForm::Neutral: return SpaceKind::Phi_open;
        case FlowForm::NormalODE: return SpaceKind::Phi_sharp;
        case FlowForm::ReducedBarrier: return SpaceKind::Phi_1;
        case FlowForm::Wall: return SpaceKind::Phi_gt1;
    }
    return SpaceKind::Phi_open;
}

SpaceKind displacement_kind(MechForm f) {
    switch (f) {
        case MechForm::TwoScale: return SpaceKind::V_sharp;
        case MechForm::ReducedDF: return SpaceKind::V_1;
        case MechForm::Decoupled: return SpaceKind::V_gt1;
    }
    return SpaceKind::V_sharp;
}

FlowForm two_scale_flow(FlowRegime r) {
    switch (r) {
        case FlowRegime::IdealConduit: return FlowForm::ConstantPressure;
        case FlowRegime::Conduit: return FlowForm::InterfacePDE;
        case FlowRegime::Neutral: return FlowForm::Neutral;
        case FlowRegime::Barrier: return FlowForm::NormalODE;
        case FlowRegime::Wall: return FlowForm::Wall;
    }
    return FlowForm::Neutral;
}

bool alpha_vanishes(const EffectiveParams& ep) {
    for (const Vec2& a : ep.alpha_gamma)
        if (a.lpNorm<Eigen::Infinity>() > 1e-12) return false;
    return ep.alpha_constant_per_column;
}

}  // namespace

LimitProblem build_limit_problem(const RegimeDescriptor& regime, std::shared_ptr<const EffectiveParams> effective,
                                 const FracturedMesh& mesh, const LimitOptions& options) {
    if (!effective) throw ValidationError("limit", "effective parameters missing");
    const EffectiveParams& ep = *effective;
    if (static_cast<int>(ep.y.size()) != mesh.gamma_count())
        throw ValidationError("limit", "effective parameters were computed on a different mesh");

    LimitProblem pb;
    pb.regime = regime;
    pb.effective = effective;
    pb.mesh = &mesh;
    const bool soft = regime.mech == MechRegime::Soft;
    const bool pf_present = regime.flow != FlowRegime::Wall || regime.storage_present;
    pb.stress_has_pressure = regime.biot_coupled && pf_present;
    pb.fracture_ode = regime.flow == FlowRegime::Wall && regime.storage_present;

    pb.flow_form = two_scale_flow(regime.flow);
    pb.mech_form = soft ? MechForm::TwoScale : MechForm::Decoupled;

    if (options.prefer_reduced) {
        if (soft && options.reduce_mechanics) {
            if (!ep.alpha_constant_per_column)
                throw ValidationError("reduction", "reduced mechanics needs alpha_f^eff constant in the normal direction");
            if (pb.stress_has_pressure && !alpha_vanishes(ep) && regime.flow != FlowRegime::IdealConduit &&
                regime.flow != FlowRegime::Conduit && regime.flow != FlowRegime::Neutral)
                throw ValidationError("reduction",
                                      "reduced mechanics with a pressure-dependent interface stress needs nu_K < 1");
            pb.mech_form = MechForm::ReducedDF;
        }
        if (regime.flow == FlowRegime::Barrier && options.reduce_flow) {
            if (regime.storage_present)
                throw ValidationError("reduction", "barrier reduction needs omega_f^eff = 0 (no fracture storage)");
            if (!ep.K_N_constant_per_column)
                throw ValidationError("reduction", "barrier reduction needs K_f^N constant in the normal direction");
            if (!alpha_vanishes(ep))
                throw ValidationError("reduction", "barrier reduction needs alpha_f^eff = 0");
            pb.flow_form = FlowForm::ReducedBarrier;
        }
    }

    SpaceOptions opts;
    opts.fracture_nodes = pb.fracture_ode;
    pb.pressure_space = std::make_shared<SpaceDescriptor>(build_space(mesh, pressure_kind(pb.flow_form), opts));
    pb.displacement_space = std::make_shared<SpaceDescriptor>(build_space(mesh, displacement_kind(pb.mech_form)));
    return pb;
}

LimitProblem build_limit_problem(const FracturedMesh& mesh, const MaterialFields& materials,
                                 const ScalingExponents& exponents, const LimitOptions& options) {
    const RegimeDescriptor regime = validate_exponents(exponents, mesh.geometry);
    auto ep = std::make_shared<EffectiveParams>(compute_effective(materials, exponents, regime, mesh));
    return build_limit_problem(regime, ep, mesh, options);
}

BiotOperators build_limit_operators(const LimitProblem& pb, const MaterialFields& materials, double tolerance) {
    if (!pb.mesh || !pb.effective || !pb.pressure_space || !pb.displacement_space)
        throw ValidationError("limit", "limit problem is not built");
    const FracturedMesh& mesh = *pb.mesh;
    const EffectiveParams& ep = *pb.effective;
    const SpaceDescriptor& us = *pb.displacement_space;
    const SpaceDescriptor& ps = *pb.pressure_space;

    auto bilinear = [&](FormName name, const SpaceDescriptor& trial, const SpaceDescriptor& test) {
        FormSpec spec;
        spec.name = name;
        return assemble(spec, trial, test, mesh, materials, &ep).matrix;
    };

    BiotOperators ops;
    ops.u_space = pb.displacement_space;
    ops.p_space = pb.pressure_space;
    ops.tolerance = tolerance;

    const bool reduced_mech = pb.mech_form == MechForm::ReducedDF;
    SparseMatrix A = bilinear(FormName::A_b0, us, us);
    A += reduced_mech ? bilinear(FormName::interface_mass_jump, us, us)
                      : bilinear(FormName::fracture_normal_stiffness, us, us);
    SparseSystem asys;
    asys.matrix = A;
    asys.rhs = Eigen::VectorXd::Zero(us.n_dofs);
    ops.A = apply_constraints(std::move(asys), us).matrix;

    SparseMatrix Bm = bilinear(FormName::B_b0, ps, us);
    SparseMatrix Bf = Bm;
    if (pb.stress_has_pressure) {
        if (reduced_mech) {
            Bm += bilinear(FormName::gamma_coupling_stress, ps, us);
            Bf += bilinear(FormName::gamma_coupling_flow, ps, us);
        } else {
            const SparseMatrix K = bilinear(FormName::coupling_alpha_eff, ps, us);
            Bm += K;
            Bf += K;
        }
    }
    ops.Bm = zero_constrained(Bm, us, ps);
    ops.Bf = zero_constrained(Bf, us, ps);

    SparseMatrix C = bilinear(FormName::C_b0, ps, ps);
    if (pb.flow_form != FlowForm::ReducedBarrier) C += bilinear(FormName::fracture_mass, ps, ps);
    ops.C = zero_constrained(C, ps, ps);

    SparseMatrix D = bilinear(FormName::D_b0, ps, ps);
    switch (pb.flow_form) {
        case FlowForm::InterfacePDE: D += bilinear(FormName::gamma_stiffness, ps, ps); break;
        case FlowForm::NormalODE: D += bilinear(FormName::fracture_normal_conductivity, ps, ps); break;
        case FlowForm::ReducedBarrier: D += bilinear(FormName::interface_mass_jump, ps, ps); break;
        default: break;
    }
    ops.D = zero_constrained(D, ps, ps);

    auto us_ptr = pb.displacement_space;
    auto ps_ptr = pb.pressure_space;
    auto ep_ptr = pb.effective;
    const FracturedMesh* mesh_ptr = pb.mesh;
    const bool gravity = pb.stress_has_pressure;
    const bool reduced_flow = pb.flow_form == FlowForm::ReducedBarrier;
    ops.load_u = [=](double t) {
        FormSpec spec;
        spec.name = FormName::L_b0;
        spec.time = t;
        Eigen::VectorXd rhs = assemble(spec, *us_ptr, *us_ptr, *mesh_ptr, materials, ep_ptr.get()).rhs;
        spec.name = reduced_mech ? FormName::gamma_load : FormName::fracture_load;
        spec.fracture_gravity = gravity;
        rhs += assemble(spec, *us_ptr, *us_ptr, *mesh_ptr, materials, ep_ptr.get()).rhs;
        zero_constrained(rhs, *us_ptr);
        return rhs;
    };
    ops.load_p = [=](double t) {
        FormSpec spec;
        spec.name = FormName::Q_b0;
        spec.time = t;
        Eigen::VectorXd rhs = assemble(spec, *ps_ptr, *ps_ptr, *mesh_ptr, materials, ep_ptr.get()).rhs;
        spec.name = reduced_flow ? FormName::gamma_flow_load : FormName::fracture_flow_load;
        rhs += assemble(spec, *ps_ptr, *ps_ptr, *mesh_ptr, materials, ep_ptr.get()).rhs;
        zero_constrained(rhs, *ps_ptr);
        return rhs;
    };

    ops.p0 = interpolate_scalar(mesh, ps, [&](Subdomain sub, const Vec2& x) { return materials[sub].p0(x); });
    const auto& p0f = materials[Subdomain::Fracture].p0;
    const Field<double> p0_field = [&p0f](const Vec2& x, int) { return p0f(x); };
    if (pb.flow_form == FlowForm::ConstantPressure) {
        const double mean = average_fracture(mesh, p0_field);
        for (int j = 0; j < mesh.gamma_count(); ++j) {
            const int n = ps.gamma_node[j];
            if (n >= 0 && !ps.dirichlet[n]) ops.p0[n] = mean;
        }
    } else if (pb.flow_form == FlowForm::InterfacePDE || pb.flow_form == FlowForm::Neutral) {
        const std::vector<double> avg = average_normal(mesh, p0_field);
        for (int j = 0; j < mesh.gamma_count(); ++j) {
            const int n = ps.gamma_node[j];
            if (n >= 0 && !ps.dirichlet[n]) ops.p0[n] = avg[j];
        }
    }
    return ops;
}

TransientSolution solve_limit(const LimitProblem& problem, const MaterialFields& materials, double T, double dt) {
    const BiotOperators ops = build_limit_operators(problem, materials);
    return solve_operators(ops, T, dt, std::nullopt);
}

namespace {

/// Tridiagonal P1 system on one column: stiffness weights per segment,
/// load per node, fixed end values. Returns the nodal values.
Eigen::VectorXd column_solve(const std::vector<double>& len, const std::vector<double>& stiffness,
                             const Eigen::VectorXd& load, double left, double right) {
    const int n = static_cast<int>(len.size()) + 1;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    x[0] = left;
    x[n - 1] = right;
    const int inner = n - 2;
    if (inner <= 0) return x;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(inner, inner);
    Eigen::VectorXd b = load.segment(1, inner);
    for (int k = 0; k + 1 < n; ++k) {
        const double w = stiffness[k] / len[k];
        const int i = k - 1, j = k;  // interior indices of nodes k and k + 1
        if (i >= 0) M(i, i) += w;
        if (j < inner) M(j, j) += w;
        if (i >= 0 && j < inner) {
            M(i, j) -= w;
            M(j, i) -= w;
        }
        if (i < 0) b[j] += w * left;
        if (j >= inner) b[i] += w * right;
    }
    x.segment(1, inner) = M.ldlt().solve(b);
    return x;
}

void require_kind(const LimitProblem& pb, const TransientSolution& sol) {
    if (!pb.mesh || !sol.pressure_space || !sol.displacement_space)
        throw ValidationError("reconstruction", "missing column data");
    if (sol.pressure_space->kind != pb.pressure_space->kind ||
        sol.displacement_space->kind != pb.displacement_space->kind)
        throw ValidationError("reconstruction", "solution does not belong to the limit problem");
}

}  // namespace

std::vector<std::vector<Vec2>> reconstruct_fracture_displacement(const LimitProblem& pb,
                                                                 const TransientSolution& sol,
                                                                 const MaterialFields& materials) {
    require_kind(pb, sol);
    if (pb.mech_form != MechForm::ReducedDF)
        throw ValidationError("reconstruction", "displacement reconstruction needs the reduced mechanics form");
    const FracturedMesh& mesh = *pb.mesh;
    const EffectiveParams& ep = *pb.effective;
    const Vec2 g = materials.gravity;
    std::vector<std::vector<Vec2>> out;
    for (std::size_t k = 0; k < sol.times.size(); ++k) {
        const double t = sol.times[k];
        std::vector<Vec2> u = sol.displacement_vertices(k);
        const std::vector<double> p = sol.pressure_vertices(k);
        for (int j = 0; j < mesh.gamma_count(); ++j) {
            const auto& col = mesh.columns[j];
            const auto& len = mesh.column_lengths[j];
            const int nseg = static_cast<int>(len.size());
            const double y = mesh.gamma_y[j];
            // Rows j = 0 and n lie on the clamped fracture boundary.
            if (j == 0 || j == mesh.gamma_count() - 1) {
                for (int v : col) u[v] = Vec2::Zero();
                continue;
            }
            const double pg = pb.stress_has_pressure ? p[mesh.gamma_plus[j]] : 0.0;
            const Vec2 left = u[mesh.gamma_minus[j]];
            const Vec2 right = u[mesh.gamma_plus[j]];
            std::array<Eigen::VectorXd, 2> loads{Eigen::VectorXd::Zero(nseg + 1), Eigen::VectorXd::Zero(nseg + 1)};
            std::vector<Mat2> CN(nseg);
            for (int s = 0; s < nseg; ++s) {
                const double s0 = mesh.vertices[col[s]].x();
                const int e = mesh.column_segment_triangle[j][s];
                const Vec2 mid(s0 + 0.5 * len[s], y);
                CN[s] = ep.C_f_N(mid, e);
                const Vec2 al = ep.alpha_f_eff(mid, e);
                const double G = pb.stress_has_pressure ? y * g.y() : 0.0;
                // <(p_gamma + G_f) alpha, d_N v>: +-1/len derivative times len.
                for (int d = 0; d < 2; ++d) {
                    loads[d][s] -= (pg + G) * al[d];
                    loads[d][s + 1] += (pg + G) * al[d];
                }
                for (int q = 0; q < 2; ++q) {
                    const double xi = quad::kGauss2Points[q];
                    const Vec2 f = ep.f_f_eff(Vec2(s0 + xi * len[s], y), t);
                    const double w = quad::kGauss2Weights[q] * len[s];
                    for (int d = 0; d < 2; ++d) {
                        loads[d][s] += w * (1.0 - xi) * f[d];
                        loads[d][s + 1] += w * xi * f[d];
                    }
                }
            }
            const bool diagonal = [&] {
                for (const Mat2& m : CN)
                    if (std::abs(m(0, 1)) > 1e-14 || std::abs(m(1, 0)) > 1e-14) return false;
                return true;
            }();
            if (diagonal) {
                for (int d = 0; d < 2; ++d) {
                    std::vector<double> stiff(nseg);
                    for (int s = 0; s < nseg; ++s) stiff[s] = CN[s](d, d);
                    const Eigen::VectorXd x = column_solve(len, stiff, loads[d], left[d], right[d]);
                    for (int s = 0; s <= nseg; ++s) u[col[s]][d] = x[s];
                }
            } else {
                const int n = nseg + 1;
                Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * n, 2 * n);
                Eigen::VectorXd b(2 * n);
                for (int s = 0; s < n; ++s)
                    for (int d = 0; d < 2; ++d) b[2 * s + d] = loads[d][s];
                for (int s = 0; s < nseg; ++s) {
                    const Mat2 w = CN[s] / len[s];
                    for (int a = 0; a < 2; ++a)
                        for (int c = 0; c < 2; ++c) {
                            const double sa = a == 0 ? 1.0 : -1.0, sc = c == 0 ? 1.0 : -1.0;
                            M.block<2, 2>(2 * (s + a), 2 * (s + c)) += sa * sc * w;
                        }
                }
                for (int d = 0; d < 2; ++d) {
                    for (int end : {0, n - 1}) {
                        const int r = 2 * end + d;
                        M.row(r).setZero();
                        M(r, r) = 1.0;
                        b[r] = end == 0 ? left[d] : right[d];
                    }
                }
                const Eigen::VectorXd x = M.partialPivLu().solve(b);
                for (int s = 0; s < n; ++s) u[col[s]] = Vec2(x[2 * s], x[2 * s + 1]);
            }
        }
        out.push_back(std::move(u));
    }
    return out;
}

std::vector<std::vector<double>> reconstruct_fracture_pressure(const LimitProblem& pb,
                                                               const TransientSolution& sol) {
    require_kind(pb, sol);
    if (pb.flow_form != FlowForm::ReducedBarrier)
        throw ValidationError("reconstruction", "pressure reconstruction needs the reduced barrier form");
    const EffectiveParams& ep = *pb.effective;
    if (!ep.K_N_constant_per_column || pb.regime.storage_present)
        throw ValidationError("reconstruction", "barrier constancy conditions violated");
    const FracturedMesh& mesh = *pb.mesh;
    std::vector<std::vector<double>> out;
    for (std::size_t k = 0; k < sol.times.size(); ++k) {
        const double t = sol.times[k];
        std::vector<double> p = sol.pressure_vertices(k);
        for (int j = 0; j < mesh.gamma_count(); ++j) {
            const auto& col = mesh.columns[j];
            const auto& len = mesh.column_lengths[j];
            const int nseg = static_cast<int>(len.size());
            const double y = mesh.gamma_y[j];
            std::vector<double> stiff(nseg);
            Eigen::VectorXd load = Eigen::VectorXd::Zero(nseg + 1);
            for (int s = 0; s < nseg; ++s) {
                const double s0 = mesh.vertices[col[s]].x();
                const int e = mesh.column_segment_triangle[j][s];
                stiff[s] = ep.K_f_N(Vec2(s0 + 0.5 * len[s], y), e);
                for (int q = 0; q < 2; ++q) {
                    const double xi = quad::kGauss2Points[q];
                    const double w = quad::kGauss2Weights[q] * len[s];
                    const double qv = ep.q_f_eff(Vec2(s0 + xi * len[s], y), t);
                    load[s] += w * (1.0 - xi) * qv;
                    load[s + 1] += w * xi * qv;
                }
            }
            const Eigen::VectorXd x =
                column_solve(len, stiff, load, p[mesh.gamma_minus[j]], p[mesh.gamma_plus[j]]);
            for (int s = 0; s <= nseg; ++s) p[col[s]] = x[s];
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace fracbiot
