/*
 * src/full_solver.cpp
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

#include "fracbiot/full_solver.hpp"

#include <cmath>
#include <fstream>

#include <Eigen/SparseLU>

#include "fracbiot/errors.hpp"
#include "fracbiot/io.hpp"

namespace fracbiot {

void BiotRunConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("discretization", "dt must be positive");
    if (!(T >= dt)) throw ValidationError("discretization", "T must be at least dt");
    const double ratio = T / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
        throw ValidationError("discretization", "T must be an integer multiple of dt");
    if (!(epsilon > 0.0) || epsilon > 1.0) throw ValidationError("epsilon", "epsilon must lie in (0, 1]");
}

int BiotRunConfig::steps() const { return static_cast<int>(std::lround(T / dt)); }

std::vector<double> TransientSolution::pressure_vertices(std::size_t k) const {
    return scalar_vertex_values(*pressure_space, p_coeffs.at(k));
}

std::vector<Vec2> TransientSolution::displacement_vertices(std::size_t k) const {
    return vector_vertex_values(*displacement_space, u_coeffs.at(k));
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void append(Triplets& out, const SparseMatrix& m, int row0, int col0, double scale, bool transpose) {
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            const int r = transpose ? static_cast<int>(it.col()) : static_cast<int>(it.row());
            const int c = transpose ? static_cast<int>(it.row()) : static_cast<int>(it.col());
            out.emplace_back(row0 + r, col0 + c, scale * it.value());
        }
    }
}

void check_residual(const SparseMatrix& m, const Eigen::VectorXd& x, const Eigen::VectorXd& b, double tol,
                    const char* what) {
    if (!x.allFinite()) throw SolverError(std::string(what) + ": non-finite solution");
    const double scale = std::max(b.norm(), 1e-300);
    const double res = (m * x - b).norm();
    if (b.norm() > 0.0 && res > std::max(tol, 1e-14) * 1e3 * scale)
        throw SolverError(std::string(what) + ": residual " + format_double(res / scale) + " above tolerance");
}

struct Factored {
    Eigen::SparseLU<SparseMatrix> lu;
    SparseMatrix m;

    explicit Factored(SparseMatrix matrix, const char* what) : m(std::move(matrix)) {
        m.makeCompressed();
        lu.analyzePattern(m);
        lu.factorize(m);
        if (lu.info() != Eigen::Success) throw SolverError(std::string(what) + ": factorization failed");
    }
    Eigen::VectorXd solve(const Eigen::VectorXd& b, double tol, const char* what) const {
        Eigen::VectorXd x = lu.solve(b);
        check_residual(m, x, b, tol, what);
        return x;
    }
};

void check_shapes(const BiotOperators& ops) {
    if (!ops.p_space || !ops.u_space) throw SolverError("operators without spaces");
    const int nu = ops.u_space->n_dofs, np = ops.p_space->n_dofs;
    if (ops.A.rows() != nu || ops.A.cols() != nu || ops.Bm.rows() != nu || ops.Bm.cols() != np ||
        ops.Bf.rows() != nu || ops.Bf.cols() != np || ops.C.rows() != np || ops.D.rows() != np ||
        ops.p0.size() != np)
        throw SolverError("operator dimensions do not match the spaces");
}

TransientSolution empty_solution(const BiotOperators& ops, std::optional<double> epsilon) {
    TransientSolution sol;
    sol.pressure_space = ops.p_space;
    sol.displacement_space = ops.u_space;
    sol.epsilon = epsilon;
    return sol;
}

int step_count(double T, double dt) {
    BiotRunConfig c;
    c.T = T;
    c.dt = dt;
    c.validate();
    return c.steps();
}

}  // namespace

BiotOperators build_full_operators(const FracturedMesh& mesh, const BiotRunConfig& config) {
    config.validate();
    validate_exponents(config.exponents, mesh.geometry);
    BiotOperators ops;
    auto us = std::make_shared<SpaceDescriptor>(build_space(mesh, SpaceKind::V_full));
    auto ps = std::make_shared<SpaceDescriptor>(build_space(mesh, SpaceKind::Phi_full));
    ops.u_space = us;
    ops.p_space = ps;
    ops.tolerance = config.tolerance;

    auto form = [&](FormName name, double t = 0.0) {
        FormSpec spec;
        spec.name = name;
        spec.epsilon = config.epsilon;
        spec.exponents = config.exponents;
        spec.time = t;
        return spec;
    };
    const MaterialFields& mat = config.materials;
    ops.A = apply_constraints(assemble(form(FormName::A_hat), *us, *us, mesh, mat), *us).matrix;
    const SparseMatrix B = zero_constrained(assemble(form(FormName::B_hat), *ps, *us, mesh, mat).matrix, *us, *ps);
    ops.Bm = B;
    ops.Bf = B;
    ops.C = zero_constrained(assemble(form(FormName::C_hat), *ps, *ps, mesh, mat).matrix, *ps, *ps);
    ops.D = zero_constrained(assemble(form(FormName::D_hat), *ps, *ps, mesh, mat).matrix, *ps, *ps);

    const FracturedMesh* mesh_ptr = &mesh;
    auto exponents = config.exponents;
    const double eps = config.epsilon;
    auto linear = [mesh_ptr, mat, exponents, eps](FormName name, std::shared_ptr<SpaceDescriptor> space) {
        return [mesh_ptr, mat, exponents, eps, name, space](double t) {
            FormSpec spec;
            spec.name = name;
            spec.epsilon = eps;
            spec.exponents = exponents;
            spec.time = t;
            Eigen::VectorXd rhs = assemble(spec, *space, *space, *mesh_ptr, mat).rhs;
            zero_constrained(rhs, *space);
            return rhs;
        };
    };
    ops.load_u = linear(FormName::L_hat, us);
    ops.load_p = linear(FormName::Q_hat, ps);
    ops.p0 = interpolate_scalar(mesh, *ps, [&mat](Subdomain sub, const Vec2& x) { return mat[sub].p0(x); });
    return ops;
}

struct MonolithicStepper::Impl {
    const BiotOperators* ops = nullptr;
    double dt = 0.0;
    std::unique_ptr<Factored> block;
};

MonolithicStepper::MonolithicStepper(const BiotOperators& ops, double dt) : impl_(std::make_shared<Impl>()) {
    check_shapes(ops);
    if (!(dt > 0.0)) throw ValidationError("discretization", "dt must be positive");
    impl_->ops = &ops;
    impl_->dt = dt;
    const int nu = ops.u_space->n_dofs, np = ops.p_space->n_dofs;
    Triplets t;
    t.reserve(ops.A.nonZeros() + 2 * ops.Bm.nonZeros() + ops.C.nonZeros() + ops.D.nonZeros() + np);
    append(t, ops.A, 0, 0, 1.0, false);
    append(t, ops.Bm, 0, nu, -1.0, false);
    append(t, ops.Bf, nu, 0, -1.0, true);
    append(t, ops.C, nu, nu, -1.0, false);
    append(t, ops.D, nu, nu, -dt, false);
    for (int i = 0; i < np; ++i)
        if (ops.p_space->dirichlet[i]) t.emplace_back(nu + i, nu + i, -1.0);
    SparseMatrix m(nu + np, nu + np);
    m.setFromTriplets(t.begin(), t.end());
    impl_->block = std::make_unique<Factored>(std::move(m), "monolithic step");
}

BiotState MonolithicStepper::step(const BiotState& state) const {
    const BiotOperators& ops = *impl_->ops;
    const double dt = impl_->dt;
    const int nu = ops.u_space->n_dofs, np = ops.p_space->n_dofs;
    const double t1 = state.t + dt;
    Eigen::VectorXd rhs(nu + np);
    rhs.head(nu) = ops.load_u(t1);
    rhs.tail(np) = -(ops.C * state.p + ops.Bf.transpose() * state.u + dt * ops.load_p(t1));
    const Eigen::VectorXd x = impl_->block->solve(rhs, ops.tolerance, "monolithic step");
    BiotState next;
    next.t = t1;
    next.u = x.head(nu);
    next.p = x.tail(np);
    return next;
}

Eigen::VectorXd initial_displacement(const BiotOperators& ops) {
    check_shapes(ops);
    Factored a(ops.A, "initial displacement");
    return a.solve(ops.load_u(0.0) + ops.Bm * ops.p0, ops.tolerance, "initial displacement");
}

TransientSolution solve_operators(const BiotOperators& ops, double T, double dt, std::optional<double> epsilon) {
    const int steps = step_count(T, dt);
    TransientSolution sol = empty_solution(ops, epsilon);
    BiotState state;
    state.p = ops.p0;
    state.u = initial_displacement(ops);
    sol.times.push_back(0.0);
    sol.p_coeffs.push_back(state.p);
    sol.u_coeffs.push_back(state.u);
    MonolithicStepper stepper(ops, dt);
    for (int k = 1; k <= steps; ++k) {
        state = stepper.step(state);
        state.t = k * dt;
        sol.times.push_back(state.t);
        sol.p_coeffs.push_back(state.p);
        sol.u_coeffs.push_back(state.u);
    }
    return sol;
}

namespace {

struct SchurParts {
    std::unique_ptr<Factored> A;
    Eigen::MatrixXd X;   // A^{-1} Bm
    Eigen::MatrixXd DN;  // C + Bf^T X with identity on constrained dofs
};

SchurParts schur_parts(const BiotOperators& ops) {
    check_shapes(ops);
    SchurParts parts;
    parts.A = std::make_unique<Factored>(ops.A, "Schur oracle");
    const Eigen::MatrixXd Bm = Eigen::MatrixXd(ops.Bm);
    parts.X.resize(Bm.rows(), Bm.cols());
    for (int j = 0; j < Bm.cols(); ++j) parts.X.col(j) = parts.A->lu.solve(Bm.col(j));
    if (!parts.X.allFinite()) throw SolverError("Schur oracle: non-finite A^{-1} Bm");
    parts.DN = Eigen::MatrixXd(ops.C) + Eigen::MatrixXd(ops.Bf.transpose()) * parts.X;
    for (int i = 0; i < ops.p_space->n_dofs; ++i)
        if (ops.p_space->dirichlet[i]) parts.DN(i, i) = 1.0;
    return parts;
}

}  // namespace

TransientSolution solve_operators_schur(const BiotOperators& ops, double T, double dt, std::optional<double> epsilon,
                                        int dof_cap) {
    const int steps = step_count(T, dt);
    check_shapes(ops);
    const int total = ops.u_space->n_dofs + ops.p_space->n_dofs;
    if (total > dof_cap)
        throw ValidationError("oracle", "Schur oracle limited to " + std::to_string(dof_cap) + " dofs, got " +
                                            std::to_string(total));
    SchurParts parts = schur_parts(ops);
    const Eigen::MatrixXd M = parts.DN + dt * Eigen::MatrixXd(ops.D);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);

    TransientSolution sol = empty_solution(ops, epsilon);
    Eigen::VectorXd p = ops.p0;
    Eigen::VectorXd L = ops.load_u(0.0);
    Eigen::VectorXd u = parts.A->solve(L + ops.Bm * p, ops.tolerance, "Schur oracle");
    sol.times.push_back(0.0);
    sol.p_coeffs.push_back(p);
    sol.u_coeffs.push_back(u);
    for (int k = 1; k <= steps; ++k) {
        const double t = k * dt;
        const Eigen::VectorXd L1 = ops.load_u(t);
        const Eigen::VectorXd dL = parts.A->lu.solve(L1 - L);
        const Eigen::VectorXd rhs = parts.DN * p + dt * ops.load_p(t) - ops.Bf.transpose() * dL;
        p = lu.solve(rhs);
        if (!p.allFinite()) throw SolverError("Schur oracle: non-finite pressure");
        u = parts.A->solve(L1 + ops.Bm * p, ops.tolerance, "Schur oracle");
        L = L1;
        sol.times.push_back(t);
        sol.p_coeffs.push_back(p);
        sol.u_coeffs.push_back(u);
    }
    return sol;
}

Eigen::MatrixXd reduced_pressure_matrix(const BiotOperators& ops) {
    SchurParts parts = schur_parts(ops);
    std::vector<int> free;
    for (int i = 0; i < ops.p_space->n_dofs; ++i)
        if (!ops.p_space->dirichlet[i]) free.push_back(i);
    Eigen::MatrixXd out(free.size(), free.size());
    for (std::size_t a = 0; a < free.size(); ++a)
        for (std::size_t b = 0; b < free.size(); ++b) out(a, b) = parts.DN(free[a], free[b]);
    return out;
}

Eigen::VectorXd solve_initial_displacement(const FracturedMesh& mesh, const BiotRunConfig& config) {
    return initial_displacement(build_full_operators(mesh, config));
}

BiotState step_monolithic(const FracturedMesh& mesh, const BiotRunConfig& config, const BiotState& state) {
    const BiotOperators ops = build_full_operators(mesh, config);
    if (state.p.size() != ops.p_space->n_dofs || state.u.size() != ops.u_space->n_dofs)
        throw ValidationError("state", "state dimensions do not match the spaces");
    MonolithicStepper stepper(ops, config.dt);
    return stepper.step(state);
}

TransientSolution solve_transient(const FracturedMesh& mesh, const BiotRunConfig& config) {
    const BiotOperators ops = build_full_operators(mesh, config);
    return solve_operators(ops, config.T, config.dt, config.epsilon);
}

TransientSolution solve_transient_schur(const FracturedMesh& mesh, const BiotRunConfig& config, int dof_cap) {
    const BiotOperators ops = build_full_operators(mesh, config);
    return solve_operators_schur(ops, config.T, config.dt, config.epsilon, dof_cap);
}

double discrete_energy(const BiotOperators& ops, const Eigen::VectorXd& u, const Eigen::VectorXd& p) {
    return 0.5 * u.dot(ops.A * u) + 0.5 * p.dot(ops.C * p);
}

void dump_solution(const FracturedMesh& mesh, const TransientSolution& sol, const std::string& directory,
                   const std::string& config_hash) {
    namespace fs = std::filesystem;
    const fs::path dir(directory);
    ensure_directory(dir);
    std::ofstream manifest(dir / "manifest.csv");
    if (!manifest) throw ValidationError("output", "cannot write " + (dir / "manifest.csv").string());
    manifest << csv_row({"step", "time", "file", "config_hash"});
    for (std::size_t k = 0; k < sol.times.size(); ++k) {
        const std::string name = "step_" + std::to_string(k) + ".csv";
        std::ofstream os(dir / name);
        if (!os) throw ValidationError("output", "cannot write " + (dir / name).string());
        os << csv_row({"vertex", "subdomain", "x", "y", "p", "u_x", "u_y"});
        const auto p = sol.pressure_vertices(k);
        const auto u = sol.displacement_vertices(k);
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            os << csv_row({std::to_string(v), to_string(mesh.vertex_subdomain[v]), format_double(mesh.vertices[v].x()),
                           format_double(mesh.vertices[v].y()), format_double(p[v]), format_double(u[v].x()),
                           format_double(u[v].y())});
        }
        manifest << csv_row({std::to_string(k), format_double(sol.times[k]), name, config_hash});
    }
}

}  // namespace fracbiot
