/*
 * src/assembly.cpp
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

#include "fracbiot/assembly.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "fracbiot/errors.hpp"
#include "fracbiot/quadrature.hpp"

namespace fracbiot {

std::string to_string(FormName name) {
    switch (name) {
        case FormName::A_hat: return "A_hat";
        case FormName::B_hat: return "B_hat";
        case FormName::C_hat: return "C_hat";
        case FormName::D_hat: return "D_hat";
        case FormName::L_hat: return "L_hat";
        case FormName::Q_hat: return "Q_hat";
        case FormName::A_b0: return "A_b0";
        case FormName::B_b0: return "B_b0";
        case FormName::C_b0: return "C_b0";
        case FormName::D_b0: return "D_b0";
        case FormName::L_b0: return "L_b0";
        case FormName::Q_b0: return "Q_b0";
        case FormName::fracture_normal_stiffness: return "fracture_normal_stiffness";
        case FormName::fracture_normal_conductivity: return "fracture_normal_conductivity";
        case FormName::interface_mass_jump: return "interface_mass_jump";
        case FormName::gamma_stiffness: return "gamma_stiffness";
        case FormName::gamma_mass: return "gamma_mass";
        case FormName::coupling_alpha_eff: return "coupling_alpha_eff";
        case FormName::fracture_mass: return "fracture_mass";
        case FormName::gamma_coupling_stress: return "gamma_coupling_stress";
        case FormName::gamma_coupling_flow: return "gamma_coupling_flow";
        case FormName::fracture_load: return "fracture_load";
        case FormName::fracture_flow_load: return "fracture_flow_load";
        case FormName::gamma_load: return "gamma_load";
        case FormName::gamma_flow_load: return "gamma_flow_load";
    }
    return "unknown";
}

bool is_linear_form(FormName n) {
    switch (n) {
        case FormName::L_hat:
        case FormName::Q_hat:
        case FormName::L_b0:
        case FormName::Q_b0:
        case FormName::fracture_load:
        case FormName::fracture_flow_load:
        case FormName::gamma_load:
        case FormName::gamma_flow_load: return true;
        default: return false;
    }
}

bool needs_epsilon(FormName n) {
    return n == FormName::A_hat || n == FormName::B_hat || n == FormName::C_hat || n == FormName::D_hat ||
           n == FormName::L_hat || n == FormName::Q_hat;
}

bool needs_effective(FormName n) {
    switch (n) {
        case FormName::fracture_normal_conductivity:
        case FormName::interface_mass_jump:
        case FormName::gamma_stiffness:
        case FormName::coupling_alpha_eff:
        case FormName::fracture_mass:
        case FormName::gamma_coupling_stress:
        case FormName::gamma_coupling_flow:
        case FormName::fracture_load:
        case FormName::fracture_flow_load:
        case FormName::gamma_load:
        case FormName::gamma_flow_load: return true;
        default: return false;
    }
}

double gravity_potential(const Geometry& geometry, const Vec2& g, Subdomain sub, const Vec2& x,
                         std::optional<double> epsilon) {
    if (!epsilon) {
        if (sub == Subdomain::Fracture) return x.y() * g.y();
        return x.dot(g);
    }
    const double e = *epsilon;
    switch (sub) {
        case Subdomain::Plus: return (x + Vec2(e * geometry.aperture_plus(x.y()), 0.0)).dot(g);
        case Subdomain::Minus: return (x - Vec2(e * geometry.aperture_minus(x.y()), 0.0)).dot(g);
        case Subdomain::Fracture: return Vec2(e * x.x(), x.y()).dot(g);
    }
    return 0.0;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct Element {
    int id;
    Subdomain label;
    double area;
    std::array<int, 3> v;
    Eigen::Matrix<double, 3, 2> grad;  ///< barycentric gradients, one per row
    std::array<Vec2, 3> qx;            ///< quadrature points
    double qw;                         ///< quadrature weight (area / 3)
};

Element make_element(const FracturedMesh& mesh, int t) {
    Element e;
    e.id = t;
    e.label = mesh.triangle_label[t];
    e.v = mesh.triangles[t];
    const Vec2& x0 = mesh.vertices[e.v[0]];
    const Vec2& x1 = mesh.vertices[e.v[1]];
    const Vec2& x2 = mesh.vertices[e.v[2]];
    Mat2 J;
    J.col(0) = x1 - x0;
    J.col(1) = x2 - x0;
    e.area = 0.5 * std::abs(J.determinant());
    const Mat2 JinvT = J.inverse().transpose();
    e.grad.row(1) = JinvT.col(0).transpose();
    e.grad.row(2) = JinvT.col(1).transpose();
    e.grad.row(0) = -e.grad.row(1) - e.grad.row(2);
    for (int q = 0; q < 3; ++q) {
        const auto& b = quad::kTrianglePoints[q];
        e.qx[q] = b[0] * x0 + b[1] * x1 + b[2] * x2;
    }
    e.qw = e.area / 3.0;
    return e;
}

double bary(int q, int i) { return quad::kTrianglePoints[q][i]; }

/// Voigt strain rows for basis (node i, component c) with gradient g.
Eigen::Vector3d strain_of(const Vec2& g, int c) {
    return c == 0 ? Eigen::Vector3d(g.x(), 0.0, g.y()) : Eigen::Vector3d(0.0, g.y(), g.x());
}

double pow_eps(double eps, const Rational& r) { return std::pow(eps, r.to_double()); }

struct Context {
    const FormSpec& form;
    const SpaceDescriptor& trial;
    const SpaceDescriptor& test;
    const FracturedMesh& mesh;
    const MaterialFields& mat;
    const EffectiveParams* ep;
    double eps = 1.0;
    ScalingExponents exp;
};

/// Gradient transform on a fracture element for the epsilon problem.
Mat2 scaled_transform(double eps) { return Vec2(1.0 / eps, 1.0).asDiagonal(); }

/// eps^{nu_alpha + 1} as a matrix acting on the left of alpha.
Mat2 alpha_scaling(double eps, const ScalingExponents& exp) {
    return eps * Vec2(pow_eps(eps, exp.nu_alpha_perp), pow_eps(eps, exp.nu_alpha_par)).asDiagonal();
}

void stiffness_element(const Context& c, const Element& e, const Mat2& T, double pref, Triplets& out) {
    std::array<Eigen::Vector3d, 6> B;
    for (int i = 0; i < 3; ++i) {
        const Vec2 g = T * e.grad.row(i).transpose();
        for (int comp = 0; comp < 2; ++comp) B[2 * i + comp] = strain_of(g, comp);
    }
    Tensor4 D = Tensor4::Zero();
    for (int q = 0; q < 3; ++q) D += e.qw * c.mat[e.label].C(e.qx[q], e.id);
    D *= pref;
    for (int a = 0; a < 6; ++a) {
        const int row = c.test.dof(e.v[a / 2], a % 2);
        if (row < 0) continue;
        for (int b = 0; b < 6; ++b) {
            const int col = c.trial.dof(e.v[b / 2], b % 2);
            if (col < 0) continue;
            out.emplace_back(row, col, B[a].dot(D * B[b]));
        }
    }
}

/// Entry (test (i, d), trial j) += sum_q w lambda_j (M(x_q) g_i)_d.
template <class MFn>
void coupling_element(const Context& c, const Element& e, const Mat2& T, MFn&& M, Triplets& out) {
    for (int q = 0; q < 3; ++q) {
        const Mat2 Mq = M(e.qx[q]);
        for (int i = 0; i < 3; ++i) {
            const Vec2 Mg = Mq * (T * e.grad.row(i).transpose());
            for (int d = 0; d < 2; ++d) {
                const int row = c.test.dof(e.v[i], d);
                if (row < 0) continue;
                for (int j = 0; j < 3; ++j) {
                    const int col = c.trial.dof(e.v[j]);
                    if (col < 0) continue;
                    out.emplace_back(row, col, e.qw * bary(q, j) * Mg[d]);
                }
            }
        }
    }
}

template <class WFn>
void mass_element(const Context& c, const Element& e, WFn&& weight, Triplets& out) {
    for (int q = 0; q < 3; ++q) {
        const double w = e.qw * weight(e.qx[q]);
        for (int i = 0; i < 3; ++i) {
            const int row = c.test.dof(e.v[i]);
            if (row < 0) continue;
            for (int j = 0; j < 3; ++j) {
                const int col = c.trial.dof(e.v[j]);
                if (col < 0) continue;
                out.emplace_back(row, col, w * bary(q, i) * bary(q, j));
            }
        }
    }
}

/// Entry (i, j) += (T g_i) . Kbar (T g_j) with Kbar the quadrature sum of K.
void diffusion_element(const Context& c, const Element& e, const Mat2& T, const Mat2& Kbar, Triplets& out) {
    for (int i = 0; i < 3; ++i) {
        const int row = c.test.dof(e.v[i]);
        if (row < 0) continue;
        const Vec2 gi = T * e.grad.row(i).transpose();
        for (int j = 0; j < 3; ++j) {
            const int col = c.trial.dof(e.v[j]);
            if (col < 0) continue;
            const Vec2 gj = T * e.grad.row(j).transpose();
            out.emplace_back(row, col, gi.dot(Kbar * gj));
        }
    }
}

Mat2 integrated(const Element& e, const Field<Mat2>& f) {
    Mat2 s = Mat2::Zero();
    for (int q = 0; q < 3; ++q) s += e.qw * f(e.qx[q], e.id);
    return s;
}

/// Per-gamma-node trace functional: list of (dof, coefficient).
using Functional = std::vector<std::pair<int, double>>;

Functional jump(const FracturedMesh& mesh, const SpaceDescriptor& sp, int j, int comp) {
    Functional f;
    const int p = sp.dof(mesh.gamma_plus[j], comp);
    const int m = sp.dof(mesh.gamma_minus[j], comp);
    if (p >= 0) f.emplace_back(p, 1.0);
    if (m >= 0) f.emplace_back(m, -1.0);
    return f;
}

Functional trace(const FracturedMesh& mesh, const SpaceDescriptor& sp, int j, int comp, bool minus = false) {
    Functional f;
    if (sp.kind == SpaceKind::Gamma_P1) {
        f.emplace_back(sp.gamma_node[j], 1.0);
        return f;
    }
    const int d = sp.dof(minus ? mesh.gamma_minus[j] : mesh.gamma_plus[j], comp);
    if (d >= 0) f.emplace_back(d, 1.0);
    return f;
}

/// Quadrature along gamma: calls fn(j0, j1, xi, weight) for each point of
/// every segment; lumped uses the end points with half weights.
template <class Fn>
void gamma_quadrature(const FracturedMesh& mesh, bool lumped, Fn&& fn) {
    for (int j = 0; j + 1 < mesh.gamma_count(); ++j) {
        const double len = mesh.gamma_y[j + 1] - mesh.gamma_y[j];
        if (lumped) {
            fn(j, j + 1, 0.0, 0.5 * len);
            fn(j, j + 1, 1.0, 0.5 * len);
        } else {
            for (int g = 0; g < 2; ++g) fn(j, j + 1, quad::kGauss2Points[g], quad::kGauss2Weights[g] * len);
        }
    }
}

void add_product(Triplets& out, const Functional& rows, const Functional& cols, double w) {
    for (const auto& [r, cr] : rows)
        for (const auto& [c, cc] : cols) out.emplace_back(r, c, w * cr * cc);
}

void add_functional(Eigen::VectorXd& rhs, const Functional& rows, double w) {
    for (const auto& [r, cr] : rows) rhs[r] += w * cr;
}

void require_effective(const Context& c) {
    if (!c.ep) throw ValidationError("assemble", "form " + to_string(c.form.name) + " needs effective parameters");
}

template <class T>
T lerp(const std::vector<T>& v, int j0, int j1, double xi) {
    return (1.0 - xi) * v[j0] + xi * v[j1];
}

void assemble_gamma(const Context& c, Triplets& trip, Eigen::VectorXd& rhs) {
    const auto& mesh = c.mesh;
    const auto& ep = *c.ep;
    const double t = c.form.time;
    switch (c.form.name) {
        case FormName::interface_mass_jump: {
            const bool vec = c.test.components == 2;
            gamma_quadrature(mesh, true, [&](int j0, int j1, double xi, double w) {
                const int j = xi < 0.5 ? j0 : j1;
                if (vec) {
                    const Mat2 M = ep.C_gamma_N[j] / ep.aperture[j];
                    for (int d = 0; d < 2; ++d)
                        for (int e = 0; e < 2; ++e)
                            add_product(trip, jump(mesh, c.test, j, d), jump(mesh, c.trial, j, e), w * M(d, e));
                } else {
                    add_product(trip, jump(mesh, c.test, j, 0), jump(mesh, c.trial, j, 0),
                                w * ep.K_gamma_N[j] / ep.aperture[j]);
                }
            });
            break;
        }
        case FormName::gamma_mass:
            gamma_quadrature(mesh, false, [&](int j0, int j1, double xi, double w) {
                Functional r0 = trace(mesh, c.test, j0, 0), r1 = trace(mesh, c.test, j1, 0);
                Functional c0 = trace(mesh, c.trial, j0, 0), c1 = trace(mesh, c.trial, j1, 0);
                const double a = 1.0 - xi, b = xi;
                add_product(trip, r0, c0, w * a * a);
                add_product(trip, r0, c1, w * a * b);
                add_product(trip, r1, c0, w * b * a);
                add_product(trip, r1, c1, w * b * b);
            });
            break;
        case FormName::gamma_coupling_stress:
        case FormName::gamma_coupling_flow: {
            const auto& coef =
                c.form.name == FormName::gamma_coupling_stress ? ep.stress_coupling : ep.alpha_gamma;
            gamma_quadrature(mesh, true, [&](int j0, int j1, double xi, double w) {
                const Vec2 cw = lerp(coef, j0, j1, xi);
                const double phi[2] = {1.0 - xi, xi};
                const int js[2] = {j0, j1};
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        for (int d = 0; d < 2; ++d)
                            add_product(trip, jump(mesh, c.test, js[a], d), trace(mesh, c.trial, js[b], 0),
                                        w * phi[a] * phi[b] * cw[d]);
            });
            break;
        }
        case FormName::gamma_load: {
            const int ng = mesh.gamma_count();
            std::vector<Vec2> thick(ng), jumpload(ng);
            for (int j = 0; j < ng; ++j) {
                thick[j] = ep.f_thickness_integral(j, t);
                jumpload[j] = ep.F_gamma_eff(j, t) + ep.gravity_stress[j];
            }
            gamma_quadrature(mesh, true, [&](int j0, int j1, double xi, double w) {
                const Vec2 ft = lerp(thick, j0, j1, xi);
                const Vec2 fj = lerp(jumpload, j0, j1, xi);
                const double phi[2] = {1.0 - xi, xi};
                const int js[2] = {j0, j1};
                for (int a = 0; a < 2; ++a)
                    for (int d = 0; d < 2; ++d) {
                        add_functional(rhs, trace(mesh, c.test, js[a], d, true), w * phi[a] * ft[d]);
                        add_functional(rhs, jump(mesh, c.test, js[a], d), w * phi[a] * fj[d]);
                    }
            });
            break;
        }
        case FormName::gamma_flow_load: {
            const int ng = mesh.gamma_count();
            std::vector<double> thick(ng), jumpload(ng);
            for (int j = 0; j < ng; ++j) {
                thick[j] = ep.q_thickness_integral(j, t);
                jumpload[j] = ep.Q_gamma_eff(j, t);
            }
            gamma_quadrature(mesh, true, [&](int j0, int j1, double xi, double w) {
                const double qt = lerp(thick, j0, j1, xi);
                const double qj = lerp(jumpload, j0, j1, xi);
                const double phi[2] = {1.0 - xi, xi};
                const int js[2] = {j0, j1};
                for (int a = 0; a < 2; ++a) {
                    add_functional(rhs, trace(mesh, c.test, js[a], 0, true), w * phi[a] * qt);
                    add_functional(rhs, jump(mesh, c.test, js[a], 0), w * phi[a] * qj);
                }
            });
            break;
        }
        default: break;
    }
}

/// Lumped weight of gamma node j: half the lengths of its adjacent segments.
double gamma_node_weight(const FracturedMesh& mesh, int j) {
    double w = 0.0;
    if (j > 0) w += 0.5 * (mesh.gamma_y[j] - mesh.gamma_y[j - 1]);
    if (j + 1 < mesh.gamma_count()) w += 0.5 * (mesh.gamma_y[j + 1] - mesh.gamma_y[j]);
    return w;
}

/// Normal-only fracture forms of the limit problems, integrated along every
/// normal column with 1D P1 elements and weighted by the lumped gamma weight
/// of the column. The reduced interface forms use the same nodal rule in y.
void assemble_columns(const Context& c, Triplets& trip, Eigen::VectorXd& rhs) {
    const auto& mesh = c.mesh;
    const auto& ep = *c.ep;
    const auto& m = c.mat[Subdomain::Fracture];
    const double t = c.form.time;
    for (int j = 0; j < mesh.gamma_count(); ++j) {
        const double wj = gamma_node_weight(mesh, j);
        const auto& col = mesh.columns[j];
        for (std::size_t l = 0; l + 1 < col.size(); ++l) {
            const int v[2] = {col[l], col[l + 1]};
            const int tri = mesh.column_segment_triangle[j][l];
            const double len = mesh.column_lengths[j][l];
            const double dphi[2] = {-1.0 / len, 1.0 / len};
            for (int g = 0; g < 2; ++g) {
                const double xi = quad::kGauss2Points[g];
                const double w = wj * len * quad::kGauss2Weights[g];
                const Vec2 x = (1.0 - xi) * mesh.vertices[v[0]] + xi * mesh.vertices[v[1]];
                const double phi[2] = {1.0 - xi, xi};
                switch (c.form.name) {
                    case FormName::fracture_normal_stiffness: {
                        const Mat2 CN = normal_tensor(m.C(x, tri));
                        for (int a = 0; a < 2; ++a)
                            for (int d = 0; d < 2; ++d) {
                                const int row = c.test.dof(v[a], d);
                                if (row < 0) continue;
                                for (int b = 0; b < 2; ++b)
                                    for (int e = 0; e < 2; ++e) {
                                        const int cl = c.trial.dof(v[b], e);
                                        if (cl >= 0) trip.emplace_back(row, cl, w * CN(d, e) * dphi[a] * dphi[b]);
                                    }
                            }
                        break;
                    }
                    case FormName::coupling_alpha_eff: {
                        const Vec2 al = ep.alpha_f_eff(x, tri);
                        for (int a = 0; a < 2; ++a)
                            for (int d = 0; d < 2; ++d) {
                                const int row = c.test.dof(v[a], d);
                                if (row < 0) continue;
                                for (int b = 0; b < 2; ++b) {
                                    const int cl = c.trial.dof(v[b]);
                                    if (cl >= 0) trip.emplace_back(row, cl, w * phi[b] * al[d] * dphi[a]);
                                }
                            }
                        break;
                    }
                    case FormName::fracture_normal_conductivity:
                    case FormName::fracture_mass: {
                        const bool cond = c.form.name == FormName::fracture_normal_conductivity;
                        const double k = cond ? ep.K_f_N(x, tri) : ep.omega_f_eff(x, tri);
                        for (int a = 0; a < 2; ++a) {
                            const int row = c.test.dof(v[a]);
                            if (row < 0) continue;
                            for (int b = 0; b < 2; ++b) {
                                const int cl = c.trial.dof(v[b]);
                                if (cl < 0) continue;
                                trip.emplace_back(row, cl,
                                                  w * k * (cond ? dphi[a] * dphi[b] : phi[a] * phi[b]));
                            }
                        }
                        break;
                    }
                    case FormName::fracture_load: {
                        const Vec2 f = ep.f_f_eff(x, t);
                        const double G = c.form.fracture_gravity
                                             ? gravity_potential(mesh.geometry, c.mat.gravity, Subdomain::Fracture, x,
                                                                 std::nullopt)
                                             : 0.0;
                        const Vec2 al = ep.alpha_f_eff(x, tri);
                        for (int a = 0; a < 2; ++a)
                            for (int d = 0; d < 2; ++d) {
                                const int row = c.test.dof(v[a], d);
                                if (row >= 0) rhs[row] += w * (f[d] * phi[a] + G * al[d] * dphi[a]);
                            }
                        break;
                    }
                    case FormName::fracture_flow_load: {
                        const double q = ep.q_f_eff(x, t);
                        for (int a = 0; a < 2; ++a) {
                            const int row = c.test.dof(v[a]);
                            if (row >= 0) rhs[row] += w * q * phi[a];
                        }
                        break;
                    }
                    default: break;
                }
            }
        }
    }
}

bool is_column_form(FormName n) {
    return n == FormName::fracture_normal_stiffness || n == FormName::coupling_alpha_eff ||
           n == FormName::fracture_normal_conductivity || n == FormName::fracture_mass ||
           n == FormName::fracture_load || n == FormName::fracture_flow_load;
}

bool is_gamma_form(FormName n) {
    return n == FormName::interface_mass_jump || n == FormName::gamma_mass || n == FormName::gamma_coupling_stress ||
           n == FormName::gamma_coupling_flow || n == FormName::gamma_load || n == FormName::gamma_flow_load;
}

void check_spaces(const FormSpec& form, const SpaceDescriptor& trial, const SpaceDescriptor& test,
                  const FracturedMesh& mesh) {
    const auto nv = static_cast<std::size_t>(mesh.vertex_count());
    if (trial.vertex_node.size() != nv || test.vertex_node.size() != nv) {
        throw ValidationError("assemble", "space was built on a different mesh");
    }
    auto need = [&](const SpaceDescriptor& s, int comps, const char* role) {
        if (s.components != comps) {
            throw ValidationError("assemble", "form " + to_string(form.name) + " needs a " +
                                                  (comps == 2 ? "vector" : "scalar") + " " + role + " space");
        }
    };
    switch (form.name) {
        case FormName::A_hat:
        case FormName::A_b0:
        case FormName::fracture_normal_stiffness:
            need(trial, 2, "trial");
            need(test, 2, "test");
            break;
        case FormName::B_hat:
        case FormName::B_b0:
        case FormName::coupling_alpha_eff:
        case FormName::gamma_coupling_stress:
        case FormName::gamma_coupling_flow:
            need(trial, 1, "trial");
            need(test, 2, "test");
            break;
        case FormName::L_hat:
        case FormName::L_b0:
        case FormName::fracture_load:
        case FormName::gamma_load: need(test, 2, "test"); break;
        case FormName::interface_mass_jump: need(trial, test.components, "trial"); break;
        default:
            need(test, 1, "test");
            if (!is_linear_form(form.name)) need(trial, 1, "trial");
    }
}

}  // namespace

SparseSystem assemble(const FormSpec& form, const SpaceDescriptor& trial, const SpaceDescriptor& test,
                      const FracturedMesh& mesh, const MaterialFields& materials, const EffectiveParams* effective) {
    check_spaces(form, trial, test, mesh);
    Context c{form, trial, test, mesh, materials, effective, 1.0, ScalingExponents{}};
    if (needs_epsilon(form.name)) {
        if (!form.epsilon) throw ValidationError("assemble", "form " + to_string(form.name) + " needs epsilon");
        if (!(*form.epsilon > 0.0)) throw ValidationError("epsilon", "epsilon must be positive");
        c.eps = *form.epsilon;
        c.exp = form.exponents.value_or(ScalingExponents{});
    }
    if (needs_effective(form.name)) require_effective(c);

    SparseSystem sys;
    const bool linear = is_linear_form(form.name);
    sys.rhs = Eigen::VectorXd::Zero(test.n_dofs);
    Triplets trip;

    if (is_gamma_form(form.name)) {
        assemble_gamma(c, trip, sys.rhs);
    } else if (is_column_form(form.name)) {
        assemble_columns(c, trip, sys.rhs);
    } else {
        const Mat2 I = Mat2::Identity();
        const double t = form.time;
        const auto& geo = mesh.geometry;
        const Vec2 g = materials.gravity;
        for (int id = 0; id < mesh.triangle_count(); ++id) {
            const Subdomain lab = mesh.triangle_label[id];
            const bool frac = lab == Subdomain::Fracture;
            const FormName n = form.name;
            const bool hat = needs_epsilon(n);
            const bool bulk_only = n == FormName::A_b0 || n == FormName::B_b0 || n == FormName::C_b0 ||
                                   n == FormName::D_b0 || n == FormName::L_b0 || n == FormName::Q_b0;
            if (bulk_only && frac) continue;
            if (!hat && !bulk_only && !frac) continue;
            const Element e = make_element(mesh, id);
            const auto& m = materials[lab];
            const double eps = c.eps;
            const auto& ex = c.exp;
            const Mat2 T = (hat && frac) ? scaled_transform(eps) : I;
            switch (n) {
                case FormName::A_hat:
                case FormName::A_b0:
                    stiffness_element(c, e, T, (hat && frac) ? pow_eps(eps, ex.nu_C) * eps : 1.0, trip);
                    break;
                case FormName::B_hat:
                case FormName::B_b0: {
                    const Mat2 S = (hat && frac) ? alpha_scaling(eps, ex) : I;
                    coupling_element(c, e, T, [&](const Vec2& x) -> Mat2 { return S * m.alpha(x, id); }, trip);
                    break;
                }
                case FormName::C_hat:
                case FormName::C_b0: {
                    const double pref = (hat && frac) ? pow_eps(eps, ex.nu_omega) * eps : 1.0;
                    mass_element(c, e, [&](const Vec2& x) { return pref * m.omega(x, id); }, trip);
                    break;
                }
                case FormName::D_hat:
                case FormName::D_b0: {
                    const double pref = (hat && frac) ? pow_eps(eps, ex.nu_K) * eps : 1.0;
                    diffusion_element(c, e, T, pref * integrated(e, m.K), trip);
                    break;
                }
                case FormName::gamma_stiffness: {
                    Mat2 Kt = Mat2::Zero();
                    for (int q = 0; q < 3; ++q) {
                        const Mat2 K = m.K(e.qx[q], id);
                        const Vec2 KN = K.col(0);
                        Kt += e.qw * (K - KN * KN.transpose() / K(0, 0));
                    }
                    diffusion_element(c, e, I, Kt, trip);
                    break;
                }
                case FormName::L_hat:
                case FormName::L_b0: {
                    const double fpref = (hat && frac) ? pow_eps(eps, ex.nu_f) * eps : 1.0;
                    const Mat2 S = (hat && frac) ? alpha_scaling(eps, ex) : I;
                    const std::optional<double> geps = hat ? std::optional<double>(eps) : std::nullopt;
                    for (int q = 0; q < 3; ++q) {
                        const Vec2 f = fpref * m.f(e.qx[q], t);
                        const double G = gravity_potential(geo, g, lab, e.qx[q], geps);
                        const Mat2 M = S * m.alpha(e.qx[q], id);
                        for (int i = 0; i < 3; ++i) {
                            const Vec2 Mg = M * (T * e.grad.row(i).transpose());
                            for (int d = 0; d < 2; ++d) {
                                const int row = test.dof(e.v[i], d);
                                if (row < 0) continue;
                                sys.rhs[row] += e.qw * (f[d] * bary(q, i) + G * Mg[d]);
                            }
                        }
                    }
                    break;
                }
                case FormName::Q_hat:
                case FormName::Q_b0: {
                    const double pref = (hat && frac) ? pow_eps(eps, ex.nu_q) * eps : 1.0;
                    for (int q = 0; q < 3; ++q) {
                        const double val = pref * m.q(e.qx[q], t);
                        for (int i = 0; i < 3; ++i) {
                            const int row = test.dof(e.v[i]);
                            if (row >= 0) sys.rhs[row] += e.qw * val * bary(q, i);
                        }
                    }
                    break;
                }
                default: break;
            }
        }
    }
    if (!linear) {
        sys.matrix.resize(test.n_dofs, trial.n_dofs);
        sys.matrix.setFromTriplets(trip.begin(), trip.end());
        sys.matrix.makeCompressed();
    }
    return sys;
}

SparseSystem apply_constraints(SparseSystem system, const SpaceDescriptor& space,
                               const std::map<int, double>& values) {
    const int n = space.n_dofs;
    if (system.matrix.rows() != n || system.matrix.cols() != n || system.rhs.size() != n) {
        throw ValidationError("constraints", "system dimensions do not match the space");
    }
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    for (const auto& [dof, value] : values) {
        if (dof < 0 || dof >= n || !space.dirichlet[dof]) {
            throw ValidationError("constraints", "boundary value given for an unconstrained dof");
        }
        g[dof] = value;
    }
    system.rhs -= system.matrix * g;
    Triplets trip;
    for (int k = 0; k < system.matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(system.matrix, k); it; ++it) {
            if (space.dirichlet[it.row()] || space.dirichlet[it.col()]) continue;
            trip.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (int d = 0; d < n; ++d) {
        if (!space.dirichlet[d]) continue;
        trip.emplace_back(d, d, 1.0);
        system.rhs[d] = g[d];
    }
    system.matrix.setZero();
    system.matrix.setFromTriplets(trip.begin(), trip.end());
    system.matrix.makeCompressed();
    return system;
}

SparseMatrix zero_constrained(const SparseMatrix& m, const SpaceDescriptor& rows, const SpaceDescriptor& cols) {
    SparseMatrix out = m;
    out.prune([&](const Eigen::Index& r, const Eigen::Index& c, const double&) {
        return !rows.dirichlet[r] && !cols.dirichlet[c];
    });
    return out;
}

void zero_constrained(Eigen::VectorXd& rhs, const SpaceDescriptor& space) {
    for (int d = 0; d < space.n_dofs; ++d)
        if (space.dirichlet[d]) rhs[d] = 0.0;
}

}  // namespace fracbiot
