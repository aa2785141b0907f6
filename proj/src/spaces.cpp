/*
 * src/spaces.cpp
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

#include "fracbiot/spaces.hpp"

#include "fracbiot/errors.hpp"

namespace fracbiot {

std::string to_string(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::V_full: return "V_full";
        case SpaceKind::Phi_full: return "Phi_full";
        case SpaceKind::V_sharp: return "V_sharp";
        case SpaceKind::Phi_sharp: return "Phi_sharp";
        case SpaceKind::V_gt1: return "V_gt1";
        case SpaceKind::V_1: return "V_1";
        case SpaceKind::Phi_lt_m1: return "Phi_lt_m1";
        case SpaceKind::Phi_m1: return "Phi_m1";
        case SpaceKind::Phi_open: return "Phi_open";
        case SpaceKind::Phi_1: return "Phi_1";
        case SpaceKind::Phi_gt1: return "Phi_gt1";
        case SpaceKind::Gamma_P1: return "Gamma_P1";
    }
    return "unknown";
}

bool is_vector_kind(SpaceKind kind) {
    return kind == SpaceKind::V_full || kind == SpaceKind::V_sharp || kind == SpaceKind::V_gt1 ||
           kind == SpaceKind::V_1;
}

int SpaceDescriptor::constrained_count() const {
    int n = 0;
    for (bool d : dirichlet) n += d ? 1 : 0;
    return n;
}

namespace {

bool merges_gamma(SpaceKind k) {
    return k == SpaceKind::Phi_lt_m1 || k == SpaceKind::Phi_m1 || k == SpaceKind::Phi_open;
}

bool identifies_pairs(SpaceKind k) {
    return k == SpaceKind::V_full || k == SpaceKind::Phi_full || k == SpaceKind::V_sharp ||
           k == SpaceKind::Phi_sharp;
}

bool is_bulk_segment(BoundarySegment s) { return owner(s) != Subdomain::Fracture; }

}  // namespace

SpaceDescriptor build_space(const FracturedMesh& mesh, SpaceKind kind, const SpaceOptions& options) {
    const int nv = mesh.vertex_count();
    const int ng = mesh.gamma_count();
    if (ng == 0 || static_cast<int>(mesh.columns.size()) != ng) {
        throw ValidationError("space", "mesh lacks gamma nodes or normal columns");
    }
    SpaceDescriptor sp;
    sp.kind = kind;
    sp.components = is_vector_kind(kind) ? 2 : 1;
    sp.vertex_node.assign(nv, -1);
    sp.gamma_node.assign(ng, -1);

    std::vector<int> bulk_gamma_index(nv, -1);
    for (int j = 0; j < ng; ++j) {
        bulk_gamma_index[mesh.gamma_plus[j]] = j;
        bulk_gamma_index[mesh.gamma_minus[j]] = j;
    }

    int next = 0;
    int shared = -1;
    auto gamma_merged = [&](int j) {
        if (kind == SpaceKind::Phi_lt_m1) {
            if (shared < 0) shared = next++;
            sp.gamma_node[j] = shared;
            return shared;
        }
        if (sp.gamma_node[j] < 0) sp.gamma_node[j] = next++;
        return sp.gamma_node[j];
    };

    if (kind == SpaceKind::Gamma_P1) {
        for (int j = 0; j < ng; ++j) {
            sp.gamma_node[j] = next++;
            sp.vertex_node[mesh.gamma_plus[j]] = j;
            sp.vertex_node[mesh.gamma_minus[j]] = j;
        }
    } else {
        for (int v = 0; v < nv; ++v) {
            const Subdomain sub = mesh.vertex_subdomain[v];
            if (sub != Subdomain::Fracture) {
                if (merges_gamma(kind) && bulk_gamma_index[v] >= 0) {
                    sp.vertex_node[v] = gamma_merged(bulk_gamma_index[v]);
                } else {
                    sp.vertex_node[v] = next++;
                }
                continue;
            }
            const int j = mesh.vertex_column[v];
            const int k = mesh.vertex_layer[v];
            const int last = static_cast<int>(mesh.columns[j].size()) - 1;
            const bool end = k == 0 || k == last;
            if (identifies_pairs(kind)) {
                if (end) {
                    const int bulk = k == last ? mesh.gamma_plus[j] : mesh.gamma_minus[j];
                    sp.vertex_node[v] = sp.vertex_node[bulk];
                } else {
                    sp.vertex_node[v] = next++;
                }
            } else if (kind == SpaceKind::V_gt1) {
                sp.vertex_node[v] = next++;
            } else if (merges_gamma(kind)) {
                sp.vertex_node[v] = gamma_merged(j);
            } else if (kind == SpaceKind::Phi_gt1 && options.fracture_nodes) {
                sp.vertex_node[v] = next++;
            }
        }
    }
    sp.n_nodes = next;
    sp.n_dofs = sp.components * next;
    sp.dirichlet.assign(sp.n_dofs, false);

    auto constrain_vertex = [&](int v) {
        const int n = sp.vertex_node[v];
        if (n < 0) return;
        for (int c = 0; c < sp.components; ++c) sp.dirichlet[sp.components * n + c] = true;
    };

    if (kind == SpaceKind::Gamma_P1) {
        if (mesh.gamma_boundary_tags[0] == FlowTag::Dirichlet) sp.dirichlet[sp.gamma_node[0]] = true;
        if (mesh.gamma_boundary_tags[1] == FlowTag::Dirichlet) sp.dirichlet[sp.gamma_node[ng - 1]] = true;
    } else if (sp.components == 2) {
        for (const auto& f : mesh.boundary_facets) {
            constrain_vertex(f.a);
            constrain_vertex(f.b);
        }
        if (kind == SpaceKind::V_gt1) {
            for (const auto& col : mesh.columns) {
                constrain_vertex(col.front());
                constrain_vertex(col.back());
            }
        }
    } else {
        for (const auto& f : mesh.boundary_facets) {
            if (f.tag != FlowTag::Dirichlet) continue;
            for (int v : {f.a, f.b}) {
                if (merges_gamma(kind) && is_bulk_segment(f.segment) && bulk_gamma_index[v] >= 0) continue;
                constrain_vertex(v);
            }
        }
    }
    return sp;
}

Eigen::VectorXd interpolate_scalar(const FracturedMesh& mesh, const SpaceDescriptor& space,
                                   const std::function<double(Subdomain, const Vec2&)>& fn) {
    if (space.components != 1) throw ValidationError("space", "scalar interpolation needs a scalar space");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(space.n_dofs);
    std::vector<bool> set(space.n_dofs, false);
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const int d = space.dof(v);
        if (d < 0 || set[d]) continue;
        set[d] = true;
        out[d] = space.dirichlet[d] ? 0.0 : fn(mesh.vertex_subdomain[v], mesh.vertices[v]);
    }
    return out;
}

std::vector<double> scalar_vertex_values(const SpaceDescriptor& space, const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != space.n_dofs) throw ValidationError("space", "coefficient vector does not match the space");
    std::vector<double> out(space.vertex_node.size(), 0.0);
    for (std::size_t v = 0; v < out.size(); ++v) {
        const int n = space.vertex_node[v];
        if (n >= 0) out[v] = coeffs[space.components * n];
    }
    return out;
}

std::vector<Vec2> vector_vertex_values(const SpaceDescriptor& space, const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != space.n_dofs || space.components != 2) {
        throw ValidationError("space", "coefficient vector does not match the vector space");
    }
    std::vector<Vec2> out(space.vertex_node.size(), Vec2::Zero());
    for (std::size_t v = 0; v < out.size(); ++v) {
        const int n = space.vertex_node[v];
        if (n >= 0) out[v] = Vec2(coeffs[2 * n], coeffs[2 * n + 1]);
    }
    return out;
}

namespace {

/// Rows are the gradients of the three barycentric coordinates.
Eigen::Matrix<double, 3, 2> barycentric_gradients(const FracturedMesh& mesh, int element) {
    const auto& t = mesh.triangles[element];
    const Vec2& x0 = mesh.vertices[t[0]];
    Mat2 J;
    J.col(0) = mesh.vertices[t[1]] - x0;
    J.col(1) = mesh.vertices[t[2]] - x0;
    const Mat2 JinvT = J.inverse().transpose();
    Eigen::Matrix<double, 3, 2> G;
    G.row(1) = JinvT.col(0).transpose();
    G.row(2) = JinvT.col(1).transpose();
    G.row(0) = -G.row(1) - G.row(2);
    return G;
}

}  // namespace

Vec2 p1_gradient(const FracturedMesh& mesh, const std::vector<double>& vertex_values, int element) {
    const auto G = barycentric_gradients(mesh, element);
    const auto& t = mesh.triangles[element];
    Vec2 g = Vec2::Zero();
    for (int i = 0; i < 3; ++i) g += vertex_values[t[i]] * G.row(i).transpose();
    return g;
}

Mat2 p1_jacobian(const FracturedMesh& mesh, const std::vector<Vec2>& vertex_values, int element) {
    const auto G = barycentric_gradients(mesh, element);
    const auto& t = mesh.triangles[element];
    Mat2 J = Mat2::Zero();
    for (int i = 0; i < 3; ++i) J += vertex_values[t[i]] * G.row(i);
    return J;
}

Vec2 eval_scaled_gradient(const FracturedMesh& mesh, const std::vector<double>& vertex_values, int element,
                          double epsilon) {
    if (!(epsilon > 0.0)) throw ValidationError("epsilon", "epsilon must be positive");
    Vec2 g = p1_gradient(mesh, vertex_values, element);
    if (mesh.triangle_label[element] == Subdomain::Fracture) g.x() /= epsilon;
    return g;
}

Mat2 eval_scaled_jacobian(const FracturedMesh& mesh, const std::vector<Vec2>& vertex_values, int element,
                          double epsilon) {
    if (!(epsilon > 0.0)) throw ValidationError("epsilon", "epsilon must be positive");
    Mat2 J = p1_jacobian(mesh, vertex_values, element);
    if (mesh.triangle_label[element] == Subdomain::Fracture) J.col(0) /= epsilon;
    return J;
}

Mat2 eval_scaled_strain(const FracturedMesh& mesh, const std::vector<Vec2>& vertex_values, int element,
                        double epsilon) {
    const Mat2 J = eval_scaled_jacobian(mesh, vertex_values, element, epsilon);
    return 0.5 * (J + J.transpose());
}

}  // namespace fracbiot
