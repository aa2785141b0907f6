/*
 * src/scaling.cpp
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

#include "fracbiot/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracbiot/errors.hpp"
#include "fracbiot/quadrature.hpp"

namespace fracbiot {

std::string to_string(FlowRegime r) {
    switch (r) {
        case FlowRegime::IdealConduit: return "ideal_conduit";
        case FlowRegime::Conduit: return "conduit";
        case FlowRegime::Neutral: return "neutral";
        case FlowRegime::Barrier: return "barrier";
        case FlowRegime::Wall: return "wall";
    }
    return "unknown";
}

std::string to_string(MechRegime r) { return r == MechRegime::Soft ? "soft" : "very_soft"; }

double theta(const Rational& nu) { return 0.5 * (nu.to_double() - 1.0); }
double iota(const Rational& nu) { return 0.5 * (nu.to_double() + 1.0); }

namespace {

const Rational kOne{1};
const Rational kTwo{2};

Rational max0(const Rational& r) { return r < Rational{0} ? Rational{0} : r; }

}  // namespace

std::vector<ClauseViolation> check_exponents(const ScalingExponents& e, const Geometry& geometry) {
    std::vector<ClauseViolation> out;
    if (e.nu_omega < -kOne) out.push_back({"clause (i)", "nu_omega >= -1 is required, got " + e.nu_omega.str()});
    const bool q_by_storage = kTwo * e.nu_q >= e.nu_omega - kOne;
    const bool q_by_conductivity = kTwo * e.nu_q >= e.nu_K - Rational{3} && e.nu_q >= -kOne;
    if (!q_by_storage && !q_by_conductivity) {
        out.push_back({"clause (iv)",
                       "need 2 nu_q >= nu_omega - 1, or 2 nu_q >= nu_K - 3 together with nu_q >= -1"});
    }
    if (!(kTwo * e.nu_f >= e.nu_C - Rational{3}) || !(e.nu_f >= -kOne)) {
        out.push_back({"clause (v)", "need 2 nu_f >= nu_C - 3 and nu_f >= -1"});
    }
    const Rational alpha_floor = max0(e.nu_C) - kOne;
    if (!(kTwo * e.nu_alpha_par >= alpha_floor) || !(kTwo * e.nu_alpha_perp >= alpha_floor)) {
        out.push_back({"clause (vi)", "need 2 nu_alpha_par and 2 nu_alpha_perp >= max(nu_C, 0) - 1"});
    }
    const bool plus_d = geometry.has_flow_dirichlet(Subdomain::Plus);
    const bool minus_d = geometry.has_flow_dirichlet(Subdomain::Minus);
    if (e.nu_K > kOne) {
        if (!(plus_d && minus_d)) {
            out.push_back({"clause (vii)", "both sides need flow-Dirichlet when nu_K > 1"});
        }
    } else if (!(plus_d || minus_d)) {
        out.push_back({"clause (vii)", "at least one bulk side needs a flow-Dirichlet segment"});
    }
    if (e.nu_C < kOne) {
        out.push_back({"clause (nu_C >= 1)", "limit models are implemented for nu_C >= 1 only"});
    }
    return out;
}

RegimeDescriptor classify(const ScalingExponents& e, const Geometry& geometry) {
    RegimeDescriptor r;
    if (e.nu_K < -kOne) r.flow = FlowRegime::IdealConduit;
    else if (e.nu_K == -kOne) r.flow = FlowRegime::Conduit;
    else if (e.nu_K < kOne) r.flow = FlowRegime::Neutral;
    else if (e.nu_K == kOne) r.flow = FlowRegime::Barrier;
    else r.flow = FlowRegime::Wall;
    r.mech = e.nu_C == kOne ? MechRegime::Soft : MechRegime::VerySoft;
    r.storage_present = e.nu_omega == -kOne;
    r.biot_coupled = kTwo * e.nu_alpha_perp == e.nu_C - kOne;
    r.flow_source_present = e.nu_q == -kOne;
    r.mech_source_present = kTwo * e.nu_f == e.nu_C - Rational{3};
    r.W_is_zero = geometry.tag(BoundarySegment::FractureTop) == FlowTag::Dirichlet ||
                  geometry.tag(BoundarySegment::FractureBottom) == FlowTag::Dirichlet;
    return r;
}

RegimeDescriptor validate_exponents(const ScalingExponents& e, const Geometry& geometry) {
    const auto violations = check_exponents(e, geometry);
    if (!violations.empty()) {
        std::ostringstream msg;
        for (std::size_t i = 0; i < violations.size(); ++i) {
            if (i) msg << "; ";
            msg << violations[i].clause << ": " << violations[i].message;
        }
        throw ValidationError(violations.front().clause, msg.str());
    }
    return classify(e, geometry);
}

namespace {

/// Calls fn(point, element, weight) for the two Gauss points of every
/// segment of column j, weights being segment lengths times rule weights.
template <class Fn>
void column_quadrature(const FracturedMesh& mesh, int j, Fn&& fn) {
    const auto& col = mesh.columns[j];
    const double y = mesh.gamma_y[j];
    for (std::size_t k = 0; k + 1 < col.size(); ++k) {
        const double s0 = mesh.vertices[col[k]].x();
        const double len = mesh.column_lengths[j][k];
        const int element = mesh.column_segment_triangle[j][k];
        for (int g = 0; g < 2; ++g) {
            fn(Vec2(s0 + quad::kGauss2Points[g] * len, y), element, quad::kGauss2Weights[g] * len, static_cast<int>(k));
        }
    }
}

double column_length(const FracturedMesh& mesh, int j) {
    double a = 0.0;
    for (double l : mesh.column_lengths[j]) a += l;
    if (mesh.column_lengths[j].empty()) throw ValidationError("average", "empty normal column");
    return a;
}

double fracture_area(const FracturedMesh& mesh) {
    double area = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t)
        if (mesh.triangle_label[t] == Subdomain::Fracture) area += mesh.triangle_area(t);
    return area;
}

}  // namespace

std::vector<double> average_normal(const FracturedMesh& mesh, const Field<double>& f) {
    std::vector<double> out(mesh.gamma_count(), 0.0);
    for (int j = 0; j < mesh.gamma_count(); ++j) {
        double sum = 0.0;
        column_quadrature(mesh, j, [&](const Vec2& x, int e, double w, int) { sum += w * f(x, e); });
        out[j] = sum / column_length(mesh, j);
    }
    return out;
}

std::vector<double> average_normal(const FracturedMesh& mesh, const std::vector<double>& vertex_values) {
    std::vector<double> out(mesh.gamma_count(), 0.0);
    for (int j = 0; j < mesh.gamma_count(); ++j) {
        const auto& col = mesh.columns[j];
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < col.size(); ++k) {
            sum += 0.5 * mesh.column_lengths[j][k] * (vertex_values.at(col[k]) + vertex_values.at(col[k + 1]));
        }
        out[j] = sum / column_length(mesh, j);
    }
    return out;
}

double average_fracture(const FracturedMesh& mesh, const Field<double>& f) {
    double sum = 0.0;
    const auto rule = quad::degree5_rule();
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        if (mesh.triangle_label[t] != Subdomain::Fracture) continue;
        const auto& tri = mesh.triangles[t];
        const double area = mesh.triangle_area(t);
        for (int q = 0; q < 7; ++q) {
            const auto& b = rule.points[q];
            const Vec2 x = b[0] * mesh.vertices[tri[0]] + b[1] * mesh.vertices[tri[1]] + b[2] * mesh.vertices[tri[2]];
            sum += rule.weights[q] * area * f(x, t);
        }
    }
    return sum / fracture_area(mesh);
}

double average_fracture(const FracturedMesh& mesh, const std::vector<double>& vertex_values) {
    double sum = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        if (mesh.triangle_label[t] != Subdomain::Fracture) continue;
        const auto& tri = mesh.triangles[t];
        sum += mesh.triangle_area(t) *
               (vertex_values.at(tri[0]) + vertex_values.at(tri[1]) + vertex_values.at(tri[2])) / 3.0;
    }
    return sum / fracture_area(mesh);
}

namespace {

Mat2 checked_inverse(const Mat2& CN) {
    const double det = CN.determinant();
    const double scale = CN.cwiseAbs().maxCoeff();
    if (!(std::abs(det) > 1e-14 * scale * scale)) {
        throw SolverError("normal elasticity tensor is not invertible; the fracture elasticity tensor is not elliptic");
    }
    return CN.inverse();
}

double checked_KN(const Mat2& K) {
    const double kn = K(0, 0);
    if (!(kn > 0.0)) throw SolverError("normal fracture conductivity K_f N . N must be positive");
    return kn;
}

/// Per-column data sampled at segment midpoints.
struct ColumnSamples {
    std::vector<double> s0, len;
    std::vector<Mat2> CN_inv;
    std::vector<double> KN;
};

}  // namespace

EffectiveParams compute_effective(const MaterialFields& materials, const ScalingExponents& exp,
                                  const RegimeDescriptor& regime, const FracturedMesh& mesh) {
    const auto& frac = materials[Subdomain::Fracture];
    EffectiveParams ep;
    ep.regime = regime;
    ep.exponents = exp;

    const bool coupled = regime.biot_coupled;
    const bool storage = regime.storage_present;
    const bool qsrc = regime.flow_source_present;
    const bool fsrc = regime.mech_source_present;

    ep.C_f_N = [C = frac.C](const Vec2& x, int e) { return normal_tensor(C(x, e)); };
    ep.alpha_f_eff = [alpha = frac.alpha, coupled](const Vec2& x, int e) -> Vec2 {
        return coupled ? Vec2(alpha(x, e).col(0)) : Vec2::Zero();
    };
    ep.K_f_N = [K = frac.K](const Vec2& x, int e) { return K(x, e)(0, 0); };
    ep.omega_f_eff = [omega = frac.omega, storage](const Vec2& x, int e) { return storage ? omega(x, e) : 0.0; };
    ep.f_f_eff = [f = frac.f, fsrc](const Vec2& x, double t) -> Vec2 { return fsrc ? f(x, t) : Vec2::Zero(); };
    ep.q_f_eff = [q = frac.q, qsrc](const Vec2& x, double t) { return qsrc ? q(x, t) : 0.0; };

    const int ng = mesh.gamma_count();
    ep.y = mesh.gamma_y;
    ep.aperture.resize(ng);
    ep.C_gamma_N.resize(ng);
    ep.K_gamma.resize(ng);
    ep.K_gamma_N.resize(ng);
    ep.alpha_gamma.resize(ng);
    ep.stress_coupling.resize(ng);
    ep.gravity_stress.resize(ng);
    ep.omega_average.resize(ng);

    auto samples = std::make_shared<std::vector<ColumnSamples>>(ng);
    for (int j = 0; j < ng; ++j) {
        const auto& col = mesh.columns[j];
        const double y = mesh.gamma_y[j];
        const double a = column_length(mesh, j);
        ep.aperture[j] = a;
        auto& cs = (*samples)[j];
        Mat2 inv_sum = Mat2::Zero();
        Mat2 Kt_sum = Mat2::Zero();
        Vec2 alpha_sum = Vec2::Zero();
        Vec2 coupling_sum = Vec2::Zero();
        double inv_KN_sum = 0.0, omega_sum = 0.0;
        Vec2 alpha_first = Vec2::Zero();
        double KN_first = 0.0;
        for (std::size_t k = 0; k + 1 < col.size(); ++k) {
            const double s0 = mesh.vertices[col[k]].x();
            const double len = mesh.column_lengths[j][k];
            const int e = mesh.column_segment_triangle[j][k];
            const Vec2 mid(s0 + 0.5 * len, y);
            const Mat2 CNi = checked_inverse(ep.C_f_N(mid, e));
            const Mat2 K = frac.K(mid, e);
            const double KN = checked_KN(K);
            const Vec2 KNv = K.col(0);
            const Vec2 al = ep.alpha_f_eff(mid, e);
            cs.s0.push_back(s0);
            cs.len.push_back(len);
            cs.CN_inv.push_back(CNi);
            cs.KN.push_back(KN);
            inv_sum += len * CNi;
            Kt_sum += len * (K - KNv * KNv.transpose() / KN);
            alpha_sum += len * al;
            coupling_sum += len * CNi * al;
            inv_KN_sum += len / KN;
            omega_sum += len * ep.omega_f_eff(mid, e);
            if (k == 0) {
                alpha_first = al;
                KN_first = KN;
            } else {
                if ((al - alpha_first).lpNorm<Eigen::Infinity>() > 1e-12) ep.alpha_constant_per_column = false;
                if (std::abs(KN - KN_first) > 1e-12) ep.K_N_constant_per_column = false;
            }
        }
        ep.C_gamma_N[j] = checked_inverse(inv_sum / a);
        ep.K_gamma[j] = Kt_sum / a;
        ep.K_gamma_N[j] = a / inv_KN_sum;
        ep.alpha_gamma[j] = alpha_sum / a;
        ep.stress_coupling[j] = ep.C_gamma_N[j] * coupling_sum / a;
        // The limit fracture potential (x - (x.N)N).g depends on y only.
        ep.gravity_stress[j] = (y * materials.gravity.y()) * ep.stress_coupling[j];
        ep.omega_average[j] = omega_sum / a;
    }
    ep.fracture_area = fracture_area(mesh);

    const auto* meshp = &mesh;
    auto C_gamma = ep.C_gamma_N;
    auto K_gamma_N = ep.K_gamma_N;
    auto apertures = ep.aperture;
    auto f_eff = ep.f_f_eff;
    auto q_eff = ep.q_f_eff;
    // Nested integrals: R(s) is the running integral of (C^N)^{-1}, linear on
    // each segment, so two-point Gauss is exact for affine sources.
    ep.F_gamma_eff = [meshp, samples, C_gamma, apertures, f_eff](int j, double t) -> Vec2 {
        const auto& cs = (*samples)[j];
        const double y = meshp->gamma_y[j];
        Mat2 R0 = Mat2::Zero();
        Vec2 sum = Vec2::Zero();
        for (std::size_t k = 0; k < cs.len.size(); ++k) {
            for (int g = 0; g < 2; ++g) {
                const double xi = quad::kGauss2Points[g];
                const Mat2 R = R0 + xi * cs.len[k] * cs.CN_inv[k];
                sum += quad::kGauss2Weights[g] * cs.len[k] * (R * f_eff(Vec2(cs.s0[k] + xi * cs.len[k], y), t));
            }
            R0 += cs.len[k] * cs.CN_inv[k];
        }
        return C_gamma[j] * sum / apertures[j];
    };
    ep.Q_gamma_eff = [meshp, samples, K_gamma_N, apertures, q_eff](int j, double t) {
        const auto& cs = (*samples)[j];
        const double y = meshp->gamma_y[j];
        double R0 = 0.0, sum = 0.0;
        for (std::size_t k = 0; k < cs.len.size(); ++k) {
            for (int g = 0; g < 2; ++g) {
                const double xi = quad::kGauss2Points[g];
                const double R = R0 + xi * cs.len[k] / cs.KN[k];
                sum += quad::kGauss2Weights[g] * cs.len[k] * R * q_eff(Vec2(cs.s0[k] + xi * cs.len[k], y), t);
            }
            R0 += cs.len[k] / cs.KN[k];
        }
        return K_gamma_N[j] * sum / apertures[j];
    };
    ep.f_thickness_integral = [meshp, samples, f_eff](int j, double t) -> Vec2 {
        const auto& cs = (*samples)[j];
        Vec2 sum = Vec2::Zero();
        for (std::size_t k = 0; k < cs.len.size(); ++k)
            for (int g = 0; g < 2; ++g)
                sum += quad::kGauss2Weights[g] * cs.len[k] *
                       f_eff(Vec2(cs.s0[k] + quad::kGauss2Points[g] * cs.len[k], meshp->gamma_y[j]), t);
        return sum;
    };
    ep.q_thickness_integral = [meshp, samples, q_eff](int j, double t) {
        const auto& cs = (*samples)[j];
        double sum = 0.0;
        for (std::size_t k = 0; k < cs.len.size(); ++k)
            for (int g = 0; g < 2; ++g)
                sum += quad::kGauss2Weights[g] * cs.len[k] *
                       q_eff(Vec2(cs.s0[k] + quad::kGauss2Points[g] * cs.len[k], meshp->gamma_y[j]), t);
        return sum;
    };
    ep.F_gamma_eff_initial.resize(ng);
    ep.Q_gamma_eff_initial.resize(ng);
    for (int j = 0; j < ng; ++j) {
        ep.F_gamma_eff_initial[j] = ep.F_gamma_eff(j, 0.0);
        ep.Q_gamma_eff_initial[j] = ep.Q_gamma_eff(j, 0.0);
    }
    return ep;
}

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError("nondimensionalize", std::string(name) + " must be positive");
    }
}

double pow_eps(double eps, const Rational& nu) { return std::pow(eps, nu.to_double()); }

}  // namespace

Nondimensionalized nondimensionalize(const DimensionalInputs& in, const FieldSet& raw, const ScalingExponents& exp) {
    require_positive(in.a_star, "a*");
    require_positive(in.L_star, "L*");
    require_positive(in.K_star, "K_b*");
    require_positive(in.rho_star, "rho*");
    require_positive(in.g_star, "g*");
    if (!(in.T_final >= 0.0)) throw ValidationError("nondimensionalize", "final time must be non-negative");

    Nondimensionalized out;
    auto& sc = out.scales;
    sc.epsilon = in.a_star / in.L_star;
    sc.t_star = in.L_star / in.K_star;
    sc.C_b = in.rho_star * in.g_star * in.L_star;
    sc.f_b = in.rho_star * in.g_star;
    sc.omega_b = 1.0 / sc.C_b;
    sc.q_b = in.K_star / in.L_star;
    sc.L_star = in.L_star;
    sc.K_b = in.K_star;
    sc.g_star = in.g_star;
    sc.exponents = exp;
    out.T = in.T_final / sc.t_star;

    const double e = sc.epsilon;
    FieldSet& f = out.fields;
    for (const auto& x : raw.positions) f.positions.push_back(x / in.L_star);
    for (double t : raw.times) f.times.push_back(t / sc.t_star);
    for (double p : raw.pressure_head) f.pressure_head.push_back(p / in.L_star);
    for (const auto& u : raw.displacement) f.displacement.push_back(u / in.L_star);
    f.C_bulk = raw.C_bulk / sc.C_b;
    f.K_bulk = raw.K_bulk / sc.K_b;
    f.omega_bulk = raw.omega_bulk / sc.omega_b;
    f.f_bulk = raw.f_bulk / sc.f_b;
    f.q_bulk = raw.q_bulk / sc.q_b;
    f.C_frac = raw.C_frac / (pow_eps(e, exp.nu_C) * sc.C_b);
    f.K_frac = raw.K_frac / (pow_eps(e, exp.nu_K) * sc.K_b);
    f.omega_frac = raw.omega_frac / (pow_eps(e, exp.nu_omega) * sc.omega_b);
    f.f_frac = raw.f_frac / (pow_eps(e, exp.nu_f) * sc.f_b);
    f.q_frac = raw.q_frac / (pow_eps(e, exp.nu_q) * sc.q_b);
    f.gravity = raw.gravity / in.g_star;
    return out;
}

FieldSet redimensionalize(const ReferenceScales& sc, const FieldSet& s) {
    const double e = sc.epsilon;
    const auto& exp = sc.exponents;
    FieldSet f;
    for (const auto& x : s.positions) f.positions.push_back(x * sc.L_star);
    for (double t : s.times) f.times.push_back(t * sc.t_star);
    for (double p : s.pressure_head) f.pressure_head.push_back(p * sc.L_star);
    for (const auto& u : s.displacement) f.displacement.push_back(u * sc.L_star);
    f.C_bulk = s.C_bulk * sc.C_b;
    f.K_bulk = s.K_bulk * sc.K_b;
    f.omega_bulk = s.omega_bulk * sc.omega_b;
    f.f_bulk = s.f_bulk * sc.f_b;
    f.q_bulk = s.q_bulk * sc.q_b;
    f.C_frac = s.C_frac * pow_eps(e, exp.nu_C) * sc.C_b;
    f.K_frac = s.K_frac * pow_eps(e, exp.nu_K) * sc.K_b;
    f.omega_frac = s.omega_frac * pow_eps(e, exp.nu_omega) * sc.omega_b;
    f.f_frac = s.f_frac * pow_eps(e, exp.nu_f) * sc.f_b;
    f.q_frac = s.q_frac * pow_eps(e, exp.nu_q) * sc.q_b;
    f.gravity = s.gravity * sc.g_star;
    return f;
}

}  // namespace fracbiot
