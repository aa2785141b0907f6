/*
 * src/norms.cpp
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

#include "fracbiot/norms.hpp"

#include <cmath>

#include "fracbiot/errors.hpp"
#include "fracbiot/quadrature.hpp"
#include "fracbiot/spaces.hpp"

namespace fracbiot {

namespace {

bool in_scope(NormKind kind, Subdomain label) {
    const bool frac = label == Subdomain::Fracture;
    switch (kind) {
        case NormKind::L2_bulk:
        case NormKind::H1_bulk: return !frac;
        case NormKind::L2_frac:
        case NormKind::HN1_frac:
        case NormKind::H1_frac: return frac;
        default: return false;
    }
}

/// Integral of the square of a P1 function over one triangle.
double p1_square_integral(double area, double a, double b, double c) {
    return area / 6.0 * (a * a + b * b + c * c + a * b + b * c + a * c);
}

double gamma_l2_sq(const FracturedMesh& mesh, const std::function<double(int vertex)>& value) {
    double sum = 0.0;
    for (int j = 0; j + 1 < mesh.gamma_count(); ++j) {
        const double len = mesh.gamma_y[j + 1] - mesh.gamma_y[j];
        const double a = value(mesh.gamma_plus[j]);
        const double b = value(mesh.gamma_plus[j + 1]);
        sum += len / 3.0 * (a * a + a * b + b * b);
    }
    return sum;
}

void require_spatial(NormKind kind) {
    if (kind == NormKind::L2_time_composite || kind == NormKind::H1_time_composite) {
        throw ValidationError("norm", "time-composite norms need a time series");
    }
}

double scalar_sq(const FracturedMesh& mesh, const std::vector<double>& v, NormKind kind, const NormWeights& w) {
    require_spatial(kind);
    if (static_cast<int>(v.size()) != mesh.vertex_count()) throw ValidationError("norm", "field size mismatch");
    if (kind == NormKind::L2_gamma) return w.bulk * w.bulk * gamma_l2_sq(mesh, [&](int i) { return v[i]; });
    double sum = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Subdomain lab = mesh.triangle_label[t];
        if (!in_scope(kind, lab)) continue;
        const double s = lab == Subdomain::Fracture ? w.fracture : w.bulk;
        const auto& tri = mesh.triangles[t];
        const double area = mesh.triangle_area(t);
        double val = p1_square_integral(area, v[tri[0]], v[tri[1]], v[tri[2]]);
        if (kind == NormKind::H1_bulk || kind == NormKind::H1_frac || kind == NormKind::HN1_frac) {
            const Vec2 g = p1_gradient(mesh, v, t);
            val += area * (kind == NormKind::HN1_frac ? g.x() * g.x() : g.squaredNorm());
        }
        sum += s * s * val;
    }
    return sum;
}

}  // namespace

double compute_norm(const FracturedMesh& mesh, const std::vector<double>& values, NormKind kind,
                    const NormWeights& weights) {
    return std::sqrt(scalar_sq(mesh, values, kind, weights));
}

double compute_norm(const FracturedMesh& mesh, const std::vector<Vec2>& values, NormKind kind,
                    const NormWeights& weights) {
    double sum = 0.0;
    for (int c = 0; c < 2; ++c) {
        std::vector<double> comp(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) comp[i] = values[i][c];
        sum += scalar_sq(mesh, comp, kind, weights);
    }
    return std::sqrt(sum);
}

double sum_over_elements(const FracturedMesh& mesh, Subdomain label, const std::function<double(int)>& fn) {
    double sum = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t)
        if (mesh.triangle_label[t] == label) sum += fn(t);
    return sum;
}

double l2_in_time(const std::vector<double>& times, const std::vector<double>& sq) {
    if (times.size() != sq.size()) throw ValidationError("norm", "time series size mismatch");
    double sum = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) sum += 0.5 * (times[k] - times[k - 1]) * (sq[k] + sq[k - 1]);
    return std::sqrt(sum);
}

double h1_in_time(const std::vector<double>& times, const std::vector<double>& sq,
                  const std::vector<double>& diff_sq) {
    if (diff_sq.size() != times.size()) throw ValidationError("norm", "time series size mismatch");
    const double l2 = l2_in_time(times, sq);
    double d = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) d += diff_sq[k] / (times[k] - times[k - 1]);
    return std::sqrt(l2 * l2 + d);
}

namespace {

template <class T>
double time_norm(const FracturedMesh& mesh, const std::vector<double>& times, const std::vector<std::vector<T>>& series,
                 NormKind spatial, NormKind composite, const NormWeights& w) {
    if (series.size() != times.size()) throw ValidationError("norm", "time series size mismatch");
    std::vector<double> sq(times.size()), dsq(times.size(), 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double n = compute_norm(mesh, series[k], spatial, w);
        sq[k] = n * n;
        if (k > 0 && composite == NormKind::H1_time_composite) {
            std::vector<T> diff(series[k].size());
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = series[k][i] - series[k - 1][i];
            const double dn = compute_norm(mesh, diff, spatial, w);
            dsq[k] = dn * dn;
        }
    }
    if (composite == NormKind::L2_time_composite) return l2_in_time(times, sq);
    if (composite == NormKind::H1_time_composite) return h1_in_time(times, sq, dsq);
    throw ValidationError("norm", "composite kind must be a time-composite norm");
}

}  // namespace

double compute_time_norm(const FracturedMesh& mesh, const std::vector<double>& times,
                         const std::vector<std::vector<double>>& series, NormKind spatial, NormKind composite,
                         const NormWeights& weights) {
    return time_norm(mesh, times, series, spatial, composite, weights);
}

double compute_time_norm(const FracturedMesh& mesh, const std::vector<double>& times,
                         const std::vector<std::vector<Vec2>>& series, NormKind spatial, NormKind composite,
                         const NormWeights& weights) {
    return time_norm(mesh, times, series, spatial, composite, weights);
}

double l2_error(const FracturedMesh& mesh, const std::vector<double>& values,
                const std::function<double(Subdomain, const Vec2&)>& exact) {
    const auto rule = quad::degree5_rule();
    double sum = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double area = mesh.triangle_area(t);
        for (int q = 0; q < 7; ++q) {
            const auto& b = rule.points[q];
            const Vec2 x = b[0] * mesh.vertices[tri[0]] + b[1] * mesh.vertices[tri[1]] + b[2] * mesh.vertices[tri[2]];
            const double uh = b[0] * values[tri[0]] + b[1] * values[tri[1]] + b[2] * values[tri[2]];
            const double e = uh - exact(mesh.triangle_label[t], x);
            sum += rule.weights[q] * area * e * e;
        }
    }
    return std::sqrt(sum);
}

double h1_seminorm_error(const FracturedMesh& mesh, const std::vector<double>& values,
                         const std::function<Vec2(Subdomain, const Vec2&)>& exact_gradient) {
    const auto rule = quad::degree5_rule();
    double sum = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double area = mesh.triangle_area(t);
        const Vec2 gh = p1_gradient(mesh, values, t);
        for (int q = 0; q < 7; ++q) {
            const auto& b = rule.points[q];
            const Vec2 x = b[0] * mesh.vertices[tri[0]] + b[1] * mesh.vertices[tri[1]] + b[2] * mesh.vertices[tri[2]];
            sum += rule.weights[q] * area * (gh - exact_gradient(mesh.triangle_label[t], x)).squaredNorm();
        }
    }
    return std::sqrt(sum);
}

}  // namespace fracbiot
