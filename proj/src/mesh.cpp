/*
 * src/mesh.cpp
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

#include "fracbiot/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "fracbiot/errors.hpp"
#include "fracbiot/io.hpp"

namespace fracbiot {

std::string to_string(Subdomain s) {
    switch (s) {
        case Subdomain::Plus: return "plus";
        case Subdomain::Minus: return "minus";
        case Subdomain::Fracture: return "fracture";
    }
    return "unknown";
}

std::string to_string(BoundarySegment s) {
    static const char* names[] = {"plus_outer",  "plus_top",     "plus_bottom",  "minus_outer",
                                  "minus_top",   "minus_bottom", "fracture_top", "fracture_bottom"};
    return names[static_cast<int>(s)];
}

Subdomain owner(BoundarySegment s) {
    switch (s) {
        case BoundarySegment::PlusOuter:
        case BoundarySegment::PlusTop:
        case BoundarySegment::PlusBottom: return Subdomain::Plus;
        case BoundarySegment::MinusOuter:
        case BoundarySegment::MinusTop:
        case BoundarySegment::MinusBottom: return Subdomain::Minus;
        default: return Subdomain::Fracture;
    }
}

PiecewiseLinear PiecewiseLinear::constant(double value) { return {{0.0, 1.0}, {value, value}}; }

PiecewiseLinear PiecewiseLinear::affine(double at0, double at1) { return {{0.0, 1.0}, {at0, at1}}; }

double PiecewiseLinear::operator()(double y) const {
    if (breakpoints.empty() || breakpoints.size() != values.size()) {
        throw ValidationError("geometry", "piecewise-linear function needs matching breakpoints and values");
    }
    if (breakpoints.size() == 1 || y <= breakpoints.front()) return values.front();
    if (y >= breakpoints.back()) return values.back();
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - breakpoints.begin());
    const double y0 = breakpoints[i - 1], y1 = breakpoints[i];
    const double w = (y - y0) / (y1 - y0);
    return (1.0 - w) * values[i - 1] + w * values[i];
}

bool Geometry::has_flow_dirichlet(Subdomain side) const {
    for (int i = 0; i < kBoundarySegmentCount; ++i) {
        const auto seg = static_cast<BoundarySegment>(i);
        if (owner(seg) == side && flow_tags[i] == FlowTag::Dirichlet) return true;
    }
    return false;
}

void Geometry::validate(int samples) const {
    for (const auto* f : {&aperture_plus, &aperture_minus}) {
        if (f->breakpoints.empty() || f->breakpoints.size() != f->values.size()) {
            throw ValidationError("geometry", "aperture needs matching breakpoints and values");
        }
        if (!std::is_sorted(f->breakpoints.begin(), f->breakpoints.end()) ||
            std::adjacent_find(f->breakpoints.begin(), f->breakpoints.end()) != f->breakpoints.end()) {
            throw ValidationError("geometry", "aperture breakpoints must be strictly increasing");
        }
    }
    for (int i = 0; i < samples; ++i) {
        const double y = static_cast<double>(i) / (samples - 1);
        const double ap = aperture_plus(y), am = aperture_minus(y);
        if (ap < 0.0 || am < 0.0) {
            throw ValidationError("geometry", "aperture a_+ or a_- is negative at y = " + format_double(y));
        }
        if (ap + am <= 0.0) {
            throw ValidationError("geometry", "degenerate aperture a = a_+ + a_- <= 0 at y = " + format_double(y));
        }
    }
}

double FracturedMesh::triangle_area(int t) const {
    const auto& tri = triangles[t];
    const Vec2 e1 = vertices[tri[1]] - vertices[tri[0]];
    const Vec2 e2 = vertices[tri[2]] - vertices[tri[0]];
    return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

Vec2 FracturedMesh::centroid(int t) const {
    const auto& tri = triangles[t];
    return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
}

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 e1 = b - a, e2 = c - a;
    return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

// Adds the two triangles of a quadrilateral cell, lower triangle first. With
// `mirrored` the diagonal runs from (i+1, j) to (i, j+1), otherwise from
// (i, j) to (i+1, j+1).
void add_cell(FracturedMesh& m, Subdomain label, int v00, int v10, int v01, int v11, bool mirrored) {
    std::array<std::array<int, 3>, 2> tris;
    if (mirrored) {
        tris = {{{v00, v10, v01}, {v10, v11, v01}}};
    } else {
        tris = {{{v00, v10, v11}, {v00, v11, v01}}};
    }
    for (auto tri : tris) {
        if (signed_area(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]) < 0.0) std::swap(tri[1], tri[2]);
        m.triangles.push_back(tri);
        m.triangle_label.push_back(label);
    }
}

}  // namespace

FracturedMesh build_mesh(const Geometry& geometry, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ValidationError("mesh", "target edge length h must be positive, got " + format_double(h));
    }
    geometry.validate();

    FracturedMesh m;
    m.geometry = geometry;
    m.h = h;
    const int n = std::max(1, static_cast<int>(std::ceil(1.0 / h - 1e-9)));
    m.cells = n;

    m.gamma_y.resize(n + 1);
    double a_max = 0.0;
    for (int j = 0; j <= n; ++j) {
        m.gamma_y[j] = static_cast<double>(j) / n;
        a_max = std::max(a_max, geometry.aperture(m.gamma_y[j]));
    }
    const int half = std::max(1, static_cast<int>(std::lround(a_max / (2.0 * h))));
    const int layers = 2 * half;
    m.layers = layers;

    auto add_vertex = [&](const Vec2& x, Subdomain s, int column, int layer) {
        m.vertices.push_back(x);
        m.vertex_subdomain.push_back(s);
        m.vertex_column.push_back(column);
        m.vertex_layer.push_back(layer);
        return static_cast<int>(m.vertices.size()) - 1;
    };

    // Bulk plus: x in [0,1], vertex (i, j) -> base + j (n+1) + i.
    const int plus0 = 0;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) add_vertex(Vec2(double(i) / n, double(j) / n), Subdomain::Plus, -1, -1);
    const int minus0 = m.vertex_count();
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) add_vertex(Vec2(-1.0 + double(i) / n, double(j) / n), Subdomain::Minus, -1, -1);
    const int frac0 = m.vertex_count();
    m.columns.resize(n + 1);
    m.column_lengths.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double y = m.gamma_y[j];
        const double am = geometry.aperture_minus(y), ap = geometry.aperture_plus(y);
        std::vector<double> s(layers + 1);
        if (am > 0.0 && ap > 0.0) {
            for (int k = 0; k <= half; ++k) s[k] = -am * (1.0 - double(k) / half);
            for (int k = half; k <= layers; ++k) s[k] = ap * double(k - half) / half;
        } else {
            for (int k = 0; k <= layers; ++k) s[k] = -am + (am + ap) * double(k) / layers;
        }
        s.front() = -am;
        s.back() = ap;
        for (int k = 0; k <= layers; ++k) m.columns[j].push_back(add_vertex(Vec2(s[k], y), Subdomain::Fracture, j, k));
        for (int k = 0; k < layers; ++k) m.column_lengths[j].push_back(s[k + 1] - s[k]);
    }
    auto pv = [&](int i, int j) { return plus0 + j * (n + 1) + i; };
    auto mv = [&](int i, int j) { return minus0 + j * (n + 1) + i; };
    auto fv = [&](int k, int j) { return frac0 + j * (layers + 1) + k; };

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            add_cell(m, Subdomain::Plus, pv(i, j), pv(i + 1, j), pv(i, j + 1), pv(i + 1, j + 1), false);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            add_cell(m, Subdomain::Minus, mv(i, j), mv(i + 1, j), mv(i, j + 1), mv(i + 1, j + 1), true);
    const int frac_tri0 = m.triangle_count();
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < layers; ++k)
            add_cell(m, Subdomain::Fracture, fv(k, j), fv(k + 1, j), fv(k, j + 1), fv(k + 1, j + 1), k < half);

    // Column segment k of node j borders the lower triangle of cell (k, j)
    // or, on the top row, the upper triangle of cell (k, j - 1).
    m.column_segment_triangle.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        for (int k = 0; k < layers; ++k) {
            const int cell = (j < n ? j : j - 1) * layers + k;
            m.column_segment_triangle[j].push_back(frac_tri0 + 2 * cell + (j < n ? 0 : 1));
        }
    }

    auto add_facet = [&](int a, int b, BoundarySegment seg) {
        m.boundary_facets.push_back({a, b, seg, geometry.tag(seg)});
    };
    for (int j = 0; j < n; ++j) add_facet(pv(n, j), pv(n, j + 1), BoundarySegment::PlusOuter);
    for (int i = 0; i < n; ++i) add_facet(pv(i, n), pv(i + 1, n), BoundarySegment::PlusTop);
    for (int i = 0; i < n; ++i) add_facet(pv(i, 0), pv(i + 1, 0), BoundarySegment::PlusBottom);
    for (int j = 0; j < n; ++j) add_facet(mv(0, j), mv(0, j + 1), BoundarySegment::MinusOuter);
    for (int i = 0; i < n; ++i) add_facet(mv(i, n), mv(i + 1, n), BoundarySegment::MinusTop);
    for (int i = 0; i < n; ++i) add_facet(mv(i, 0), mv(i + 1, 0), BoundarySegment::MinusBottom);
    for (int k = 0; k < layers; ++k) add_facet(fv(k, n), fv(k + 1, n), BoundarySegment::FractureTop);
    for (int k = 0; k < layers; ++k) add_facet(fv(k, 0), fv(k + 1, 0), BoundarySegment::FractureBottom);

    for (int j = 0; j <= n; ++j) {
        m.gamma_plus.push_back(pv(0, j));
        m.gamma_minus.push_back(mv(n, j));
        m.pairing_plus.emplace_back(m.columns[j].back(), pv(0, j));
        m.pairing_minus.emplace_back(m.columns[j].front(), mv(n, j));
    }
    for (int j = 0; j < n; ++j) {
        m.gamma_plus_facets.push_back({pv(0, j), pv(0, j + 1)});
        m.gamma_minus_facets.push_back({mv(n, j), mv(n, j + 1)});
    }
    m.gamma_boundary_tags = {geometry.tag(BoundarySegment::FractureBottom), geometry.tag(BoundarySegment::FractureTop)};
    return m;
}

namespace {

std::optional<Location> barycentric_in(const FracturedMesh& mesh, int t, const Vec2& p) {
    const auto& tri = mesh.triangles[t];
    const Vec2& a = mesh.vertices[tri[0]];
    const Vec2& b = mesh.vertices[tri[1]];
    const Vec2& c = mesh.vertices[tri[2]];
    const double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    const double l1 = ((p.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (p.y() - a.y())) / det;
    const double l2 = ((b.x() - a.x()) * (p.y() - a.y()) - (p.x() - a.x()) * (b.y() - a.y())) / det;
    const double l0 = 1.0 - l1 - l2;
    constexpr double tol = 1e-12;
    if (l0 < -tol || l1 < -tol || l2 < -tol) return std::nullopt;
    Location loc;
    loc.triangle = t;
    loc.barycentric = {l0, l1, l2};
    return loc;
}

}  // namespace

std::optional<Location> locate(const FracturedMesh& mesh, const Vec2& point, Subdomain chart) {
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        if (mesh.triangle_label[t] != chart) continue;
        if (auto loc = barycentric_in(mesh, t, point)) return loc;
    }
    return std::nullopt;
}

std::optional<Location> locate(const FracturedMesh& mesh, const Vec2& point) {
    for (Subdomain s : {Subdomain::Plus, Subdomain::Minus, Subdomain::Fracture}) {
        if (auto loc = locate(mesh, point, s)) return loc;
    }
    return std::nullopt;
}

void validate_mesh(const FracturedMesh& mesh) {
    auto fail = [](const std::string& what) { throw ValidationError("mesh", "invalid mesh: " + what); };
    const int nv = mesh.vertex_count();
    if (static_cast<int>(mesh.vertex_subdomain.size()) != nv) fail("vertex label count");
    if (mesh.triangle_label.size() != mesh.triangles.size()) fail("triangle label count");

    std::map<std::pair<int, int>, int> edge_use;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int v : tri) {
            if (v < 0 || v >= nv) fail("triangle vertex out of range");
            if (mesh.vertex_subdomain[v] != mesh.triangle_label[t]) fail("triangle uses a vertex of another chart");
        }
        if (!(mesh.triangle_area(t) > 0.0)) fail("non-positive triangle area at triangle " + std::to_string(t));
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e], b = tri[(e + 1) % 3];
            ++edge_use[{std::min(a, b), std::max(a, b)}];
        }
    }
    int boundary_edges = 0;
    for (const auto& [edge, count] : edge_use) {
        if (count > 2) fail("edge shared by more than two triangles");
        if (count == 1) ++boundary_edges;
    }
    auto require_boundary_edge = [&](int a, int b) {
        auto it = edge_use.find({std::min(a, b), std::max(a, b)});
        if (it == edge_use.end() || it->second != 1) fail("tagged facet is not a boundary edge");
    };
    for (const auto& f : mesh.boundary_facets) require_boundary_edge(f.a, f.b);
    for (const auto& f : mesh.gamma_plus_facets) require_boundary_edge(f[0], f[1]);
    for (const auto& f : mesh.gamma_minus_facets) require_boundary_edge(f[0], f[1]);
    const int ng = mesh.gamma_count();
    for (int j = 0; j + 1 < ng; ++j) {
        require_boundary_edge(mesh.columns[j].front(), mesh.columns[j + 1].front());
        require_boundary_edge(mesh.columns[j].back(), mesh.columns[j + 1].back());
    }
    const int expected = static_cast<int>(mesh.boundary_facets.size() + mesh.gamma_plus_facets.size() +
                                          mesh.gamma_minus_facets.size()) + 2 * (ng - 1);
    if (boundary_edges != expected) fail("untagged boundary edge (non-conforming mesh)");

    if (static_cast<int>(mesh.columns.size()) != ng || static_cast<int>(mesh.pairing_plus.size()) != ng ||
        static_cast<int>(mesh.pairing_minus.size()) != ng) {
        fail("column or pairing count differs from gamma node count");
    }
    std::vector<int> seen(nv, 0);
    for (int j = 0; j < ng; ++j) {
        const double y = mesh.gamma_y[j];
        const auto& col = mesh.columns[j];
        if (col.size() < 2) fail("empty normal column");
        double total = 0.0;
        for (std::size_t k = 0; k < col.size(); ++k) {
            if (++seen[col[k]] > 1) fail("fracture vertex in two columns");
            if (std::abs(mesh.vertices[col[k]].y() - y) > 1e-14) fail("column vertex off its normal line");
            if (k > 0 && !(mesh.vertices[col[k]].x() > mesh.vertices[col[k - 1]].x())) fail("column not monotone");
        }
        for (double l : mesh.column_lengths[j]) total += l;
        const double am = mesh.geometry.aperture_minus(y), ap = mesh.geometry.aperture_plus(y);
        if (std::abs(mesh.vertices[col.front()].x() + am) > 1e-12 ||
            std::abs(mesh.vertices[col.back()].x() - ap) > 1e-12) {
            fail("column does not span (-a_-, a_+)");
        }
        if (std::abs(total - (am + ap)) > 1e-12) fail("column lengths do not sum to the aperture");
        const auto [fp, bp] = mesh.pairing_plus[j];
        const auto [fm, bm] = mesh.pairing_minus[j];
        if (fp != col.back() || fm != col.front()) fail("pairing does not use the column ends");
        if (bp != mesh.gamma_plus[j] || bm != mesh.gamma_minus[j]) fail("pairing does not use the gamma vertices");
        if (std::abs(mesh.vertices[bp].y() - y) > 1e-14 || std::abs(mesh.vertices[bm].y() - y) > 1e-14 ||
            std::abs(mesh.vertices[bp].x()) > 1e-14 || std::abs(mesh.vertices[bm].x()) > 1e-14) {
            fail("paired gamma vertex not on gamma at the same tangential coordinate");
        }
    }
}

void dump_mesh(const FracturedMesh& mesh, std::ostream& os) {
    os << "# fracbiot mesh\n";
    os << "h " << format_double(mesh.h) << " cells " << mesh.cells << " layers " << mesh.layers << "\n";
    os << "vertices " << mesh.vertex_count() << "\n";
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        os << v << ' ' << to_string(mesh.vertex_subdomain[v]) << ' ' << format_double(mesh.vertices[v].x()) << ' '
           << format_double(mesh.vertices[v].y()) << "\n";
    }
    os << "triangles " << mesh.triangle_count() << "\n";
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        os << t << ' ' << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << to_string(mesh.triangle_label[t]) << "\n";
    }
    os << "facets " << mesh.boundary_facets.size() + mesh.gamma_plus_facets.size() + mesh.gamma_minus_facets.size()
       << "\n";
    for (const auto& f : mesh.boundary_facets) {
        os << f.a << ' ' << f.b << ' ' << to_string(f.segment) << ' '
           << (f.tag == FlowTag::Dirichlet ? "dirichlet_flow" : "neumann_flow") << "\n";
    }
    for (const auto& f : mesh.gamma_plus_facets) os << f[0] << ' ' << f[1] << " gamma gamma_plus_side\n";
    for (const auto& f : mesh.gamma_minus_facets) os << f[0] << ' ' << f[1] << " gamma gamma_minus_side\n";
    os << "gamma " << mesh.gamma_count() << "\n";
    for (int j = 0; j < mesh.gamma_count(); ++j) {
        os << j << ' ' << format_double(mesh.gamma_y[j]) << ' ' << mesh.gamma_plus[j] << ' ' << mesh.gamma_minus[j]
           << ' ' << mesh.pairing_minus[j].first << ' ' << mesh.pairing_plus[j].first << "\n";
    }
    auto tag = [](FlowTag t) { return t == FlowTag::Dirichlet ? "dirichlet" : "neumann"; };
    os << "gamma_boundary y0 " << tag(mesh.gamma_boundary_tags[0]) << " y1 " << tag(mesh.gamma_boundary_tags[1])
       << "\n";
    os << "columns " << mesh.gamma_count() << "\n";
    for (int j = 0; j < mesh.gamma_count(); ++j) {
        os << j;
        for (int v : mesh.columns[j]) os << ' ' << v;
        os << "\n";
    }
}

}  // namespace fracbiot
