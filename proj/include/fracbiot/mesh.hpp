/*
 * include/fracbiot/mesh.hpp
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

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fracbiot {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Subdomain label of a vertex or triangle. Each label owns its own chart:
/// bulk plus covers (0,1)x(0,1), bulk minus (-1,0)x(0,1), and the fracture
/// chart uses (s, y) with s in (-a_-(y), a_+(y)) and normal N = e_1.
enum class Subdomain : int { Plus = 0, Minus = 1, Fracture = 2 };

std::string to_string(Subdomain s);

enum class FlowTag { Dirichlet, Neumann };

/// The eight straight pieces of the external boundary.
enum class BoundarySegment : int {
    PlusOuter = 0,
    PlusTop,
    PlusBottom,
    MinusOuter,
    MinusTop,
    MinusBottom,
    FractureTop,
    FractureBottom,
};

inline constexpr int kBoundarySegmentCount = 8;

std::string to_string(BoundarySegment s);
Subdomain owner(BoundarySegment s);

/// Continuous piecewise-linear function of the tangential coordinate y in [0,1].
struct PiecewiseLinear {
    std::vector<double> breakpoints;
    std::vector<double> values;

    static PiecewiseLinear constant(double value);
    static PiecewiseLinear affine(double at0, double at1);

    double operator()(double y) const;
};

struct Geometry {
    PiecewiseLinear aperture_plus = PiecewiseLinear::constant(0.5);
    PiecewiseLinear aperture_minus = PiecewiseLinear::constant(0.5);
    /// Flow tag per external segment. Displacement is clamped on all of them.
    std::array<FlowTag, kBoundarySegmentCount> flow_tags{
        FlowTag::Dirichlet, FlowTag::Neumann, FlowTag::Neumann, FlowTag::Dirichlet,
        FlowTag::Neumann,   FlowTag::Neumann, FlowTag::Neumann, FlowTag::Neumann};

    FlowTag tag(BoundarySegment s) const { return flow_tags[static_cast<int>(s)]; }
    bool has_flow_dirichlet(Subdomain side) const;
    double aperture(double y) const { return aperture_plus(y) + aperture_minus(y); }

    /// Throws ValidationError if the total aperture is not positive at the
    /// sample points or an aperture is negative.
    void validate(int samples = 257) const;
};

/// External boundary edge.
struct Facet {
    int a = -1;
    int b = -1;
    BoundarySegment segment = BoundarySegment::PlusOuter;
    FlowTag tag = FlowTag::Neumann;
};

struct FracturedMesh {
    Geometry geometry;
    double h = 0.0;
    int cells = 0;   ///< cells per unit length in each bulk direction and along gamma
    int layers = 0;  ///< normal layers of the fracture tensor grid (even)

    std::vector<Vec2> vertices;
    std::vector<Subdomain> vertex_subdomain;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Subdomain> triangle_label;

    std::vector<Facet> boundary_facets;
    std::vector<std::array<int, 2>> gamma_plus_facets;   ///< bulk plus edges on gamma
    std::vector<std::array<int, 2>> gamma_minus_facets;  ///< bulk minus edges on gamma

    std::vector<double> gamma_y;     ///< tangential coordinate of gamma node j
    std::vector<int> gamma_plus;     ///< bulk plus vertex on gamma at node j
    std::vector<int> gamma_minus;    ///< bulk minus vertex on gamma at node j

    /// columns[j]: fracture vertex ids on the normal line through gamma node j,
    /// ordered by increasing s, from s = -a_-(y_j) to s = a_+(y_j).
    std::vector<std::vector<int>> columns;
    std::vector<std::vector<double>> column_lengths;
    /// Fracture triangle adjacent to each column segment (used to sample
    /// element-wise data along the column).
    std::vector<std::vector<int>> column_segment_triangle;

    /// (fracture vertex on gamma_+^1, bulk plus vertex on gamma) per gamma node.
    std::vector<std::pair<int, int>> pairing_plus;
    /// (fracture vertex on gamma_-^1, bulk minus vertex on gamma) per gamma node.
    std::vector<std::pair<int, int>> pairing_minus;

    /// Flow tag of the gamma endpoints y = 0 and y = 1 (Dirichlet iff the
    /// adjacent fracture boundary row is flow-Dirichlet).
    std::array<FlowTag, 2> gamma_boundary_tags{FlowTag::Neumann, FlowTag::Neumann};

    std::vector<int> vertex_column;  ///< gamma node of a fracture vertex, else -1
    std::vector<int> vertex_layer;   ///< position inside its column, else -1

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
    int gamma_count() const { return static_cast<int>(gamma_y.size()); }

    double triangle_area(int t) const;
    Vec2 centroid(int t) const;
};

/// Structured conforming triangulation of the transformed geometry.
FracturedMesh build_mesh(const Geometry& geometry, double h);

struct Location {
    int triangle = -1;
    std::array<double, 3> barycentric{0.0, 0.0, 0.0};
};

/// Searches bulk plus, then bulk minus, then the fracture chart.
std::optional<Location> locate(const FracturedMesh& mesh, const Vec2& point);
/// Searches only the chart of the given subdomain.
std::optional<Location> locate(const FracturedMesh& mesh, const Vec2& point, Subdomain chart);

/// Checks every structural invariant and throws ValidationError on failure.
void validate_mesh(const FracturedMesh& mesh);

/// Plain-text dump: vertex table, triangle table with labels, tag tables.
void dump_mesh(const FracturedMesh& mesh, std::ostream& os);

}  // namespace fracbiot
