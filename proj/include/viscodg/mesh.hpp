#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "viscodg/tensor.hpp"

namespace viscodg {

enum class EdgeTag { Interior, Dirichlet, Neumann };

struct EdgeInfo {
    std::array<int, 2> endpoints{};
    // Ascending triangle indices; incident[1] == -1 on the boundary.
    std::array<int, 2> incident{-1, -1};
    // Unit normal: from incident[0] to incident[1] inside, outward on the boundary.
    Vec2 normal{};
    double length = 0.0;
    EdgeTag tag = EdgeTag::Interior;

    [[nodiscard]] bool is_boundary() const { return incident[1] < 0; }
    [[nodiscard]] int num_incident() const { return is_boundary() ? 1 : 2; }
};

struct ElementGeometry {
    double area = 0.0;
    // Local edge m joins local vertices m and (m+1)%3.
    std::array<double, 3> edge_lengths{};
    std::array<Vec2, 3> outward_normals{};
};

/// Conforming triangulation with counterclockwise triangles and full edge
/// topology. Boundary edges lying on {x=0} or {y=0} are Dirichlet, all other
/// boundary edges Neumann.
class TriMesh {
public:
    TriMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
            int n_subdivisions = 0);

    [[nodiscard]] const std::vector<Vec2>& vertices() const { return vertices_; }
    [[nodiscard]] const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
    [[nodiscard]] const std::vector<EdgeInfo>& edges() const { return edges_; }
    [[nodiscard]] std::size_t num_triangles() const { return triangles_.size(); }
    [[nodiscard]] std::size_t num_vertices() const { return vertices_.size(); }

    /// Global edge index of local edge m of triangle t.
    [[nodiscard]] const std::array<int, 3>& element_edges(std::size_t t) const { return element_edges_.at(t); }

    /// Subdivision count for structured meshes, 0 for imported ones.
    [[nodiscard]] int n_subdivisions() const { return n_subdivisions_; }

    /// Maximum element diameter.
    [[nodiscard]] double h() const { return h_; }

    [[nodiscard]] ElementGeometry element_geometry(std::size_t t) const;
    [[nodiscard]] Vec2 centroid(std::size_t t) const;

private:
    void build_edges();

    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<EdgeInfo> edges_;
    std::vector<std::array<int, 3>> element_edges_;
    int n_subdivisions_ = 0;
    double h_ = 0.0;
};

/// n x n squares on the unit square, each cut along its lower-left to
/// upper-right diagonal.
TriMesh build_structured_mesh(int n);

/// ASCII format: "nv nt", nv lines "x y", nt lines "v0 v1 v2".
TriMesh read_ascii_mesh(std::istream& in);

}  // namespace viscodg
