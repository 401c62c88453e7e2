#include "viscodg/mesh.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace viscodg {

namespace {

constexpr double kGeomTol = 1e-12;

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c)
{
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
}

// Outward unit normal of the directed edge a->b of a counterclockwise triangle.
Vec2 outward_normal(const Vec2& a, const Vec2& b)
{
    const Vec2 d = b - a;
    const double len = norm(d);
    return {d[1] / len, -d[0] / len};
}

EdgeTag classify_boundary(const Vec2& a, const Vec2& b)
{
    const bool on_x0 = std::abs(a[0]) < kGeomTol && std::abs(b[0]) < kGeomTol;
    const bool on_y0 = std::abs(a[1]) < kGeomTol && std::abs(b[1]) < kGeomTol;
    return (on_x0 || on_y0) ? EdgeTag::Dirichlet : EdgeTag::Neumann;
}

}  // namespace

TriMesh::TriMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                 int n_subdivisions)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), n_subdivisions_(n_subdivisions)
{
    if (triangles_.empty()) {
        throw std::invalid_argument("TriMesh: no triangles");
    }
    const int nv = static_cast<int>(vertices_.size());
    for (auto& tri : triangles_) {
        for (int v : tri) {
            if (v < 0 || v >= nv) {
                throw std::out_of_range("TriMesh: vertex index " + std::to_string(v) + " out of range");
            }
        }
        const double area = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
        if (std::abs(area) < kGeomTol * kGeomTol) {
            throw std::invalid_argument("TriMesh: degenerate triangle");
        }
        if (area < 0.0) {
            std::swap(tri[1], tri[2]);
        }
    }
    for (const auto& tri : triangles_) {
        for (int m = 0; m < 3; ++m) {
            h_ = std::max(h_, norm(vertices_[tri[m]] - vertices_[tri[(m + 1) % 3]]));
        }
    }
    build_edges();
}

void TriMesh::build_edges()
{
    // Keyed by sorted endpoint pair so that edge numbering is deterministic.
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> owners;
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tri = triangles_[t];
        for (int m = 0; m < 3; ++m) {
            const int a = tri[m];
            const int b = tri[(m + 1) % 3];
            owners[{std::min(a, b), std::max(a, b)}].emplace_back(static_cast<int>(t), m);
        }
    }

    element_edges_.assign(triangles_.size(), {-1, -1, -1});
    edges_.reserve(owners.size());
    for (const auto& [key, list] : owners) {
        if (list.size() > 2) {
            throw std::invalid_argument("TriMesh: non-manifold edge");
        }
        const int index = static_cast<int>(edges_.size());
        EdgeInfo edge;
        edge.endpoints = {key.first, key.second};
        edge.length = norm(vertices_[key.second] - vertices_[key.first]);

        auto sorted = list;
        std::sort(sorted.begin(), sorted.end());
        const auto [t0, m0] = sorted.front();
        const auto& tri = triangles_[t0];
        edge.normal = outward_normal(vertices_[tri[m0]], vertices_[tri[(m0 + 1) % 3]]);
        edge.incident[0] = t0;
        if (sorted.size() == 2) {
            edge.incident[1] = sorted[1].first;
            edge.tag = EdgeTag::Interior;
        } else {
            edge.tag = classify_boundary(vertices_[key.first], vertices_[key.second]);
        }
        for (const auto& [t, m] : sorted) {
            element_edges_[t][m] = index;
        }
        edges_.push_back(edge);
    }
}

ElementGeometry TriMesh::element_geometry(std::size_t t) const
{
    if (t >= triangles_.size()) {
        throw std::out_of_range("TriMesh::element_geometry: triangle index out of range");
    }
    const auto& tri = triangles_[t];
    ElementGeometry geo;
    geo.area = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    for (int m = 0; m < 3; ++m) {
        const Vec2& a = vertices_[tri[m]];
        const Vec2& b = vertices_[tri[(m + 1) % 3]];
        geo.edge_lengths[m] = norm(b - a);
        geo.outward_normals[m] = outward_normal(a, b);
    }
    return geo;
}

Vec2 TriMesh::centroid(std::size_t t) const
{
    const auto& tri = triangles_.at(t);
    const Vec2 s = vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]];
    return (1.0 / 3.0) * s;
}

TriMesh build_structured_mesh(int n)
{
    if (n < 1) {
        throw std::invalid_argument("build_structured_mesh: n must be positive");
    }
    std::vector<Vec2> vertices;
    vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
        }
    }
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    }
    return TriMesh(std::move(vertices), std::move(triangles), n);
}

TriMesh read_ascii_mesh(std::istream& in)
{
    long nv = 0;
    long nt = 0;
    if (!(in >> nv >> nt) || nv < 3 || nt < 1) {
        throw std::runtime_error("read_ascii_mesh: bad header");
    }
    std::vector<Vec2> vertices(static_cast<std::size_t>(nv));
    for (auto& v : vertices) {
        if (!(in >> v[0] >> v[1])) {
            throw std::runtime_error("read_ascii_mesh: truncated vertex block");
        }
    }
    std::vector<std::array<int, 3>> triangles(static_cast<std::size_t>(nt));
    for (auto& t : triangles) {
        if (!(in >> t[0] >> t[1] >> t[2])) {
            throw std::runtime_error("read_ascii_mesh: truncated triangle block");
        }
    }
    return TriMesh(std::move(vertices), std::move(triangles));
}

}  // namespace viscodg
