#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fracflow {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Uniform triangulation of the unit square. All diagonals run parallel to
/// the segment (0,0)-(1,1); triangles are counter-clockwise. Global edges
/// are oriented from the lower to the higher vertex index, and each
/// triangle stores a sign reconciling its local edge direction with the
/// global one.
struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;           // vertex indices, CCW
  std::vector<std::array<int, 2>> edges;               // lo < hi vertex index
  std::vector<std::array<int, 3>> triangle_edges;      // edge index per local edge
  std::vector<std::array<int, 3>> triangle_edge_signs; // +1 / -1
  std::vector<bool> boundary_flags;                    // per edge
  int subdivisions = 0;                                // cells per side (n)

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }

  std::array<Point, 3> triangle_points(int t) const {
    const auto& tri = triangles[t];
    return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
  }
};

double signed_area(const Point& a, const Point& b, const Point& c);

/// n x n grid of cells, each split along the diagonal parallel to (0,0)-(1,1).
Mesh build_uniform(int n);

/// Splits every triangle into 4 congruent children via edge midpoints.
Mesh red_refine(const Mesh& mesh);

/// Refinement level: level L maps to a 2^(L+1) x 2^(L+1) grid.
Mesh level_mesh(int level);

inline int level_to_subdivisions(int level) { return 1 << (level + 1); }

/// Plain-text dump (vertices, triangles, edges), one record per line.
void dump_mesh(const Mesh& mesh, std::ostream& out);

/// Index of the triangle containing (x, y); ties on cell/diagonal
/// boundaries resolve to the lower-right triangle. Valid for meshes from
/// build_uniform / level_mesh.
int locate_triangle(const Mesh& mesh, double x, double y);

}  // namespace fracflow
