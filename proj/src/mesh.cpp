#include "fracflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace fracflow {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

namespace {

// Builds edge list and per-triangle (edge, sign) topology for a triangle soup.
// Local edge k is opposite vertex k, traversed v_{k+1} -> v_{k+2}; the sign is
// +1 when that matches the global lo -> hi orientation.
void build_edge_topology(Mesh& mesh) {
  std::map<std::pair<int, int>, int> edge_index;
  std::vector<int> incidence;
  mesh.edges.clear();
  mesh.triangle_edges.assign(mesh.triangles.size(), {0, 0, 0});
  mesh.triangle_edge_signs.assign(mesh.triangles.size(), {0, 0, 0});

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[(k + 1) % 3];
      int b = tri[(k + 2) % 3];
      int lo = std::min(a, b), hi = std::max(a, b);
      auto [it, inserted] = edge_index.try_emplace({lo, hi}, mesh.num_edges());
      if (inserted) {
        mesh.edges.push_back({lo, hi});
        incidence.push_back(0);
      }
      int e = it->second;
      ++incidence[e];
      mesh.triangle_edges[t][k] = e;
      mesh.triangle_edge_signs[t][k] = (a == lo) ? 1 : -1;
    }
  }

  mesh.boundary_flags.resize(mesh.edges.size());
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    if (incidence[e] < 1 || incidence[e] > 2)
      throw std::runtime_error("mesh: edge incident to more than 2 triangles");
    mesh.boundary_flags[e] = (incidence[e] == 1);
  }
}

}  // namespace

Mesh build_uniform(int n) {
  if (n < 1) throw std::invalid_argument("build_uniform: n must be >= 1");
  Mesh mesh;
  mesh.subdivisions = n;
  mesh.vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  mesh.triangles.reserve(static_cast<std::size_t>(2) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int v00 = vid(i, j), v10 = vid(i + 1, j);
      int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});  // lower-right of the diagonal
      mesh.triangles.push_back({v00, v11, v01});  // upper-left
    }
  }
  build_edge_topology(mesh);
  return mesh;
}

Mesh red_refine(const Mesh& mesh) {
  Mesh fine;
  fine.subdivisions = 2 * mesh.subdivisions;
  fine.vertices = mesh.vertices;

  std::map<std::pair<double, double>, int> vertex_at;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    vertex_at[{mesh.vertices[v].x, mesh.vertices[v].y}] = v;

  auto midpoint = [&](int a, int b) {
    Point m{0.5 * (mesh.vertices[a].x + mesh.vertices[b].x),
            0.5 * (mesh.vertices[a].y + mesh.vertices[b].y)};
    auto [it, inserted] = vertex_at.try_emplace({m.x, m.y}, fine.num_vertices());
    if (inserted) fine.vertices.push_back(m);
    return it->second;
  };

  fine.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    int m0 = midpoint(tri[1], tri[2]);
    int m1 = midpoint(tri[2], tri[0]);
    int m2 = midpoint(tri[0], tri[1]);
    fine.triangles.push_back({tri[0], m2, m1});
    fine.triangles.push_back({m2, tri[1], m0});
    fine.triangles.push_back({m1, m0, tri[2]});
    fine.triangles.push_back({m0, m1, m2});
  }
  build_edge_topology(fine);
  return fine;
}

Mesh level_mesh(int level) {
  if (level < 0) throw std::invalid_argument("level_mesh: level must be >= 0");
  return build_uniform(level_to_subdivisions(level));
}

void dump_mesh(const Mesh& mesh, std::ostream& out) {
  out << "mesh n=" << mesh.subdivisions << " V=" << mesh.num_vertices()
      << " E=" << mesh.num_edges() << " T=" << mesh.num_triangles() << "\n";
  for (int v = 0; v < mesh.num_vertices(); ++v)
    out << "v " << v << " " << mesh.vertices[v].x << " " << mesh.vertices[v].y << "\n";
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    out << "t " << t << " " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
  }
  for (int e = 0; e < mesh.num_edges(); ++e)
    out << "e " << e << " " << mesh.edges[e][0] << " " << mesh.edges[e][1]
        << (mesh.boundary_flags[e] ? " boundary" : "") << "\n";
}

int locate_triangle(const Mesh& mesh, double x, double y) {
  const int n = mesh.subdivisions;
  int i = std::clamp(static_cast<int>(std::floor(x * n)), 0, n - 1);
  int j = std::clamp(static_cast<int>(std::floor(y * n)), 0, n - 1);
  double fx = x * n - i;
  double fy = y * n - j;
  int cell = j * n + i;
  return 2 * cell + (fx >= fy ? 0 : 1);
}

}  // namespace fracflow
