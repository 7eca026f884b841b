#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "fracflow/mesh.hpp"

using namespace fracflow;

TEST_CASE("signed_area of the reference triangle") {
  CHECK(signed_area({0, 0}, {1, 0}, {0, 1}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(signed_area({0, 0}, {0, 1}, {1, 0}) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("entity counts follow the closed-form formulas") {
  for (int n = 1; n <= 8; ++n) {
    Mesh m = build_uniform(n);
    CHECK(m.subdivisions == n);
    CHECK(m.num_vertices() == (n + 1) * (n + 1));
    CHECK(m.num_triangles() == 2 * n * n);
    CHECK(m.num_edges() == 2 * n * (n + 1) + n * n);
    int boundary = 0;
    for (bool b : m.boundary_flags) boundary += b;
    CHECK(boundary == 4 * n);
    // Euler characteristic of a disk: V - E + T = 1.
    CHECK(m.num_vertices() - m.num_edges() + m.num_triangles() == 1);
  }
}

TEST_CASE("triangles are CCW and tile the square") {
  Mesh m = build_uniform(5);
  double total = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    auto p = m.triangle_points(t);
    double a = signed_area(p[0], p[1], p[2]);
    CHECK(a > 0.0);
    total += a;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("edge bookkeeping is consistent") {
  Mesh m = build_uniform(4);
  std::vector<int> adjacent(m.num_edges(), 0);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];  // edge opposite vertex k
      int e = m.triangle_edges[t][k];
      CHECK(m.edges[e][0] < m.edges[e][1]);
      CHECK(std::set<int>{a, b} == std::set<int>{m.edges[e][0], m.edges[e][1]});
      // sign +1 iff the local direction a->b agrees with the global lo->hi one
      int expect = (a < b) ? 1 : -1;
      CHECK(m.triangle_edge_signs[t][k] == expect);
      ++adjacent[e];
    }
  }
  for (int e = 0; e < m.num_edges(); ++e)
    CHECK(adjacent[e] == (m.boundary_flags[e] ? 1 : 2));
}

TEST_CASE("red refinement quadruples triangles, children stay inside parents") {
  Mesh coarse = build_uniform(3);
  Mesh fine = red_refine(coarse);
  CHECK(fine.subdivisions == 6);
  CHECK(fine.num_triangles() == 4 * coarse.num_triangles());
  CHECK(fine.num_vertices() == 7 * 7);
  double total = 0.0;
  for (int t = 0; t < fine.num_triangles(); ++t) {
    auto p = fine.triangle_points(t);
    total += signed_area(p[0], p[1], p[2]);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));

  // children of parent t sit at 4t..4t+3
  for (int t = 0; t < coarse.num_triangles(); ++t) {
    auto P = coarse.triangle_points(t);
    double area = signed_area(P[0], P[1], P[2]);
    for (int c = 4 * t; c < 4 * t + 4; ++c) {
      auto q = fine.triangle_points(c);
      for (const auto& v : q) {
        // barycentric coordinates w.r.t. the parent must lie in [0,1]
        double l0 = signed_area(v, P[1], P[2]) / area;
        double l1 = signed_area(P[0], v, P[2]) / area;
        double l2 = signed_area(P[0], P[1], v) / area;
        CHECK(l0 >= -1e-12);
        CHECK(l1 >= -1e-12);
        CHECK(l2 >= -1e-12);
        CHECK(l0 + l1 + l2 == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("level_mesh resolution") {
  CHECK(level_to_subdivisions(0) == 2);
  CHECK(level_to_subdivisions(6) == 128);
  Mesh m = level_mesh(2);
  CHECK(m.subdivisions == 8);
}

TEST_CASE("locate_triangle returns a containing triangle") {
  Mesh m = build_uniform(7);
  for (int t = 0; t < m.num_triangles(); ++t) {
    auto p = m.triangle_points(t);
    double cx = (p[0].x + p[1].x + p[2].x) / 3.0;
    double cy = (p[0].y + p[1].y + p[2].y) / 3.0;
    CHECK(locate_triangle(m, cx, cy) == t);
  }
  // pseudo-random interior points
  unsigned s = 12345;
  auto rnd = [&s]() {
    s = s * 1664525u + 1013904223u;
    return (s >> 8) / double(1 << 24);
  };
  for (int i = 0; i < 200; ++i) {
    double x = rnd(), y = rnd();
    int t = locate_triangle(m, x, y);
    REQUIRE(t >= 0);
    REQUIRE(t < m.num_triangles());
    auto p = m.triangle_points(t);
    double area = signed_area(p[0], p[1], p[2]);
    Point v{x, y};
    CHECK(signed_area(v, p[1], p[2]) / area >= -1e-12);
    CHECK(signed_area(p[0], v, p[2]) / area >= -1e-12);
    CHECK(signed_area(p[0], p[1], v) / area >= -1e-12);
  }
}
