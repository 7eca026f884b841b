#pragma once

#include <array>
#include <vector>

#include "fracflow/mesh.hpp"

namespace fracflow {

/// Quadrature rule on the reference triangle {(x,y): x,y >= 0, x+y <= 1},
/// stored in barycentric coordinates. Weights sum to the reference area 1/2.
struct QuadratureRule {
  int degree = 0;  // maximal polynomial degree integrated exactly
  std::vector<std::array<double, 3>> points;  // barycentric, sum to 1
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Rule exact for all polynomials up to the requested degree (0..10).
/// All weights positive, all points interior.
const QuadratureRule& rule(int degree);

struct PhysicalQuadPoint {
  Point point;
  double weight;
};

/// Maps a reference rule to a physical triangle; weights pick up |det J|.
/// Rejects degenerate triangles (|area| < 1e-14).
std::vector<PhysicalQuadPoint> map_to_physical(const QuadratureRule& rule,
                                               const std::array<Point, 3>& tri);

/// Gauss-Legendre nodes/weights on [0, 1].
void gauss_legendre_01(int npts, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace fracflow
