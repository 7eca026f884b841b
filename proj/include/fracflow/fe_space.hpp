#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fracflow/mesh.hpp"

namespace fracflow {

enum class ElementKind { RT0_P0, RT1_P1dc };

struct ElementPair {
  ElementKind kind = ElementKind::RT0_P0;

  int flux_dofs_per_edge() const { return kind == ElementKind::RT0_P0 ? 1 : 2; }
  int flux_dofs_interior() const { return kind == ElementKind::RT0_P0 ? 0 : 2; }
  int local_flux_dim() const { return kind == ElementKind::RT0_P0 ? 3 : 8; }
  int local_scalar_dim() const { return kind == ElementKind::RT0_P0 ? 1 : 3; }
};

/// Local-to-global numbering with orientation signs. The sign multiplies the
/// local (outward-normal) basis function to produce the global one; odd edge
/// moments of RT1 are orientation-invariant and always carry +1.
struct DofMap {
  int n_flux = 0;
  int n_scalar = 0;
  std::vector<std::array<int, 8>> flux_globals;    // per triangle
  std::vector<std::array<double, 8>> flux_signs;   // +1 / -1
  std::vector<std::array<int, 3>> scalar_globals;  // per triangle
};

DofMap build_dofmap(const Mesh& mesh, const ElementPair& pair);

/// Per-triangle flux basis in local convention: RT0 functions have unit
/// outward edge flux and constant divergence 1/|K|; RT1 functions are dual
/// to edge moments against Legendre polynomials of degree <= 1 (local edge
/// parametrization) plus interior moments against (1,0) and (0,1).
class FluxBasis {
 public:
  struct Value {
    double vx = 0.0, vy = 0.0, div = 0.0;
  };

  FluxBasis(ElementKind kind, const std::array<Point, 3>& tri);

  int size() const { return kind_ == ElementKind::RT0_P0 ? 3 : 8; }
  Value eval(int local, const Point& p) const;

 private:
  ElementKind kind_;
  std::array<Point, 3> tri_;
  double area_ = 0.0;
  // RT1: coefficients of each basis function in the shifted/scaled
  // monomial generator set (column per basis function).
  double cx_ = 0.0, cy_ = 0.0, scale_ = 1.0;
  std::array<std::array<double, 8>, 8> coeff_{};
};

/// Pair-level convenience wrapper around FluxBasis.
FluxBasis::Value flux_basis(const ElementPair& pair, const std::array<Point, 3>& tri,
                            int local, const Point& p);

/// P0: constant 1. P1dc: barycentric coordinate of local vertex `local`.
double scalar_basis(const ElementPair& pair, const std::array<Point, 3>& tri,
                    int local, const Point& p);

using ScalarField = std::function<double(double, double)>;

struct ProjectionOptions {
  int quad_degree = 8;
  bool integrand_is_polynomial = false;  // suppresses the low-degree check
};

/// Element-local L2-projection of f into the scalar space, ordered by the
/// dofmap scalar numbering.
std::vector<double> project_scalar(const Mesh& mesh, const ElementPair& pair,
                                   const ScalarField& f,
                                   const ProjectionOptions& opts = {});

/// Evaluates a scalar FE field (coefficients in dofmap numbering) at a point
/// of triangle t.
double eval_scalar_field(const Mesh& mesh, const DofMap& dofmap, const ElementPair& pair,
                         const std::vector<double>& coeffs, int t, const Point& p);

/// Evaluates a flux FE field at a point of triangle t. A FluxBasis for the
/// same triangle may be supplied to avoid rebuilding it.
std::array<double, 2> eval_flux_field(const Mesh& mesh, const DofMap& dofmap,
                                      const ElementPair& pair,
                                      const std::vector<double>& coeffs, int t,
                                      const Point& p, const FluxBasis* basis = nullptr);

}  // namespace fracflow
