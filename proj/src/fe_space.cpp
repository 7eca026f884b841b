#include "fracflow/fe_space.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "fracflow/quadrature.hpp"

namespace fracflow {

DofMap build_dofmap(const Mesh& mesh, const ElementPair& pair) {
  DofMap dm;
  const int T = mesh.num_triangles();
  const int E = mesh.num_edges();
  dm.flux_globals.assign(T, {});
  dm.flux_signs.assign(T, {});
  dm.scalar_globals.assign(T, {});

  if (pair.kind == ElementKind::RT0_P0) {
    dm.n_flux = E;
    dm.n_scalar = T;
    for (int t = 0; t < T; ++t) {
      for (int k = 0; k < 3; ++k) {
        dm.flux_globals[t][k] = mesh.triangle_edges[t][k];
        dm.flux_signs[t][k] = mesh.triangle_edge_signs[t][k];
      }
      dm.scalar_globals[t][0] = t;
    }
  } else {
    dm.n_flux = 2 * E + 2 * T;
    dm.n_scalar = 3 * T;
    for (int t = 0; t < T; ++t) {
      for (int k = 0; k < 3; ++k) {
        int e = mesh.triangle_edges[t][k];
        double sgn = mesh.triangle_edge_signs[t][k];
        dm.flux_globals[t][2 * k] = 2 * e;
        dm.flux_signs[t][2 * k] = sgn;  // zeroth moment flips with the normal
        dm.flux_globals[t][2 * k + 1] = 2 * e + 1;
        dm.flux_signs[t][2 * k + 1] = 1.0;  // odd moment is orientation-invariant
      }
      dm.flux_globals[t][6] = 2 * E + 2 * t;
      dm.flux_signs[t][6] = 1.0;
      dm.flux_globals[t][7] = 2 * E + 2 * t + 1;
      dm.flux_signs[t][7] = 1.0;
      for (int i = 0; i < 3; ++i) dm.scalar_globals[t][i] = 3 * t + i;
    }
  }
  return dm;
}

namespace {

// Monomial generators of RT1 in shifted/scaled coordinates (u, v).
inline void rt1_generator(int j, double u, double v, double& gx, double& gy, double& gdiv) {
  switch (j) {
    case 0: gx = 1; gy = 0; gdiv = 0; break;
    case 1: gx = 0; gy = 1; gdiv = 0; break;
    case 2: gx = u; gy = 0; gdiv = 1; break;
    case 3: gx = 0; gy = u; gdiv = 0; break;
    case 4: gx = v; gy = 0; gdiv = 0; break;
    case 5: gx = 0; gy = v; gdiv = 1; break;
    case 6: gx = u * u; gy = u * v; gdiv = 3 * u; break;
    default: gx = u * v; gy = v * v; gdiv = 3 * v; break;
  }
}

}  // namespace

FluxBasis::FluxBasis(ElementKind kind, const std::array<Point, 3>& tri)
    : kind_(kind), tri_(tri) {
  area_ = signed_area(tri[0], tri[1], tri[2]);
  if (area_ <= 0.0) throw std::invalid_argument("FluxBasis: triangle must be CCW");
  if (kind_ == ElementKind::RT0_P0) return;

  cx_ = (tri[0].x + tri[1].x + tri[2].x) / 3.0;
  cy_ = (tri[0].y + tri[1].y + tri[2].y) / 3.0;
  scale_ = std::sqrt(area_);

  // Dof functionals applied to the generators: rows are the 8 functionals,
  // columns the 8 generators.
  Eigen::Matrix<double, 8, 8> V = Eigen::Matrix<double, 8, 8>::Zero();

  std::vector<double> gn, gw;
  gauss_legendre_01(2, gn, gw);  // exact for the degree-2 edge integrands
  for (int k = 0; k < 3; ++k) {
    const Point& a = tri[(k + 1) % 3];
    const Point& b = tri[(k + 2) % 3];
    double ex = b.x - a.x, ey = b.y - a.y;
    double len = std::hypot(ex, ey);
    double nx = ey / len, ny = -ex / len;  // outward for CCW traversal
    for (std::size_t q = 0; q < gn.size(); ++q) {
      double s = gn[q];
      double px = a.x + s * ex, py = a.y + s * ey;
      double u = (px - cx_) / scale_, v = (py - cy_) / scale_;
      double leg1 = 2.0 * s - 1.0;
      for (int j = 0; j < 8; ++j) {
        double gx, gy, gdiv;
        rt1_generator(j, u, v, gx, gy, gdiv);
        double wn = gx * nx + gy * ny;
        V(2 * k, j) += gw[q] * len * wn;
        V(2 * k + 1, j) += gw[q] * len * wn * leg1;
      }
    }
  }
  const auto& qr = rule(2);
  auto pts = map_to_physical(qr, tri);
  for (const auto& pq : pts) {
    double u = (pq.point.x - cx_) / scale_, v = (pq.point.y - cy_) / scale_;
    for (int j = 0; j < 8; ++j) {
      double gx, gy, gdiv;
      rt1_generator(j, u, v, gx, gy, gdiv);
      V(6, j) += pq.weight * gx;
      V(7, j) += pq.weight * gy;
    }
  }

  Eigen::Matrix<double, 8, 8> C = V.fullPivLu().inverse();
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) coeff_[j][i] = C(j, i);
}

FluxBasis::Value FluxBasis::eval(int local, const Point& p) const {
  if (local < 0 || local >= size())
    throw std::invalid_argument("FluxBasis: invalid local index");
  Value out;
  if (kind_ == ElementKind::RT0_P0) {
    // Unit outward edge flux: integral of the normal component over the
    // associated edge equals 1.
    const Point& pk = tri_[local];
    double c = 1.0 / (2.0 * area_);
    out.vx = c * (p.x - pk.x);
    out.vy = c * (p.y - pk.y);
    out.div = 1.0 / area_;
    return out;
  }
  double u = (p.x - cx_) / scale_, v = (p.y - cy_) / scale_;
  for (int j = 0; j < 8; ++j) {
    double c = coeff_[j][local];
    if (c == 0.0) continue;
    double gx, gy, gdiv;
    rt1_generator(j, u, v, gx, gy, gdiv);
    out.vx += c * gx;
    out.vy += c * gy;
    out.div += c * gdiv / scale_;
  }
  return out;
}

FluxBasis::Value flux_basis(const ElementPair& pair, const std::array<Point, 3>& tri,
                            int local, const Point& p) {
  return FluxBasis(pair.kind, tri).eval(local, p);
}

double scalar_basis(const ElementPair& pair, const std::array<Point, 3>& tri,
                    int local, const Point& p) {
  if (pair.kind == ElementKind::RT0_P0) {
    if (local != 0) throw std::invalid_argument("scalar_basis: invalid local index");
    return 1.0;
  }
  if (local < 0 || local > 2) throw std::invalid_argument("scalar_basis: invalid local index");
  double area = signed_area(tri[0], tri[1], tri[2]);
  const Point& a = tri[(local + 1) % 3];
  const Point& b = tri[(local + 2) % 3];
  return signed_area(a, b, p) / area;
}

std::vector<double> project_scalar(const Mesh& mesh, const ElementPair& pair,
                                   const ScalarField& f, const ProjectionOptions& opts) {
  if (!opts.integrand_is_polynomial && opts.quad_degree < 8)
    throw std::invalid_argument(
        "project_scalar: non-polynomial integrand needs quadrature degree >= 8");
  const auto& qr = rule(opts.quad_degree);
  const int nloc = pair.local_scalar_dim();
  std::vector<double> coeffs(static_cast<std::size_t>(mesh.num_triangles()) * nloc);

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    auto tri = mesh.triangle_points(t);
    auto pts = map_to_physical(qr, tri);
    if (pair.kind == ElementKind::RT0_P0) {
      double num = 0.0, area = 0.0;
      for (const auto& pq : pts) {
        num += pq.weight * f(pq.point.x, pq.point.y);
        area += pq.weight;
      }
      coeffs[t] = num / area;
    } else {
      Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
      Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
      for (const auto& pq : pts) {
        double lam[3];
        for (int i = 0; i < 3; ++i) lam[i] = scalar_basis(pair, tri, i, pq.point);
        double fv = f(pq.point.x, pq.point.y);
        for (int i = 0; i < 3; ++i) {
          rhs(i) += pq.weight * fv * lam[i];
          for (int j = 0; j < 3; ++j) M(i, j) += pq.weight * lam[i] * lam[j];
        }
      }
      Eigen::Vector3d c = M.llt().solve(rhs);
      for (int i = 0; i < 3; ++i) coeffs[3 * t + i] = c(i);
    }
  }
  return coeffs;
}

double eval_scalar_field(const Mesh& mesh, const DofMap& dofmap, const ElementPair& pair,
                         const std::vector<double>& coeffs, int t, const Point& p) {
  auto tri = mesh.triangle_points(t);
  double val = 0.0;
  for (int i = 0; i < pair.local_scalar_dim(); ++i)
    val += coeffs[dofmap.scalar_globals[t][i]] * scalar_basis(pair, tri, i, p);
  return val;
}

std::array<double, 2> eval_flux_field(const Mesh& mesh, const DofMap& dofmap,
                                      const ElementPair& pair,
                                      const std::vector<double>& coeffs, int t,
                                      const Point& p, const FluxBasis* basis) {
  std::optional<FluxBasis> local_basis;
  if (!basis) local_basis.emplace(pair.kind, mesh.triangle_points(t));
  const FluxBasis& fb = basis ? *basis : *local_basis;
  std::array<double, 2> val{0.0, 0.0};
  for (int i = 0; i < pair.local_flux_dim(); ++i) {
    double c = dofmap.flux_signs[t][i] * coeffs[dofmap.flux_globals[t][i]];
    auto b = fb.eval(i, p);
    val[0] += c * b.vx;
    val[1] += c * b.vy;
  }
  return val;
}

}  // namespace fracflow
