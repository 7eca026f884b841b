#include "fracflow/assembly.hpp"

#include <stdexcept>

#include "fracflow/quadrature.hpp"

namespace fracflow {

SystemMatrices assemble(const Mesh& mesh, const DofMap& dofmap, const ElementPair& pair,
                        const ScalarField& kappa, const VectorField& F) {
  const int quad_degree = pair.kind == ElementKind::RT0_P0 ? 3 : 5;
  const auto& qr = rule(quad_degree);
  const int nf = pair.local_flux_dim();
  const int ns = pair.local_scalar_dim();

  TripletBuffer ta, tb, tg, tm;
  std::vector<FluxBasis::Value> w(nf);
  std::vector<double> v(ns);

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    auto tri = mesh.triangle_points(t);
    FluxBasis fb(pair.kind, tri);
    auto pts = map_to_physical(qr, tri);
    const auto& fg = dofmap.flux_globals[t];
    const auto& fs = dofmap.flux_signs[t];
    const auto& sg = dofmap.scalar_globals[t];

    for (const auto& pq : pts) {
      double k = kappa(pq.point.x, pq.point.y);
      if (!(k > 0.0))
        throw std::runtime_error("assemble: kappa must be positive at quadrature points");
      auto Fv = F(pq.point.x, pq.point.y);
      double bx = Fv[0] / k, by = Fv[1] / k;  // beta = kappa^{-1} F

      for (int i = 0; i < nf; ++i) w[i] = fb.eval(i, pq.point);
      for (int i = 0; i < ns; ++i) v[i] = scalar_basis(pair, tri, i, pq.point);

      for (int i = 0; i < nf; ++i) {
        double si = fs[i];
        for (int j = 0; j < nf; ++j)
          ta.add(fg[i], fg[j],
                 pq.weight / k * si * fs[j] * (w[i].vx * w[j].vx + w[i].vy * w[j].vy));
        for (int j = 0; j < ns; ++j)
          tg.add(fg[i], sg[j], pq.weight * si * (bx * w[i].vx + by * w[i].vy) * v[j]);
      }
      for (int i = 0; i < ns; ++i) {
        for (int j = 0; j < nf; ++j)
          tb.add(sg[i], fg[j], pq.weight * v[i] * fs[j] * w[j].div);
        for (int j = 0; j < ns; ++j) tm.add(sg[i], sg[j], pq.weight * v[i] * v[j]);
      }
    }
  }

  SystemMatrices m;
  m.A = compress(ta, dofmap.n_flux, dofmap.n_flux);
  m.B = compress(tb, dofmap.n_scalar, dofmap.n_flux);
  m.G = compress(tg, dofmap.n_flux, dofmap.n_scalar);
  m.M = compress(tm, dofmap.n_scalar, dofmap.n_scalar);
  return m;
}

std::vector<double> assemble_scalar_load(const Mesh& mesh, const DofMap& dofmap,
                                         const ElementPair& pair, const ScalarField& f,
                                         int quad_degree) {
  const auto& qr = rule(quad_degree);
  const int ns = pair.local_scalar_dim();
  std::vector<double> load(dofmap.n_scalar, 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    auto tri = mesh.triangle_points(t);
    auto pts = map_to_physical(qr, tri);
    for (const auto& pq : pts) {
      double fv = f(pq.point.x, pq.point.y);
      for (int i = 0; i < ns; ++i)
        load[dofmap.scalar_globals[t][i]] +=
            pq.weight * fv * scalar_basis(pair, tri, i, pq.point);
    }
  }
  return load;
}

}  // namespace fracflow
