#pragma once

#include <functional>

#include "fracflow/fe_space.hpp"
#include "fracflow/mesh.hpp"
#include "fracflow/sparse.hpp"

namespace fracflow {

using VectorField = std::function<std::array<double, 2>(double, double)>;

/// Global matrices of the mixed weak form:
///   A (flux mass, kappa^{-1}-weighted), B (divergence coupling, scalar x flux),
///   G (drift coupling against beta = kappa^{-1} F, flux x scalar),
///   M (scalar mass).
struct SystemMatrices {
  SparseMatrix A;  // n_flux x n_flux
  SparseMatrix B;  // n_scalar x n_flux
  SparseMatrix G;  // n_flux x n_scalar
  SparseMatrix M;  // n_scalar x n_scalar
};

SystemMatrices assemble(const Mesh& mesh, const DofMap& dofmap, const ElementPair& pair,
                        const ScalarField& kappa, const VectorField& F);

/// Load vector (f(., t), v_i) over the scalar space by quadrature.
std::vector<double> assemble_scalar_load(const Mesh& mesh, const DofMap& dofmap,
                                         const ElementPair& pair, const ScalarField& f,
                                         int quad_degree = 8);

}  // namespace fracflow
