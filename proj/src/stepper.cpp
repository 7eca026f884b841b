#include "fracflow/stepper.hpp"

#include <cmath>
#include <stdexcept>

#include "fracflow/quadrature.hpp"

namespace fracflow {

namespace {

SparseMatrix build_block_matrix(const SystemMatrices& mats, double alpha, double tau) {
  const int nf = mats.A.rows;
  const int ns = mats.M.rows;
  const double c0 = std::pow(tau, -alpha);  // a_0 = 1

  TripletBuffer buf;
  for (int i = 0; i < nf; ++i)
    for (int k = mats.A.row_offsets[i]; k < mats.A.row_offsets[i + 1]; ++k)
      buf.add(i, mats.A.col_indices[k], mats.A.values[k]);
  // -(B^T + G) in the flux rows, scalar columns
  for (int i = 0; i < ns; ++i)
    for (int k = mats.B.row_offsets[i]; k < mats.B.row_offsets[i + 1]; ++k)
      buf.add(mats.B.col_indices[k], nf + i, -mats.B.values[k]);
  for (int i = 0; i < nf; ++i)
    for (int k = mats.G.row_offsets[i]; k < mats.G.row_offsets[i + 1]; ++k)
      buf.add(i, nf + mats.G.col_indices[k], -mats.G.values[k]);
  for (int i = 0; i < ns; ++i) {
    for (int k = mats.B.row_offsets[i]; k < mats.B.row_offsets[i + 1]; ++k)
      buf.add(nf + i, mats.B.col_indices[k], mats.B.values[k]);
    for (int k = mats.M.row_offsets[i]; k < mats.M.row_offsets[i + 1]; ++k)
      buf.add(nf + i, nf + mats.M.col_indices[k], c0 * mats.M.values[k]);
  }
  return compress(buf, nf + ns, nf + ns);
}

}  // namespace

Factorization build_system(const SystemMatrices& mats, double alpha, double tau) {
  return Factorization(build_block_matrix(mats, alpha, tau));
}

BecqStepper::BecqStepper(const SystemMatrices& mats, const SchemeConfig& cfg,
                         std::vector<double> u0)
    : mats_(mats),
      cfg_(cfg),
      c0_(std::pow(cfg.tau(), -cfg.alpha)),
      weights_(cq_weights(cfg.alpha, cfg.steps + 1, cfg.tau())),
      fact_(build_system(mats, cfg.alpha, cfg.tau())) {
  if (static_cast<int>(u0.size()) != mats.M.rows)
    throw std::invalid_argument("BecqStepper: initial data dimension mismatch");
  history_.push_back(std::move(u0));
  flux_.assign(mats.A.rows, 0.0);
}

void BecqStepper::advance(const std::vector<double>* load) {
  const int n = current_step() + 1;
  if (n > cfg_.steps) throw std::logic_error("BecqStepper: past the final step");
  const int nf = mats_.A.rows;
  const int ns = mats_.M.rows;
  const auto& u0 = history_[0];

  // Shifted-history convolution sum_{k=1..n} a_k (U^{n-k} - U^0).
  std::vector<double> conv(ns, 0.0);
  for (int k = 1; k <= n; ++k) {
    double a = weights_.weights[k];
    const auto& u = history_[n - k];
    for (int i = 0; i < ns; ++i) conv[i] += a * (u[i] - u0[i]);
  }
  std::vector<double> mconv = mats_.M.multiply(conv);
  std::vector<double> mu0 = mats_.M.multiply(u0);

  // The a_0 (U^n - U^0) term splits: c0 M U^n stays in the matrix, c0 M U^0
  // moves to the right-hand side.
  std::vector<double> rhs(nf + ns, 0.0);
  for (int i = 0; i < ns; ++i) {
    rhs[nf + i] = c0_ * mu0[i] - c0_ * mconv[i];
    if (load) rhs[nf + i] += (*load)[i];
  }

  std::vector<double> sol = fact_.solve(rhs);

  // Residual check against the block system.
  double rnorm2 = 0.0, bnorm2 = 0.0;
  {
    // Block matvec via the stored component matrices.
    std::vector<double> sigma(sol.begin(), sol.begin() + nf);
    std::vector<double> u(sol.begin() + nf, sol.end());
    auto a_sigma = mats_.A.multiply(sigma);
    auto btu = mats_.B.multiply_transpose(u);
    auto gu = mats_.G.multiply(u);
    auto b_sigma = mats_.B.multiply(sigma);
    auto mu = mats_.M.multiply(u);
    for (int i = 0; i < nf; ++i) {
      double r = a_sigma[i] - btu[i] - gu[i] - rhs[i];
      rnorm2 += r * r;
    }
    for (int i = 0; i < ns; ++i) {
      double r = b_sigma[i] + c0_ * mu[i] - rhs[nf + i];
      rnorm2 += r * r;
      bnorm2 += rhs[nf + i] * rhs[nf + i];
    }
  }
  last_residual_ = bnorm2 > 0.0 ? std::sqrt(rnorm2 / bnorm2) : std::sqrt(rnorm2);
  if (last_residual_ > cfg_.residual_tol)
    throw std::runtime_error("BecqStepper: solve residual above tolerance at step " +
                             std::to_string(n));

  flux_.assign(sol.begin(), sol.begin() + nf);
  history_.emplace_back(sol.begin() + nf, sol.end());
}

StepperState run(const ProblemSpec& problem, const Mesh& mesh, const ElementPair& pair,
                 const SchemeConfig& cfg) {
  DofMap dofmap = build_dofmap(mesh, pair);
  SystemMatrices mats = assemble(mesh, dofmap, pair, problem.kappa, problem.F);
  std::vector<double> u0 = project_scalar(
      mesh, pair, problem.initial_data,
      {problem.initial_quad_degree, problem.initial_is_polynomial});

  BecqStepper stepper(mats, cfg, std::move(u0));

  if (problem.has_source()) {
    // Precompute quadrature points and scalar basis weights once; only the
    // series time weights change between steps. On coarse meshes the rule is
    // applied on a red-refined copy (cells <= 1/16) so the oscillatory series
    // tail is integrated adequately; basis functions live on the parent.
    const int load_degree = 8;
    const auto& qr = rule(load_degree);
    const int ns = pair.local_scalar_dim();
    int refinements = 0;
    Mesh fine = mesh;
    while (fine.subdivisions < 16) {
      fine = red_refine(fine);
      ++refinements;
    }
    std::vector<Point> pts;
    std::vector<int> dof;
    std::vector<double> wv;
    for (int tc = 0; tc < fine.num_triangles(); ++tc) {
      int t = tc >> (2 * refinements);  // red refinement appends children 4t..4t+3
      auto tri = mesh.triangle_points(t);
      for (const auto& pq : map_to_physical(qr, fine.triangle_points(tc))) {
        pts.push_back(pq.point);
        for (int i = 0; i < ns; ++i) {
          dof.push_back(dofmap.scalar_globals[t][i]);
          wv.push_back(pq.weight * scalar_basis(pair, tri, i, pq.point));
        }
      }
    }
    SeriesBatchEvaluator series_eval(*problem.series, problem.alpha, pts);
    std::vector<double> fvals;
    std::vector<double> load(dofmap.n_scalar);

    // For the CqIntegral mode, precompute the per-step mode-weight matrices
    // of the sampled RL source; the step loop convolves them with the CQ
    // weights of the order-(1-alpha) integral.
    std::vector<Eigen::MatrixXd> rl_weights;
    std::vector<double> iw;
    if (cfg.source_mode == SourceMode::CqIntegral) {
      rl_weights.reserve(cfg.steps);
      for (int j = 1; j <= cfg.steps; ++j)
        rl_weights.push_back(modal_rl_source_weights(*problem.series, problem.alpha,
                                                     j * cfg.tau()));
      iw = cq_weight_sequence(problem.alpha - 1.0, cfg.steps);
    }

    for (int n = 1; n <= cfg.steps; ++n) {
      if (cfg.source_mode == SourceMode::ClosedForm) {
        series_eval.eval_source(n * cfg.tau(), fvals);
      } else {
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(rl_weights[0].rows(), rl_weights[0].cols());
        for (int j = 1; j <= n; ++j) w += iw[n - j] * rl_weights[j - 1];
        w *= std::pow(cfg.tau(), 1.0 - problem.alpha);
        series_eval.eval_source_with_weights(w, fvals);
      }
      std::fill(load.begin(), load.end(), 0.0);
      for (std::size_t p = 0; p < fvals.size(); ++p)
        for (int i = 0; i < ns; ++i)
          load[dof[p * ns + i]] += wv[p * ns + i] * fvals[p];
      stepper.advance(&load);
    }
  } else {
    for (int n = 1; n <= cfg.steps; ++n) stepper.advance();
  }

  StepperState state;
  state.matrices = std::move(mats);
  state.flux = stepper.current_flux();
  state.scalar_history.reserve(cfg.steps + 1);
  for (int n = 0; n <= cfg.steps; ++n) state.scalar_history.push_back(stepper.scalar(n));
  return state;
}

}  // namespace fracflow
