#pragma once

#include <vector>

#include "fracflow/assembly.hpp"
#include "fracflow/fracops.hpp"
#include "fracflow/problems.hpp"
#include "fracflow/sparse.hpp"

namespace fracflow {

/// How the manufactured source enters the scheme. ClosedForm evaluates the
/// Caputo-form source f = I^{1-alpha} g exactly at t_n; CqIntegral instead
/// feeds the samples g(t_j) of the Riemann-Liouville-form source through the
/// discrete fractional integral (the j = 0 sample, where g is singular, is
/// dropped). Both are first-order; CqIntegral carries a larger startup
/// error.
enum class SourceMode { ClosedForm, CqIntegral };

struct SchemeConfig {
  double alpha = 0.5;
  double final_time = 0.5;
  int steps = 1;  // N, so tau = final_time / N
  ElementPair pair;
  double residual_tol = 1e-10;
  SourceMode source_mode = SourceMode::ClosedForm;

  double tau() const { return final_time / steps; }
};

/// Block saddle-point matrix of one implicit step, unknowns ordered (Sigma; U):
///   [ A   -(B^T + G) ] [Sigma]   [ 0    ]
///   [ B    c0 M      ] [  U  ] = [ rhs_n ],  c0 = tau^{-alpha}.
/// The matrix is constant across steps, so it is factorized once.
Factorization build_system(const SystemMatrices& mats, double alpha, double tau);

/// Runs the fully implicit backward-Euler convolution-quadrature scheme. The
/// scalar history is kept in full; each step convolves it with the CQ weights
/// in the shifted (Caputo) form U^j - U^0.
class BecqStepper {
 public:
  BecqStepper(const SystemMatrices& mats, const SchemeConfig& cfg, std::vector<double> u0);

  int current_step() const { return static_cast<int>(history_.size()) - 1; }
  /// Advances one step; `load` is the scalar-space load vector at t_n, or null.
  void advance(const std::vector<double>* load = nullptr);

  const std::vector<double>& scalar(int n) const { return history_.at(n); }
  const std::vector<double>& current_scalar() const { return history_.back(); }
  const std::vector<double>& current_flux() const { return flux_; }
  const CqWeights& weights() const { return weights_; }
  double last_residual() const { return last_residual_; }

 private:
  const SystemMatrices& mats_;
  SchemeConfig cfg_;
  double c0_;
  CqWeights weights_;
  Factorization fact_;
  std::vector<std::vector<double>> history_;  // U^0 .. U^n
  std::vector<double> flux_;                  // Sigma^n
  double last_residual_ = 0.0;
};

struct StepperState {
  SystemMatrices matrices;
  std::vector<std::vector<double>> scalar_history;
  std::vector<double> flux;
};

/// Assembles, projects the initial data (U^0 = P_h u_0), and runs N steps of
/// the scheme, with the modal-series source when the problem has one.
StepperState run(const ProblemSpec& problem, const Mesh& mesh, const ElementPair& pair,
                 const SchemeConfig& cfg);

}  // namespace fracflow
