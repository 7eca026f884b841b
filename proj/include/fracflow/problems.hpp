#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "fracflow/assembly.hpp"
#include "fracflow/fe_space.hpp"
#include "fracflow/mesh.hpp"

namespace fracflow {

/// Sign convention for the tensor-product sine expansion. The separable
/// variants reproduce the 1D expansions of the described initial data; the
/// product-parity exponents ((-1)^(mn)-type) remain selectable for comparison.
enum class SignConvention { Separable, ProductParity };

/// Truncated double sine series
///   u(x,y,t) = sum_{m,n=0..M} c_mn sin(l_m x) sin(l_n y) E_{alpha,1}(-l_mn t^alpha)
/// with l_m = (2m+1) pi and l_mn = [(2m+1)^2 + (2n+1)^2] pi^2.
struct ModalSeries {
  int max_index = 64;    // M
  double scale = 16.0;   // 16 (quadratic decay) or 8 (linear decay)
  int decay_pow = 2;     // exponent of (l_m l_n)^{-pow}
  SignConvention convention = SignConvention::Separable;

  static double lambda(int m);
  static double lambda2(int m, int n);
  double coeff(int m, int n) const;
};

struct ProblemSpec {
  int example = 1;
  double alpha = 0.5;
  double final_time = 0.5;
  ScalarField kappa;
  VectorField F;
  ScalarField initial_data;
  int initial_quad_degree = 8;        // exact for the closed-form data where possible
  bool initial_is_polynomial = false; // permits low-degree projection rules
  std::optional<ModalSeries> series;  // exact solution / source descriptor

  bool has_exact() const { return series.has_value(); }
  bool has_source() const { return series.has_value(); }
};

ProblemSpec example1(double alpha);
ProblemSpec example2(double alpha, int max_index = 64,
                     SignConvention convention = SignConvention::Separable);
ProblemSpec example3(double alpha, int max_index = 64,
                     SignConvention convention = SignConvention::Separable);

ProblemSpec make_example(int example, double alpha, int max_index = 64,
                         SignConvention convention = SignConvention::Separable);

/// Mode time weights c_mn E_{alpha,1}(-l_mn t^alpha), indexed (m, n).
Eigen::MatrixXd modal_time_weights(const ModalSeries& s, double alpha, double t);

/// Mode weights of the Riemann-Liouville-form source g at time t > 0:
/// c_mn t^{alpha-1} E_{alpha,alpha}(-l_mn t^alpha).
Eigen::MatrixXd modal_rl_source_weights(const ModalSeries& s, double alpha, double t);

double eval_exact_u(const ProblemSpec& p, double x, double y, double t);
/// sigma = -kappa grad u + F u (kappa = 1 for all examples here).
std::array<double, 2> eval_exact_flux(const ProblemSpec& p, double x, double y, double t);
/// Source of the Caputo form: f = I^{1-alpha} g, sharing u's mode time factor.
double eval_source_f(const ProblemSpec& p, double x, double y, double t);

/// Evaluates series fields at a fixed point set for many times. Points are
/// grouped by (approximately) shared x and y coordinates so each time costs
/// O(#groups M^2 + #points M) instead of O(#points M^2).
class SeriesBatchEvaluator {
 public:
  SeriesBatchEvaluator(const ModalSeries& series, double alpha, std::vector<Point> points);

  int num_points() const { return static_cast<int>(xg_.size()); }
  void eval_u(double t, std::vector<double>& out) const;
  void eval_flux(double t, const VectorField& F, std::vector<std::array<double, 2>>& out) const;
  void eval_source(double t, std::vector<double>& out) const;
  /// Source field with externally supplied mode weights in place of
  /// c_mn E_{alpha,1}(-l_mn t^alpha) (e.g. a discrete fractional integral
  /// of the Riemann-Liouville source samples).
  void eval_source_with_weights(const Eigen::MatrixXd& w, std::vector<double>& out) const;

 private:
  void prepare(double t) const;

  ModalSeries series_;
  double alpha_;
  std::vector<Point> points_;
  std::vector<int> xg_, yg_;  // group index per point
  // 1D factor arrays per distinct coordinate: sin, lambda*cos, and the
  // drift factors A_m(x) = l_m x cos(l_m x) + 2 sin(l_m x), B_n(y) = l_n y cos(l_n y).
  Eigen::MatrixXd sx_, cx_, ax_;  // (M+1) x n_xgroups
  Eigen::MatrixXd sy_, cy_, by_;  // (M+1) x n_ygroups
  mutable double cached_t_ = -1.0;
  mutable Eigen::MatrixXd wsy_, wcy_, wby_;  // W-contracted y factors
};

}  // namespace fracflow
