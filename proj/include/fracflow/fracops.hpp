#pragma once

#include <vector>

namespace fracflow {

/// Backward-Euler convolution quadrature weights a_j of the generating
/// function (1 - xi)^alpha: a_0 = 1, a_j = a_{j-1} (j - 1 - alpha) / j.
struct CqWeights {
  double alpha = 0.0;
  double tau = 0.0;
  std::vector<double> weights;
};

/// Weights of (1 - xi)^order for any real order (positive order gives the
/// fractional-derivative weights, negative order the integral weights).
std::vector<double> cq_weight_sequence(double order, int count);

CqWeights cq_weights(double alpha, int count, double tau = 1.0);

/// tau^{-alpha} sum_{j<=n} a_{n-j} values[j]
double apply_frac_derivative(const CqWeights& w, const std::vector<double>& values, int n);
std::vector<double> apply_frac_derivative(const CqWeights& w,
                                          const std::vector<std::vector<double>>& values, int n);

/// Discrete fractional integral of order alpha (weights of (1 - xi)^{-alpha},
/// scaled by tau^{alpha}); for alpha = 1 it reduces to tau * sum_{j<=n}.
double apply_frac_integral(double alpha, const std::vector<double>& values, int n, double tau);
std::vector<double> apply_frac_integral(double alpha,
                                        const std::vector<std::vector<double>>& values, int n,
                                        double tau);

/// Solves the discrete Caputo relaxation
///   tau^{-alpha} sum_{k<=n} a_k (y_{n-k} - y_0) = -lambda y_n,  y_0 = 1,
/// whose exact continuous counterpart is E_{alpha,1}(-lambda t^alpha).
std::vector<double> scalar_relaxation(double alpha, double lambda, int steps, double final_time);

}  // namespace fracflow
