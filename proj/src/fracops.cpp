#include "fracflow/fracops.hpp"

#include <cmath>
#include <stdexcept>

namespace fracflow {

std::vector<double> cq_weight_sequence(double order, int count) {
  if (count < 1) throw std::invalid_argument("cq_weight_sequence: count must be >= 1");
  std::vector<double> w(count);
  w[0] = 1.0;
  for (int j = 1; j < count; ++j) w[j] = w[j - 1] * (j - 1 - order) / j;
  return w;
}

CqWeights cq_weights(double alpha, int count, double tau) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("cq_weights: alpha must be in (0, 1]");
  return {alpha, tau, cq_weight_sequence(alpha, count)};
}

double apply_frac_derivative(const CqWeights& w, const std::vector<double>& values, int n) {
  if (n < 0 || n >= static_cast<int>(values.size()))
    throw std::out_of_range("apply_frac_derivative: index out of range");
  double acc = 0.0;
  for (int j = 0; j <= n; ++j) acc += w.weights[n - j] * values[j];
  return std::pow(w.tau, -w.alpha) * acc;
}

std::vector<double> apply_frac_derivative(const CqWeights& w,
                                          const std::vector<std::vector<double>>& values, int n) {
  if (n < 0 || n >= static_cast<int>(values.size()))
    throw std::out_of_range("apply_frac_derivative: index out of range");
  std::vector<double> acc(values[0].size(), 0.0);
  for (int j = 0; j <= n; ++j) {
    double a = w.weights[n - j];
    const auto& vj = values[j];
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a * vj[i];
  }
  double s = std::pow(w.tau, -w.alpha);
  for (auto& v : acc) v *= s;
  return acc;
}

double apply_frac_integral(double alpha, const std::vector<double>& values, int n, double tau) {
  if (n < 0 || n >= static_cast<int>(values.size()))
    throw std::out_of_range("apply_frac_integral: index out of range");
  auto b = cq_weight_sequence(-alpha, n + 1);
  double acc = 0.0;
  for (int j = 0; j <= n; ++j) acc += b[n - j] * values[j];
  return std::pow(tau, alpha) * acc;
}

std::vector<double> apply_frac_integral(double alpha,
                                        const std::vector<std::vector<double>>& values, int n,
                                        double tau) {
  if (n < 0 || n >= static_cast<int>(values.size()))
    throw std::out_of_range("apply_frac_integral: index out of range");
  auto b = cq_weight_sequence(-alpha, n + 1);
  std::vector<double> acc(values[0].size(), 0.0);
  for (int j = 0; j <= n; ++j) {
    const auto& vj = values[j];
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += b[n - j] * vj[i];
  }
  double s = std::pow(tau, alpha);
  for (auto& v : acc) v *= s;
  return acc;
}

std::vector<double> scalar_relaxation(double alpha, double lambda, int steps,
                                      double final_time) {
  if (lambda <= 0.0) throw std::invalid_argument("scalar_relaxation: lambda must be positive");
  if (steps < 1) throw std::invalid_argument("scalar_relaxation: steps must be >= 1");
  double tau = final_time / steps;
  auto w = cq_weights(alpha, steps + 1, tau);
  double c0 = std::pow(tau, -alpha);

  std::vector<double> y(steps + 1);
  y[0] = 1.0;
  for (int n = 1; n <= steps; ++n) {
    double hist = 0.0;
    for (int k = 1; k <= n; ++k) hist += w.weights[k] * (y[n - k] - y[0]);
    y[n] = (c0 * y[0] - c0 * hist) / (c0 + lambda);
  }
  return y;
}

}  // namespace fracflow
