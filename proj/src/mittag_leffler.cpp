#include "fracflow/mittag_leffler.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fracflow {

double reciprocal_gamma(double x) {
  if (x > 0.5) {
    if (x > 170.0) return 0.0;  // 1/Gamma underflows
    return std::exp(-std::lgamma(x));
  }
  // Exact zeros at the poles; sin(pi x) alone leaves O(1e-16) junk there,
  // which would corrupt error estimates built on vanishing expansion terms.
  if (x <= 0.0 && x == std::floor(x)) return 0.0;
  // Reflection: 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi.
  const double pi = 3.14159265358979323846;
  double s = std::sin(pi * x);
  if (s == 0.0) return 0.0;
  double lg = std::lgamma(1.0 - x);
  if (lg > 700.0) return 0.0;  // would overflow; the true value is astronomically large
  return s * std::exp(lg) / pi;
}

namespace {

struct BranchResult {
  double value = 0.0;
  double abs_err = std::numeric_limits<double>::infinity();
};

// Power series sum_p z^p / Gamma(alpha p + beta) with compensated summation.
// The cancellation error is tracked via the largest term magnitude.
BranchResult ml_series(double alpha, double beta, double z, int max_terms) {
  double sum = 0.0, comp = 0.0, max_mag = 0.0;
  double lx = (z != 0.0) ? std::log(std::abs(z)) : 0.0;
  int p = 0;
  for (; p < max_terms; ++p) {
    double rg = reciprocal_gamma(alpha * p + beta);
    double term = (p == 0) ? rg
                           : ((p % 2 == 0) ? 1.0 : -1.0) * std::exp(p * lx) * rg;
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    double mag = std::abs(term);
    if (mag > max_mag) max_mag = mag;
    // Terms of the tail are bounded once Gamma dominates; stop when negligible.
    if (p > 2 && mag < 1e-18 * (std::abs(sum) + max_mag * 1e-12) + 1e-300) break;
    if (p > 2 && mag < 1e-17 * std::abs(sum) && alpha * p + beta > std::abs(z)) break;
  }
  BranchResult r;
  r.value = sum;
  r.abs_err = max_mag * 1.1e-16 * std::sqrt(static_cast<double>(p + 2));
  if (p >= max_terms) r.abs_err = std::numeric_limits<double>::infinity();
  return r;
}

// Asymptotic expansion for z -> -inf: -sum_{k>=1} z^{-k} / Gamma(beta - alpha k),
// truncated at the smallest term (the classical optimal-truncation bound).
BranchResult ml_asymptotic(double alpha, double beta, double z, int max_terms) {
  double x = -z;
  if (x < 1.5) return {};
  double sum = 0.0, comp = 0.0;
  double prev_mag = std::numeric_limits<double>::infinity();
  double min_mag = std::numeric_limits<double>::infinity();
  double lx = std::log(x);
  for (int k = 1; k < max_terms; ++k) {
    double rg = reciprocal_gamma(beta - alpha * k);
    double term = -((k % 2 == 0) ? 1.0 : -1.0) * std::exp(-k * lx) * rg;
    double mag = std::abs(std::exp(-k * lx) * rg);
    if (k > 2 && mag > prev_mag) break;  // divergent tail begins
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    prev_mag = mag;
    if (mag > 0.0 && mag < min_mag) min_mag = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  BranchResult r;
  r.value = sum;
  r.abs_err = min_mag + std::abs(sum) * 1.1e-16;
  return r;
}

// Inverse-Laplace quadrature of E_{alpha,beta}(z) = (1/2 pi i) int e^s
// s^{alpha-beta} / (s^alpha - z) ds over a parabolic Hankel contour
// s(u) = mu (1 + i u)^2. For z <= 0 and alpha < 1 the integrand has no pole
// on the principal branch.
double ml_contour(double alpha, double beta, double z) {
  const double pi = 3.14159265358979323846;
  const double mu = 16.0;
  // Truncate where |e^s| = e^{mu(1-u^2)} is below ~1e-18.
  const double umax = std::sqrt(1.0 + 42.0 / mu);
  const int half_nodes = 96;
  const double h = umax / half_nodes;

  auto f = [&](double u) {
    std::complex<double> iu(0.0, u);
    std::complex<double> s = mu * (1.0 + iu) * (1.0 + iu);
    std::complex<double> ds(2.0 * mu * -u, 2.0 * mu);  // d/du mu (1+iu)^2
    std::complex<double> ls = std::log(s);
    std::complex<double> val =
        std::exp(s + (alpha - beta) * ls) / (std::exp(alpha * ls) - z) * ds;
    return val;
  };

  // f(-u) = -conj(f(u)), so the trapezoid sum reduces to imaginary parts.
  double acc = 0.5 * f(0.0).imag();
  for (int k = 1; k <= half_nodes; ++k) acc += f(k * h).imag();
  return acc * h / pi;
}

}  // namespace

double ml(double alpha, double beta, double z) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("ml: alpha must be in (0, 1]");
  if (!(beta > 0.0)) throw std::invalid_argument("ml: beta must be positive");
  if (!(z <= 0.0)) throw std::invalid_argument("ml: z must be <= 0");

  if (z == 0.0) return reciprocal_gamma(beta);
  if (alpha == 1.0) {
    if (beta == 1.0) return std::exp(z);
    if (beta == 2.0) return std::expm1(z) / z;
  }

  double x = -z;
  if (x <= 1.0) return ml_series(alpha, beta, z, 400).value;

  // Cheap pre-screen: the series is feasible when its largest term (attained
  // near p* with (alpha p*)^alpha ~ x) stays moderate.
  double pstar = std::pow(x, 1.0 / alpha) / alpha;
  BranchResult series;
  if (pstar < 600.0) series = ml_series(alpha, beta, z, static_cast<int>(4 * pstar) + 60);
  BranchResult asym = ml_asymptotic(alpha, beta, z, 600);

  const BranchResult& best = (series.abs_err <= asym.abs_err) ? series : asym;
  double scale = std::max(std::abs(best.value), 1e-30);
  if (best.abs_err <= 1e-13 || best.abs_err <= 1e-12 * scale) return best.value;
  if (alpha <= 0.995) return ml_contour(alpha, beta, z);
  return best.value;  // alpha ~ 1: accept the better expansion
}

}  // namespace fracflow
