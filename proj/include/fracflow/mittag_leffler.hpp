#pragma once

namespace fracflow {

/// 1/Gamma(x) for any real x (zero at the poles of Gamma).
double reciprocal_gamma(double x);

/// Mittag-Leffler function E_{alpha,beta}(z) for real z <= 0, alpha in (0,1],
/// beta > 0. Hybrid evaluation: power series for small |z|, asymptotic
/// expansion with optimal truncation for large |z|, and an inverse-Laplace
/// parabolic contour quadrature in the band where neither reaches the
/// accuracy target (relative error <= 1e-8 over |z| <= 1e7).
double ml(double alpha, double beta, double z);

}  // namespace fracflow
