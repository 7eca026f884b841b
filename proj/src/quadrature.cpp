#include "fracflow/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace fracflow {

void gauss_legendre_01(int npts, std::vector<double>& nodes, std::vector<double>& weights) {
  // Newton iteration on Legendre P_n over [-1,1], then affine map to [0,1].
  nodes.resize(npts);
  weights.resize(npts);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (npts + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (npts + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= npts; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = npts * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = 0.5 * (1.0 - x);  // descending x -> ascending node
    weights[i] = 0.5 * w;
    nodes[npts - 1 - i] = 0.5 * (1.0 + x);
    weights[npts - 1 - i] = 0.5 * w;
  }
}

namespace {

QuadratureRule make_centroid_rule() {
  QuadratureRule r;
  r.degree = 1;
  r.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
  r.weights = {0.5};
  return r;
}

QuadratureRule make_degree2_rule() {
  QuadratureRule r;
  r.degree = 2;
  const double a = 2.0 / 3.0, b = 1.0 / 6.0;
  r.points = {{a, b, b}, {b, a, b}, {b, b, a}};
  r.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
  return r;
}

// Symmetric 7-point rule, degree 5, positive weights.
QuadratureRule make_degree5_rule() {
  QuadratureRule r;
  r.degree = 5;
  const double a1 = 0.0597158717897698104;
  const double b1 = 0.4701420641051150897;
  const double a2 = 0.7974269853530873223;
  const double b2 = 0.1012865073234563389;
  const double w0 = 0.1125;
  const double w1 = 0.0661970763942530903;
  const double w2 = 0.0629695902724135763;
  r.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
              {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
              {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}};
  r.weights = {w0, w1, w1, w1, w2, w2, w2};
  return r;
}

// Conical-product (Duffy) rule: x = u, y = v (1 - u) with Jacobian (1 - u).
// A degree-d polynomial in (x, y) becomes degree <= d + 1 in u and <= d in v.
QuadratureRule make_duffy_rule(int degree) {
  QuadratureRule r;
  r.degree = degree;
  int nu = (degree + 3) / 2;  // exact for degree d + 1 in u
  int nv = (degree + 2) / 2;
  std::vector<double> un, uw, vn, vw;
  gauss_legendre_01(nu, un, uw);
  gauss_legendre_01(nv, vn, vw);
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      double x = un[i];
      double y = vn[j] * (1.0 - un[i]);
      double w = uw[i] * vw[j] * (1.0 - un[i]);
      r.points.push_back({1.0 - x - y, x, y});
      r.weights.push_back(w);
    }
  }
  return r;
}

}  // namespace

const QuadratureRule& rule(int degree) {
  if (degree < 0 || degree > 10)
    throw std::invalid_argument("quadrature: degree must be in [0, 10]");
  static std::once_flag once;
  static std::vector<QuadratureRule> rules;
  std::call_once(once, [] {
    rules.resize(11);
    rules[0] = rules[1] = make_centroid_rule();
    rules[2] = make_degree2_rule();
    rules[3] = rules[4] = rules[5] = make_degree5_rule();
    // 7-point rule is degree 5; label the shared copies by the request.
    rules[3].degree = 5;
    for (int d = 6; d <= 10; ++d) rules[d] = make_duffy_rule(d);
  });
  return rules[degree];
}

std::vector<PhysicalQuadPoint> map_to_physical(const QuadratureRule& rule,
                                               const std::array<Point, 3>& tri) {
  double area = signed_area(tri[0], tri[1], tri[2]);
  if (std::abs(area) < 1e-14)
    throw std::invalid_argument("map_to_physical: degenerate triangle");
  double scale = 2.0 * std::abs(area);  // |det J|
  std::vector<PhysicalQuadPoint> out(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const auto& bc = rule.points[q];
    out[q].point = {bc[0] * tri[0].x + bc[1] * tri[1].x + bc[2] * tri[2].x,
                    bc[0] * tri[0].y + bc[1] * tri[1].y + bc[2] * tri[2].y};
    out[q].weight = rule.weights[q] * scale;
  }
  return out;
}

}  // namespace fracflow
