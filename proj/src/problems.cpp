#include "fracflow/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracflow/mittag_leffler.hpp"

namespace fracflow {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double ModalSeries::lambda(int m) { return (2 * m + 1) * kPi; }

double ModalSeries::lambda2(int m, int n) {
  double a = 2 * m + 1, b = 2 * n + 1;
  return (a * a + b * b) * kPi * kPi;
}

double ModalSeries::coeff(int m, int n) const {
  double mag = scale / std::pow(lambda(m) * lambda(n), decay_pow);
  long sign_exp;
  if (decay_pow == 2) {  // hat-type data
    sign_exp = convention == SignConvention::Separable ? static_cast<long>(m) + n
                                                       : static_cast<long>(m) * n;
  } else {  // indicator-type data
    long cm = (m + 1) / 2, cn = (n + 1) / 2;
    sign_exp = convention == SignConvention::Separable ? cm + cn : cm * cn;
  }
  return (sign_exp % 2 == 0) ? mag : -mag;
}

ProblemSpec example1(double alpha) {
  ProblemSpec p;
  p.example = 1;
  p.alpha = alpha;
  p.kappa = [](double, double) { return 1.0; };
  p.F = [](double x, double y) { return std::array<double, 2>{x, y}; };
  p.initial_data = [](double x, double y) { return x * (1 - x) * y * (1 - y); };
  p.initial_quad_degree = 5;
  p.initial_is_polynomial = true;
  return p;
}

ProblemSpec example2(double alpha, int max_index, SignConvention convention) {
  if (max_index < 1) throw std::invalid_argument("example2: max_index must be >= 1");
  ProblemSpec p;
  p.example = 2;
  p.alpha = alpha;
  p.kappa = [](double, double) { return 1.0; };
  p.F = [](double x, double y) { return std::array<double, 2>{x, y}; };
  p.series = ModalSeries{max_index, 16.0, 2, convention};
  if (convention == SignConvention::Separable) {
    // Product of 1D hats peaking at 1/2; its sine expansion matches the series
    // coefficients term for term. Piecewise polynomial along grid lines.
    p.initial_data = [](double x, double y) {
      return std::min(x, 1 - x) * std::min(y, 1 - y);
    };
    p.initial_quad_degree = 8;
    p.initial_is_polynomial = true;
  } else {
    ProblemSpec tmp = p;
    p.initial_data = [spec = tmp](double x, double y) { return eval_exact_u(spec, x, y, 0.0); };
    p.initial_quad_degree = 8;
  }
  return p;
}

ProblemSpec example3(double alpha, int max_index, SignConvention convention) {
  if (max_index < 1) throw std::invalid_argument("example3: max_index must be >= 1");
  ProblemSpec p;
  p.example = 3;
  p.alpha = alpha;
  p.kappa = [](double, double) { return 1.0; };
  p.F = [](double x, double y) { return std::array<double, 2>{x, y}; };
  p.series = ModalSeries{max_index, 8.0, 1, convention};
  if (convention == SignConvention::Separable) {
    p.initial_data = [](double x, double y) {
      return (x >= 0.25 && x <= 0.75 && y >= 0.25 && y <= 0.75) ? 1.0 : 0.0;
    };
    p.initial_quad_degree = 8;
    p.initial_is_polynomial = true;  // grid-aligned indicator for n divisible by 4
  } else {
    ProblemSpec tmp = p;
    p.initial_data = [spec = tmp](double x, double y) { return eval_exact_u(spec, x, y, 0.0); };
    p.initial_quad_degree = 8;
  }
  return p;
}

ProblemSpec make_example(int example, double alpha, int max_index, SignConvention convention) {
  switch (example) {
    case 1: return example1(alpha);
    case 2: return example2(alpha, max_index, convention);
    case 3: return example3(alpha, max_index, convention);
    default: throw std::invalid_argument("make_example: example must be 1, 2 or 3");
  }
}

Eigen::MatrixXd modal_time_weights(const ModalSeries& s, double alpha, double t) {
  int dim = s.max_index + 1;
  Eigen::MatrixXd w(dim, dim);
  double ta = std::pow(t, alpha);
  for (int m = 0; m < dim; ++m)
    for (int n = m; n < dim; ++n) {
      double e = (t == 0.0) ? 1.0 : ml(alpha, 1.0, -ModalSeries::lambda2(m, n) * ta);
      w(m, n) = s.coeff(m, n) * e;
      if (n != m) w(n, m) = s.coeff(n, m) * e;
    }
  return w;
}

Eigen::MatrixXd modal_rl_source_weights(const ModalSeries& s, double alpha, double t) {
  if (t <= 0.0) throw std::invalid_argument("modal_rl_source_weights: t must be positive");
  int dim = s.max_index + 1;
  Eigen::MatrixXd w(dim, dim);
  double ta = std::pow(t, alpha);
  double sing = std::pow(t, alpha - 1.0);
  for (int m = 0; m < dim; ++m)
    for (int n = m; n < dim; ++n) {
      double e = sing * ml(alpha, alpha, -ModalSeries::lambda2(m, n) * ta);
      w(m, n) = s.coeff(m, n) * e;
      if (n != m) w(n, m) = s.coeff(n, m) * e;
    }
  return w;
}

namespace {

const ModalSeries& require_series(const ProblemSpec& p) {
  if (!p.series)
    throw std::logic_error("problem has no exact-solution descriptor (Example 1)");
  return *p.series;
}

}  // namespace

double eval_exact_u(const ProblemSpec& p, double x, double y, double t) {
  const auto& s = require_series(p);
  Eigen::MatrixXd w = modal_time_weights(s, p.alpha, t);
  double acc = 0.0;
  for (int m = 0; m <= s.max_index; ++m) {
    double sm = std::sin(ModalSeries::lambda(m) * x);
    double row = 0.0;
    for (int n = 0; n <= s.max_index; ++n)
      row += w(m, n) * std::sin(ModalSeries::lambda(n) * y);
    acc += sm * row;
  }
  return acc;
}

std::array<double, 2> eval_exact_flux(const ProblemSpec& p, double x, double y, double t) {
  const auto& s = require_series(p);
  Eigen::MatrixXd w = modal_time_weights(s, p.alpha, t);
  double u = 0.0, ux = 0.0, uy = 0.0;
  for (int m = 0; m <= s.max_index; ++m) {
    double lm = ModalSeries::lambda(m);
    double sm = std::sin(lm * x), cm = lm * std::cos(lm * x);
    double row_s = 0.0, row_c = 0.0;
    for (int n = 0; n <= s.max_index; ++n) {
      double ln = ModalSeries::lambda(n);
      row_s += w(m, n) * std::sin(ln * y);
      row_c += w(m, n) * ln * std::cos(ln * y);
    }
    u += sm * row_s;
    ux += cm * row_s;
    uy += sm * row_c;
  }
  auto F = p.F(x, y);
  return {-ux + F[0] * u, -uy + F[1] * u};
}

double eval_source_f(const ProblemSpec& p, double x, double y, double t) {
  const auto& s = require_series(p);
  Eigen::MatrixXd w = modal_time_weights(s, p.alpha, t);
  double acc = 0.0;
  for (int m = 0; m <= s.max_index; ++m) {
    double lm = ModalSeries::lambda(m);
    double sm = std::sin(lm * x);
    double am = lm * x * std::cos(lm * x) + 2.0 * sm;
    double row_s = 0.0, row_b = 0.0;
    for (int n = 0; n <= s.max_index; ++n) {
      double ln = ModalSeries::lambda(n);
      row_s += w(m, n) * std::sin(ln * y);
      row_b += w(m, n) * ln * y * std::cos(ln * y);
    }
    acc += am * row_s + sm * row_b;
  }
  return acc;
}

SeriesBatchEvaluator::SeriesBatchEvaluator(const ModalSeries& series, double alpha,
                                           std::vector<Point> points)
    : series_(series), alpha_(alpha), points_(std::move(points)) {
  const double tol = 1e-12;
  auto group = [&](auto coord, std::vector<int>& idx, std::vector<double>& reps) {
    std::vector<std::pair<double, int>> vals(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i)
      vals[i] = {coord(points_[i]), static_cast<int>(i)};
    std::sort(vals.begin(), vals.end());
    idx.resize(points_.size());
    for (const auto& [v, i] : vals) {
      if (reps.empty() || v - reps.back() > tol) reps.push_back(v);
      idx[i] = static_cast<int>(reps.size()) - 1;
    }
  };
  std::vector<double> xreps, yreps;
  group([](const Point& p) { return p.x; }, xg_, xreps);
  group([](const Point& p) { return p.y; }, yg_, yreps);

  int dim = series_.max_index + 1;
  auto fill = [&](const std::vector<double>& reps, Eigen::MatrixXd& s, Eigen::MatrixXd& c,
                  Eigen::MatrixXd& drift, bool xside) {
    s.resize(dim, reps.size());
    c.resize(dim, reps.size());
    drift.resize(dim, reps.size());
    for (std::size_t g = 0; g < reps.size(); ++g) {
      double v = reps[g];
      for (int m = 0; m < dim; ++m) {
        double lm = ModalSeries::lambda(m);
        double sv = std::sin(lm * v), cv = std::cos(lm * v);
        s(m, g) = sv;
        c(m, g) = lm * cv;
        drift(m, g) = xside ? lm * v * cv + 2.0 * sv : lm * v * cv;
      }
    }
  };
  fill(xreps, sx_, cx_, ax_, true);
  fill(yreps, sy_, cy_, by_, false);
}

void SeriesBatchEvaluator::prepare(double t) const {
  if (t == cached_t_) return;
  Eigen::MatrixXd w = modal_time_weights(series_, alpha_, t);
  wsy_ = w * sy_;
  wcy_ = w * cy_;
  wby_ = w * by_;
  cached_t_ = t;
}

void SeriesBatchEvaluator::eval_u(double t, std::vector<double>& out) const {
  prepare(t);
  out.resize(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i)
    out[i] = sx_.col(xg_[i]).dot(wsy_.col(yg_[i]));
}

void SeriesBatchEvaluator::eval_flux(double t, const VectorField& F,
                                     std::vector<std::array<double, 2>>& out) const {
  prepare(t);
  out.resize(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double u = sx_.col(xg_[i]).dot(wsy_.col(yg_[i]));
    double ux = cx_.col(xg_[i]).dot(wsy_.col(yg_[i]));
    double uy = sx_.col(xg_[i]).dot(wcy_.col(yg_[i]));
    auto Fv = F(points_[i].x, points_[i].y);
    out[i] = {-ux + Fv[0] * u, -uy + Fv[1] * u};
  }
}

void SeriesBatchEvaluator::eval_source(double t, std::vector<double>& out) const {
  prepare(t);
  out.resize(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i)
    out[i] = ax_.col(xg_[i]).dot(wsy_.col(yg_[i])) + sx_.col(xg_[i]).dot(wby_.col(yg_[i]));
}

void SeriesBatchEvaluator::eval_source_with_weights(const Eigen::MatrixXd& w,
                                                    std::vector<double>& out) const {
  Eigen::MatrixXd wsy = w * sy_;
  Eigen::MatrixXd wby = w * by_;
  out.resize(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i)
    out[i] = ax_.col(xg_[i]).dot(wsy.col(yg_[i])) + sx_.col(xg_[i]).dot(wby.col(yg_[i]));
}

}  // namespace fracflow
