// Acceptance gate: one pass/fail line per criterion. Magnitude pins carry
// loose factors (unstated upstream choices), rate pins carry tight bands.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fracflow/fracops.hpp"
#include "fracflow/harness.hpp"
#include "fracflow/mittag_leffler.hpp"
#include "fracflow/quadrature.hpp"
#include "fracflow/stepper.hpp"

using namespace fracflow;

namespace {

int failures = 0;
std::vector<std::string> notes;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    notes.push_back(what);
  }
}

bool in_band(double v, double lo, double hi) { return v >= lo && v <= hi; }
bool within_factor(double v, double pin, double factor) {
  return v > 0.0 && v < factor * pin && v > pin / factor;
}

Eigen::MatrixXd to_dense(const SparseMatrix& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k)
      d(i, m.col_indices[k]) += m.values[k];
  return d;
}

void report(int criterion, const std::string& label) {
  if (failures == 0) {
    std::printf("PASS criterion %d: %s\n", criterion, label.c_str());
  } else {
    std::printf("FAIL criterion %d: %s\n", criterion, label.c_str());
    for (const auto& n : notes) std::printf("       %s\n", n.c_str());
  }
  std::fflush(stdout);
}

int total_failures = 0;

void run_criterion(int criterion, const std::string& label,
                   const std::function<void()>& body) {
  failures = 0;
  notes.clear();
  try {
    body();
  } catch (const std::exception& e) {
    expect(false, std::string("exception: ") + e.what());
  }
  report(criterion, label);
  total_failures += failures;
}

// --- criterion bodies -------------------------------------------------------

void criterion1() {
  auto w = cq_weight_sequence(0.5, 4);
  expect(w[0] == 1.0 && w[1] == -0.5 && w[2] == -0.125 && w[3] == -0.0625,
         "alpha = 1/2 weight prefix is not exact");
  for (double a : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    auto d = cq_weight_sequence(a, 10001);
    auto p = cq_weight_sequence(a - 1.0, 10001);
    double s = 0.0;
    for (int n = 0; n <= 10000; ++n) {
      s += d[n];
      if (std::abs(s - p[n]) > 1e-13 * std::max(1.0, std::abs(p[n]))) {
        expect(false, "partial-sum identity fails at alpha " + std::to_string(a));
        break;
      }
    }
  }
  // composition: the discrete integral inverts the discrete derivative
  const int N = 100;
  const double tau = 0.02;
  for (double a : {0.3, 0.5, 0.7}) {
    CqWeights cw = cq_weights(a, N + 1, tau);
    std::vector<double> y(N + 1), dy(N + 1);
    for (int n = 0; n <= N; ++n) y[n] = std::cos(0.2 * n) + 0.01 * n * n;
    for (int n = 0; n <= N; ++n) dy[n] = apply_frac_derivative(cw, y, n);
    for (int n = 0; n <= N; ++n)
      if (std::abs(apply_frac_integral(a, dy, n, tau) - y[n]) > 1e-12)
        expect(false, "composition identity fails at alpha " + std::to_string(a));
  }
}

void criterion2() {
  for (double z = 0.0; z >= -30.0; z -= 0.5)
    if (std::abs(ml(1.0, 1.0, z) - std::exp(z)) > 1e-12 * std::exp(z))
      expect(false, "E_{1,1} vs exp fails at z = " + std::to_string(z));
  double ref = std::exp(1.0) * std::erfc(1.0);  // 0.42758357615...
  expect(std::abs(ml(0.5, 1.0, -1.0) - ref) < 1e-8, "E_{1/2,1}(-1) erfc oracle fails");
  expect(std::abs(ml(0.5, 1.0, -1.0) - 0.427583576) < 1e-8,
         "E_{1/2,1}(-1) pinned value fails");
  for (double a : {0.3, 0.5, 0.7, 0.9})
    for (double x = 0.5; x <= 2.0e6; x *= 1.9) {
      double lhs = ml(a, 1.0, -x);
      double rhs = -x * ml(a, 1.0 + a, -x) + 1.0;  // 1/Gamma(1) = 1
      if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(lhs)))
        expect(false, "recurrence fails at alpha " + std::to_string(a) + ", x = " +
                          std::to_string(x));
    }
}

void criterion3() {
  const double T = 1.0, lambda = 1.0;
  for (double a : {0.3, 0.5, 0.7}) {
    std::vector<double> errs;
    for (int N : {40, 80, 160, 320}) {
      auto y = scalar_relaxation(a, lambda, N, T);
      // max-norm over t >= 0.1: the startup error at the t = 0 singularity
      // decays only at order alpha, so the sup over the full grid cannot
      // reach first order for any consistent scheme of this family
      double e = 0.0;
      for (int n = 1; n <= N; ++n) {
        double t = n * (T / N);
        if (t < 0.1) continue;
        e = std::max(e, std::abs(y[n] - ml(a, 1.0, -std::pow(t, a))));
      }
      errs.push_back(e);
    }
    for (std::size_t i = 1; i < errs.size(); ++i)
      if (std::log2(errs[i - 1] / errs[i]) < 0.9)
        expect(false, "relaxation order below 0.9 at alpha " + std::to_string(a));
  }
  const int N = 25;
  const double tau = T / N;
  auto y = scalar_relaxation(1.0, 2.0, N, T);
  for (int n = 0; n <= N; ++n)
    if (std::abs(y[n] - std::pow(1.0 + 2.0 * tau, -n)) > 1e-13)
      expect(false, "alpha = 1 relaxation is not the backward-Euler decay");
}

void criterion4() {
  StudyConfig cfg;
  cfg.example = 2;
  cfg.alphas = {0.3, 0.7};
  cfg.pair = ElementPair{ElementKind::RT1_P1dc};
  cfg.axis = StudyAxis::Space;
  cfg.levels = {1, 2, 3, 4};
  cfg.tau = 1.0 / 1200.0;
  ConvergenceReport rep = space_study(cfg);
  const double pin_u[2] = {5.317e-05, 3.140e-05};  // reference level-4 errors
  for (int a = 0; a < 2; ++a) {
    const ReportRow& last = rep.rows[4 * a + 3];
    expect(last.failure.empty(), "solver failure: " + last.failure);
    expect(last.oc_u && in_band(*last.oc_u, 1.8, 2.25),
           "oc_u out of [1.8, 2.25] at alpha " + std::to_string(cfg.alphas[a]));
    expect(last.oc_sigma && in_band(*last.oc_sigma, 1.8, 2.25),
           "oc_sigma out of [1.8, 2.25] at alpha " + std::to_string(cfg.alphas[a]));
    expect(within_factor(last.err_u, pin_u[a], 3.0),
           "err_u " + std::to_string(last.err_u) + " not within 3x of pinned value");
  }
}

void criterion5() {
  StudyConfig cfg;
  cfg.example = 2;
  cfg.alphas = {0.3, 0.7};
  cfg.pair = ElementPair{ElementKind::RT1_P1dc};
  cfg.axis = StudyAxis::Time;
  cfg.step_counts = {10, 20, 40, 80, 160};
  cfg.fixed_level = 5;   // 64 x 64 grid; spatial error subdominant
  cfg.eval_time = 0.05;  // reference temporal magnitudes match an early time
  ConvergenceReport rep = time_study(cfg);
  for (int a = 0; a < 2; ++a) {
    double mean = 0.0;
    int count = 0;
    for (int i = 1; i < 5; ++i) {
      const ReportRow& r = rep.rows[5 * a + i];
      expect(r.failure.empty(), "solver failure: " + r.failure);
      if (r.oc_u) {
        mean += *r.oc_u;
        ++count;
      }
    }
    mean /= std::max(count, 1);
    expect(count == 4 && in_band(mean, 0.85, 1.15),
           "mean temporal oc_u " + std::to_string(mean) + " out of 1.0 +/- 0.15 at alpha " +
               std::to_string(cfg.alphas[a]));
  }
  // Reference magnitudes are matched by the alpha = 0.7 column; the reported
  // alpha = 0.3 magnitudes follow the theoretical error envelope rather than
  // a reproducible final or early-time error, so only rates are pinned there.
  const double pin[5] = {1.68e-2, 7.81e-3, 3.29e-3, 1.60e-3, 8.04e-4};
  for (int i = 0; i < 5; ++i)
    expect(within_factor(rep.rows[5 + i].err_u, pin[i], 3.0),
           "alpha = 0.7 temporal err_u at N = " + std::to_string(rep.rows[5 + i].level_or_n) +
               " not within 3x of pinned value");
}

void criterion6() {
  StudyConfig cfg;
  cfg.example = 3;
  cfg.alphas = {0.3, 0.7};
  cfg.pair = ElementPair{ElementKind::RT1_P1dc};
  cfg.axis = StudyAxis::Space;
  cfg.levels = {1, 2, 3, 4};
  cfg.tau = 6.25e-4;
  ConvergenceReport rep = space_study(cfg);
  for (int a = 0; a < 2; ++a) {
    const ReportRow& last = rep.rows[4 * a + 3];
    expect(last.failure.empty(), "solver failure: " + last.failure);
    expect(last.oc_u && in_band(*last.oc_u, 1.8, 2.2),
           "oc_u out of [1.8, 2.2] at alpha " + std::to_string(cfg.alphas[a]));
    expect(last.oc_sigma && in_band(*last.oc_sigma, 1.5, 1.8),
           "oc_sigma out of [1.5, 1.8] at alpha " + std::to_string(cfg.alphas[a]));
  }
}

void criterion7() {
  StudyConfig cfg;
  cfg.example = 1;
  cfg.alphas = {0.3, 0.7};
  cfg.axis = StudyAxis::Space;
  cfg.tau = 1.0 / 1200.0;

  cfg.pair = ElementPair{ElementKind::RT0_P0};
  cfg.levels = {1, 2, 3, 4, 5};
  cfg.reference_level = 6;
  ConvergenceReport rt0 = space_study(cfg);
  for (const auto& r : rt0.rows) {
    expect(r.failure.empty(), "solver failure: " + r.failure);
    if (r.oc_u)
      expect(in_band(*r.oc_u, 0.8, 1.2) && in_band(*r.oc_sigma, 0.8, 1.2),
             "RT0 order out of 1.0 +/- 0.2 at level " + std::to_string(r.level_or_n));
  }

  cfg.pair = ElementPair{ElementKind::RT1_P1dc};
  cfg.levels = {1, 2, 3, 4};
  cfg.reference_level = 5;
  ConvergenceReport rt1 = space_study(cfg);
  for (const auto& r : rt1.rows) {
    expect(r.failure.empty(), "solver failure: " + r.failure);
    if (r.oc_u)
      expect(in_band(*r.oc_u, 1.75, 2.25) && in_band(*r.oc_sigma, 1.75, 2.25),
             "RT1 order out of 2.0 +/- 0.25 at level " + std::to_string(r.level_or_n));
  }
}

void criterion8() {
  // mesh counting formulas
  for (int n = 1; n <= 8; ++n) {
    Mesh m = build_uniform(n);
    expect(m.num_vertices() == (n + 1) * (n + 1) && m.num_triangles() == 2 * n * n &&
               m.num_edges() == 2 * n * (n + 1) + n * n,
           "mesh counting formulas fail at n = " + std::to_string(n));
  }

  // quadrature exactness sweep against the factorial-ratio oracle
  for (int d = 0; d <= 10; ++d) {
    const QuadratureRule& q = rule(d);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        double s = 0.0, e = 1.0;
        for (int i = 0; i < q.size(); ++i)
          s += q.weights[i] * std::pow(q.points[i][1], a) * std::pow(q.points[i][2], b);
        for (int k = 1; k <= a; ++k) e *= k;
        for (int k = 1; k <= b; ++k) e *= k;
        for (int k = 1; k <= a + b + 2; ++k) e /= k;
        if (std::abs(s - e) > 1e-13)
          expect(false, "quadrature exactness fails at degree " + std::to_string(d));
      }
  }

  const ScalarField one = [](double, double) { return 1.0; };
  const VectorField drift = [](double x, double y) { return std::array<double, 2>{x, y}; };

  // RT normal continuity across interior edges
  {
    Mesh mesh = build_uniform(2);
    for (ElementKind kind : {ElementKind::RT0_P0, ElementKind::RT1_P1dc}) {
      ElementPair pair{kind};
      DofMap dm = build_dofmap(mesh, pair);
      std::vector<double> coeffs(dm.n_flux);
      for (int i = 0; i < dm.n_flux; ++i) coeffs[i] = std::sin(1.0 + i);
      std::vector<std::vector<std::pair<int, int>>> touch(mesh.num_edges());
      for (int t = 0; t < mesh.num_triangles(); ++t)
        for (int k = 0; k < 3; ++k) touch[mesh.triangle_edges[t][k]].push_back({t, k});
      std::vector<double> gn, gw;
      gauss_legendre_01(2, gn, gw);
      for (int e = 0; e < mesh.num_edges(); ++e) {
        if (touch[e].size() != 2) continue;
        Point a = mesh.vertices[mesh.edges[e][0]];
        Point b = mesh.vertices[mesh.edges[e][1]];
        double nx = b.y - a.y, ny = a.x - b.x;
        for (double s : gn) {
          Point p{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
          auto v0 = eval_flux_field(mesh, dm, pair, coeffs, touch[e][0].first, p);
          auto v1 = eval_flux_field(mesh, dm, pair, coeffs, touch[e][1].first, p);
          if (std::abs((v0[0] - v1[0]) * nx + (v0[1] - v1[1]) * ny) > 1e-11)
            expect(false, "normal continuity fails across edge " + std::to_string(e));
        }
      }
    }
  }

  // A/M positive definiteness, dense eigencheck
  for (ElementKind kind : {ElementKind::RT0_P0, ElementKind::RT1_P1dc}) {
    Mesh mesh = build_uniform(4);
    ElementPair pair{kind};
    DofMap dm = build_dofmap(mesh, pair);
    SystemMatrices mats = assemble(mesh, dm, pair, one, drift);
    for (const SparseMatrix* m : {&mats.A, &mats.M}) {
      Eigen::MatrixXd d = to_dense(*m);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
      expect((d - d.transpose()).cwiseAbs().maxCoeff() < 1e-13 &&
                 es.eigenvalues().minCoeff() > 0.0,
             "A or M is not symmetric positive definite");
    }
  }

  // divergence-theorem column sums of B
  {
    Mesh mesh = build_uniform(3);
    for (ElementKind kind : {ElementKind::RT0_P0, ElementKind::RT1_P1dc}) {
      ElementPair pair{kind};
      DofMap dm = build_dofmap(mesh, pair);
      SystemMatrices mats = assemble(mesh, dm, pair, one, drift);
      Eigen::VectorXd colsum = to_dense(mats.B).colwise().sum();
      int per_edge = pair.flux_dofs_per_edge();
      for (int e = 0; e < mesh.num_edges(); ++e) {
        double expect_abs = mesh.boundary_flags[e] ? 1.0 : 0.0;
        if (std::abs(std::abs(colsum(per_edge * e)) - expect_abs) > 1e-12)
          expect(false, "B column sum violates the divergence theorem");
        if (per_edge == 2 && std::abs(colsum(per_edge * e + 1)) > 1e-12)
          expect(false, "odd edge moment has nonzero net flux");
      }
      for (int j = per_edge * mesh.num_edges(); j < dm.n_flux; ++j)
        if (std::abs(colsum(j)) > 1e-12)
          expect(false, "interior dof has nonzero net flux");
    }
  }

  // alpha = 1 classical equivalence, zero fixed point, factor-once equivalence
  {
    Mesh mesh = build_uniform(2);
    ElementPair pair{ElementKind::RT0_P0};
    DofMap dm = build_dofmap(mesh, pair);
    SystemMatrices mats = assemble(mesh, dm, pair, one, drift);
    const int nf = dm.n_flux, ns = dm.n_scalar;

    SchemeConfig cfg;
    cfg.alpha = 1.0;
    cfg.final_time = 0.5;
    cfg.steps = 10;
    cfg.pair = pair;
    const double tau = cfg.tau();
    std::vector<double> u0 = project_scalar(
        mesh, pair, [](double x, double y) { return x * (1.0 - x) * y; }, {4, true});
    BecqStepper stepper(mats, cfg, u0);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nf + ns, nf + ns);
    K.topLeftCorner(nf, nf) = to_dense(mats.A);
    K.topRightCorner(nf, ns) = -(to_dense(mats.B).transpose() + to_dense(mats.G));
    K.bottomLeftCorner(ns, nf) = to_dense(mats.B);
    K.bottomRightCorner(ns, ns) = to_dense(mats.M) / tau;
    Eigen::MatrixXd M = to_dense(mats.M);
    Eigen::VectorXd U = Eigen::Map<const Eigen::VectorXd>(u0.data(), ns);
    auto lu = K.fullPivLu();
    for (int n = 1; n <= cfg.steps; ++n) {
      stepper.advance();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf + ns);
      rhs.tail(ns) = M * U / tau;
      U = lu.solve(rhs).tail(ns);
      for (int i = 0; i < ns; ++i)
        if (std::abs(stepper.current_scalar()[i] - U(i)) > 1e-9)
          expect(false, "alpha = 1 scheme deviates from classical backward Euler");
    }

    cfg.alpha = 0.5;
    BecqStepper zero(mats, cfg, std::vector<double>(ns, 0.0));
    for (int n = 1; n <= cfg.steps; ++n) {
      zero.advance();
      for (double v : zero.current_scalar())
        if (v != 0.0) expect(false, "zero data is not a fixed point");
    }

    // factor-once equivalence: a freshly factorized system per step gives the
    // same trajectory as the reused factorization
    BecqStepper reused(mats, cfg, u0);
    const auto cq = cq_weight_sequence(cfg.alpha, cfg.steps + 1);
    const double c0 = std::pow(cfg.tau(), -cfg.alpha);
    std::vector<std::vector<double>> hist{u0};
    for (int n = 1; n <= cfg.steps; ++n) {
      reused.advance();
      Factorization fresh = build_system(mats, cfg.alpha, cfg.tau());
      std::vector<double> conv(ns, 0.0);
      for (int k = 1; k <= n; ++k)
        for (int i = 0; i < ns; ++i)
          conv[i] += cq[k] * (hist[n - k][i] - u0[i]);
      auto mconv = mats.M.multiply(conv);
      auto mu0 = mats.M.multiply(u0);
      std::vector<double> rhs(nf + ns, 0.0);
      for (int i = 0; i < ns; ++i) rhs[nf + i] = c0 * (mu0[i] - mconv[i]);
      auto sol = fresh.solve(rhs);
      hist.emplace_back(sol.begin() + nf, sol.end());
      for (int i = 0; i < ns; ++i)
        if (std::abs(reused.current_scalar()[i] - hist[n][i]) > 1e-12)
          expect(false, "factor-once trajectory deviates from per-step factorization");
    }
  }
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  run_criterion(1, "convolution-quadrature weight identities", criterion1);
  run_criterion(2, "Mittag-Leffler accuracy", criterion2);
  run_criterion(3, "scalar fractional relaxation orders", criterion3);
  run_criterion(4, "hat-data space study, second-order pair", criterion4);
  run_criterion(5, "hat-data time study, first-order in tau", criterion5);
  run_criterion(6, "indicator-data space study, reduced flux order", criterion6);
  run_criterion(7, "polynomial-data self-convergence studies", criterion7);
  run_criterion(8, "structural invariant suite", criterion8);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s (%d failed checks, %.0f s)\n",
              total_failures == 0 ? "ALL CRITERIA PASSED" : "ACCEPTANCE FAILED",
              total_failures, secs);
  return total_failures == 0 ? 0 : 1;
}
