#include "fracflow/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "fracflow/quadrature.hpp"
#include "fracflow/stepper.hpp"

namespace fracflow {

std::vector<Point> mesh_quad_points(const Mesh& mesh, int quad_degree) {
  const auto& qr = rule(quad_degree);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(mesh.num_triangles()) * qr.size());
  for (int t = 0; t < mesh.num_triangles(); ++t)
    for (const auto& pq : map_to_physical(qr, mesh.triangle_points(t)))
      pts.push_back(pq.point);
  return pts;
}

double l2_error_scalar_values(const Mesh& mesh, const DofMap& dofmap, const ElementPair& pair,
                              const std::vector<double>& coeffs,
                              const std::vector<double>& exact_values, int quad_degree) {
  const auto& qr = rule(quad_degree);
  double acc = 0.0;
  std::size_t p = 0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    auto tri = mesh.triangle_points(t);
    for (const auto& pq : map_to_physical(qr, tri)) {
      double num = 0.0;
      for (int i = 0; i < pair.local_scalar_dim(); ++i)
        num += coeffs[dofmap.scalar_globals[t][i]] * scalar_basis(pair, tri, i, pq.point);
      double d = num - exact_values[p++];
      acc += pq.weight * d * d;
    }
  }
  return std::sqrt(acc);
}

double l2_error_flux_values(const Mesh& mesh, const DofMap& dofmap, const ElementPair& pair,
                            const std::vector<double>& coeffs,
                            const std::vector<std::array<double, 2>>& exact_values,
                            int quad_degree) {
  const auto& qr = rule(quad_degree);
  double acc = 0.0;
  std::size_t p = 0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    auto tri = mesh.triangle_points(t);
    FluxBasis fb(pair.kind, tri);
    for (const auto& pq : map_to_physical(qr, tri)) {
      double nx = 0.0, ny = 0.0;
      for (int i = 0; i < pair.local_flux_dim(); ++i) {
        double c = dofmap.flux_signs[t][i] * coeffs[dofmap.flux_globals[t][i]];
        auto b = fb.eval(i, pq.point);
        nx += c * b.vx;
        ny += c * b.vy;
      }
      double dx = nx - exact_values[p][0];
      double dy = ny - exact_values[p][1];
      ++p;
      acc += pq.weight * (dx * dx + dy * dy);
    }
  }
  return std::sqrt(acc);
}

double l2_error_scalar(const Mesh& mesh, const DofMap& dofmap, const ElementPair& pair,
                       const std::vector<double>& coeffs, const ScalarField& exact,
                       int quad_degree) {
  auto pts = mesh_quad_points(mesh, quad_degree);
  std::vector<double> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = exact(pts[i].x, pts[i].y);
  return l2_error_scalar_values(mesh, dofmap, pair, coeffs, vals, quad_degree);
}

double l2_error_flux(const Mesh& mesh, const DofMap& dofmap, const ElementPair& pair,
                     const std::vector<double>& coeffs, const FluxField& exact,
                     int quad_degree) {
  auto pts = mesh_quad_points(mesh, quad_degree);
  std::vector<std::array<double, 2>> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = exact(pts[i].x, pts[i].y);
  return l2_error_flux_values(mesh, dofmap, pair, coeffs, vals, quad_degree);
}

ReferenceErrors reference_compare(const FieldPair& coarse, const FieldPair& reference) {
  const int nc = coarse.mesh.subdivisions;
  const int nr = reference.mesh.subdivisions;
  if (nr < nc || nr % nc != 0)
    throw std::invalid_argument("reference_compare: meshes are not nested");

  // Integrate over the reference triangles, where both discrete fields are
  // polynomial; degree 5 covers the squared RT1 integrands exactly.
  const auto& qr = rule(5);
  double acc_u = 0.0, acc_s = 0.0;
  for (int tr = 0; tr < reference.mesh.num_triangles(); ++tr) {
    auto tri = reference.mesh.triangle_points(tr);
    Point centroid{(tri[0].x + tri[1].x + tri[2].x) / 3.0,
                   (tri[0].y + tri[1].y + tri[2].y) / 3.0};
    int tc = locate_triangle(coarse.mesh, centroid.x, centroid.y);
    auto ctri = coarse.mesh.triangle_points(tc);
    FluxBasis fb_r(reference.pair.kind, tri);
    FluxBasis fb_c(coarse.pair.kind, ctri);
    for (const auto& pq : map_to_physical(qr, tri)) {
      double ur = eval_scalar_field(reference.mesh, reference.dofmap, reference.pair,
                                    reference.scalar_coeffs, tr, pq.point);
      double uc = eval_scalar_field(coarse.mesh, coarse.dofmap, coarse.pair,
                                    coarse.scalar_coeffs, tc, pq.point);
      auto sr = eval_flux_field(reference.mesh, reference.dofmap, reference.pair,
                                reference.flux_coeffs, tr, pq.point, &fb_r);
      auto sc = eval_flux_field(coarse.mesh, coarse.dofmap, coarse.pair, coarse.flux_coeffs,
                                tc, pq.point, &fb_c);
      double du = uc - ur;
      double dsx = sc[0] - sr[0], dsy = sc[1] - sr[1];
      acc_u += pq.weight * du * du;
      acc_s += pq.weight * (dsx * dsx + dsy * dsy);
    }
  }
  return {std::sqrt(acc_u), std::sqrt(acc_s)};
}

namespace {

std::string element_name(const ElementPair& pair) {
  return pair.kind == ElementKind::RT0_P0 ? "rt0" : "rt1";
}

void fill_observed_orders(ConvergenceReport& report) {
  for (std::size_t k = 1; k < report.rows.size(); ++k) {
    auto& prev = report.rows[k - 1];
    auto& row = report.rows[k];
    if (!prev.failure.empty() || !row.failure.empty()) continue;
    double ratio = std::log(prev.h_or_tau / row.h_or_tau);
    if (ratio <= 0.0) continue;
    if (prev.err_u > 0.0 && row.err_u > 0.0)
      row.oc_u = std::log(prev.err_u / row.err_u) / ratio;
    if (prev.err_sigma > 0.0 && row.err_sigma > 0.0)
      row.oc_sigma = std::log(prev.err_sigma / row.err_sigma) / ratio;
  }
}

struct SolveOutput {
  DofMap dofmap;
  std::vector<double> u;
  std::vector<double> sigma;
};

// Recovers the flux at an arbitrary step from the scalar unknowns via the
// flux-row equation A Sigma = (B^T + G) U, which every step satisfies.
std::vector<double> flux_from_scalar(const SystemMatrices& mats, const std::vector<double>& u) {
  auto rhs = mats.B.multiply_transpose(u);
  auto gu = mats.G.multiply(u);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += gu[i];
  return Factorization(mats.A).solve(rhs);
}

SolveOutput solve_case(const ProblemSpec& problem, const Mesh& mesh, const ElementPair& pair,
                       int steps, SourceMode source_mode, int eval_step = -1) {
  SchemeConfig cfg;
  cfg.alpha = problem.alpha;
  cfg.final_time = problem.final_time;
  cfg.steps = steps;
  cfg.pair = pair;
  cfg.source_mode = source_mode;
  StepperState state = run(problem, mesh, pair, cfg);
  SolveOutput out;
  out.dofmap = build_dofmap(mesh, pair);
  if (eval_step < 0 || eval_step == steps) {
    out.u = state.scalar_history.back();
    out.sigma = std::move(state.flux);
  } else {
    out.u = state.scalar_history.at(eval_step);
    out.sigma = flux_from_scalar(state.matrices, out.u);
  }
  return out;
}

// Error norms against the series fields. On coarse meshes a single degree-8
// rule cannot resolve the oscillatory series tail, so the integration runs on
// a red-refined copy of the mesh (cells of size <= 1/16); the discrete fields
// stay polynomial on each parent triangle, so only the series gains accuracy.
void exact_errors(const ProblemSpec& problem, const Mesh& mesh, const ElementPair& pair,
                  const SolveOutput& sol, double t, double& err_u, double& err_sigma) {
  const int degree = 8;
  int refinements = 0;
  Mesh fine = mesh;
  while (fine.subdivisions < 16) {
    fine = red_refine(fine);
    ++refinements;
  }
  auto pts = mesh_quad_points(fine, degree);
  SeriesBatchEvaluator eval(*problem.series, problem.alpha, pts);
  std::vector<double> uvals;
  std::vector<std::array<double, 2>> svals;
  eval.eval_u(t, uvals);
  eval.eval_flux(t, problem.F, svals);

  const auto& qr = rule(degree);
  double acc_u = 0.0, acc_s = 0.0;
  std::size_t p = 0;
  for (int tc = 0; tc < fine.num_triangles(); ++tc) {
    int tp = tc >> (2 * refinements);  // red refinement appends children 4t..4t+3
    FluxBasis fb(pair.kind, mesh.triangle_points(tp));
    for (const auto& pq : map_to_physical(qr, fine.triangle_points(tc))) {
      double du = eval_scalar_field(mesh, sol.dofmap, pair, sol.u, tp, pq.point) - uvals[p];
      auto sh = eval_flux_field(mesh, sol.dofmap, pair, sol.sigma, tp, pq.point, &fb);
      double dsx = sh[0] - svals[p][0], dsy = sh[1] - svals[p][1];
      ++p;
      acc_u += pq.weight * du * du;
      acc_s += pq.weight * (dsx * dsx + dsy * dsy);
    }
  }
  err_u = std::sqrt(acc_u);
  err_sigma = std::sqrt(acc_s);
}

}  // namespace

int space_subdivisions(int example, int level) {
  if (example == 1) {
    if (level < 0) throw std::invalid_argument("space_subdivisions: level must be >= 0");
    return 1 << (level + 1);
  }
  if (level < 1) throw std::invalid_argument("space_subdivisions: level must be >= 1");
  return 1 << (level - 1);
}

ConvergenceReport space_study(const StudyConfig& cfg) {
  if (cfg.levels.empty()) throw std::invalid_argument("space_study: no levels given");
  for (std::size_t i = 1; i < cfg.levels.size(); ++i)
    if (cfg.levels[i] <= cfg.levels[i - 1])
      throw std::invalid_argument("space_study: levels must be strictly increasing");

  auto t0 = std::chrono::steady_clock::now();
  ConvergenceReport report;
  report.study_case = "example" + std::to_string(cfg.example) + "-space";
  report.element = element_name(cfg.pair);
  report.axis = StudyAxis::Space;
  report.example = cfg.example;
  report.series_max_index = cfg.series_max_index;
  report.convention = cfg.convention == SignConvention::Separable ? "separable" : "product";
  report.fixed_tau = cfg.tau;
  int steps = static_cast<int>(std::lround(cfg.final_time / cfg.tau));

  for (double alpha : cfg.alphas) {
    ProblemSpec problem = make_example(cfg.example, alpha, cfg.series_max_index, cfg.convention);
    problem.final_time = cfg.final_time;

    // Example 1 has no exact solution; compare against a reference level.
    std::optional<Mesh> ref_mesh;
    std::optional<SolveOutput> ref_sol;
    if (!problem.has_exact()) {
      ref_mesh = level_mesh(cfg.reference_level);
      ref_sol = solve_case(problem, *ref_mesh, cfg.pair, steps, cfg.source_mode);
    }

    std::vector<ReportRow> rows;
    for (int level : cfg.levels) {
      ReportRow row;
      row.alpha = alpha;
      row.level_or_n = level;
      row.h_or_tau = 1.0 / space_subdivisions(cfg.example, level);
      try {
        Mesh mesh = build_uniform(space_subdivisions(cfg.example, level));
        SolveOutput sol = solve_case(problem, mesh, cfg.pair, steps, cfg.source_mode);
        if (problem.has_exact()) {
          exact_errors(problem, mesh, cfg.pair, sol, problem.final_time, row.err_u,
                       row.err_sigma);
        } else {
          ReferenceErrors e = reference_compare(
              {mesh, sol.dofmap, cfg.pair, sol.u, sol.sigma},
              {*ref_mesh, ref_sol->dofmap, cfg.pair, ref_sol->u, ref_sol->sigma});
          row.err_u = e.err_u;
          row.err_sigma = e.err_sigma;
        }
      } catch (const std::exception& e) {
        row.failure = e.what();
      }
      rows.push_back(std::move(row));
    }
    ConvergenceReport sub;
    sub.rows = std::move(rows);
    fill_observed_orders(sub);
    report.rows.insert(report.rows.end(), sub.rows.begin(), sub.rows.end());
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

ConvergenceReport time_study(const StudyConfig& cfg) {
  if (cfg.step_counts.empty()) throw std::invalid_argument("time_study: no N values given");
  for (std::size_t i = 1; i < cfg.step_counts.size(); ++i)
    if (cfg.step_counts[i] <= cfg.step_counts[i - 1])
      throw std::invalid_argument("time_study: N values must be strictly increasing");
  if (cfg.example == 1)
    throw std::invalid_argument("time_study: Example 1 has no exact solution in time");

  auto t0 = std::chrono::steady_clock::now();
  ConvergenceReport report;
  report.study_case = "example" + std::to_string(cfg.example) + "-time";
  report.element = element_name(cfg.pair);
  report.axis = StudyAxis::Time;
  report.example = cfg.example;
  report.series_max_index = cfg.series_max_index;
  report.convention = cfg.convention == SignConvention::Separable ? "separable" : "product";
  report.fixed_level = cfg.fixed_level;

  Mesh mesh = level_mesh(cfg.fixed_level);
  for (double alpha : cfg.alphas) {
    ProblemSpec problem = make_example(cfg.example, alpha, cfg.series_max_index, cfg.convention);
    problem.final_time = cfg.final_time;
    std::vector<ReportRow> rows;
    for (int n : cfg.step_counts) {
      ReportRow row;
      row.alpha = alpha;
      row.level_or_n = n;
      row.h_or_tau = cfg.final_time / n;
      try {
        double t_eval = cfg.eval_time > 0.0 ? cfg.eval_time : cfg.final_time;
        double tau = cfg.final_time / n;
        int eval_step = static_cast<int>(std::lround(t_eval / tau));
        if (eval_step < 1 || std::abs(eval_step * tau - t_eval) > 1e-9 * cfg.final_time)
          throw std::invalid_argument("time_study: eval_time is not a step point of N=" +
                                      std::to_string(n));
        SolveOutput sol = solve_case(problem, mesh, cfg.pair, n, cfg.source_mode, eval_step);
        exact_errors(problem, mesh, cfg.pair, sol, t_eval, row.err_u, row.err_sigma);
      } catch (const std::exception& e) {
        row.failure = e.what();
      }
      rows.push_back(std::move(row));
    }
    ConvergenceReport sub;
    sub.rows = std::move(rows);
    fill_observed_orders(sub);
    report.rows.insert(report.rows.end(), sub.rows.begin(), sub.rows.end());
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

namespace {

std::string fmt(double v, const char* spec = "%.12e") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

std::string report_to_csv(const ConvergenceReport& report) {
  std::string out = "case,alpha,element,level_or_n,h_or_tau,err_u,oc_u,err_sigma,oc_sigma\n";
  for (const auto& r : report.rows) {
    out += report.study_case + "," + fmt(r.alpha, "%.4g") + "," + report.element + "," +
           std::to_string(r.level_or_n) + "," + fmt(r.h_or_tau) + "," + fmt(r.err_u) + "," +
           (r.oc_u ? fmt(*r.oc_u, "%.6f") : "") + "," + fmt(r.err_sigma) + "," +
           (r.oc_sigma ? fmt(*r.oc_sigma, "%.6f") : "") + "\n";
  }
  return out;
}

std::string report_to_json(const ConvergenceReport& report) {
  nlohmann::json j;
  j["case"] = report.study_case;
  j["element"] = report.element;
  j["axis"] = report.axis == StudyAxis::Space ? "space" : "time";
  j["example"] = report.example;
  j["series_max_index"] = report.series_max_index;
  j["convention"] = report.convention;
  j["fixed_tau"] = report.fixed_tau;
  j["fixed_level"] = report.fixed_level;
  j["wall_seconds"] = report.wall_seconds;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row;
    row["alpha"] = r.alpha;
    row["level_or_n"] = r.level_or_n;
    row["h_or_tau"] = r.h_or_tau;
    row["err_u"] = r.err_u;
    row["err_sigma"] = r.err_sigma;
    if (r.oc_u) row["oc_u"] = *r.oc_u;
    if (r.oc_sigma) row["oc_sigma"] = *r.oc_sigma;
    if (!r.failure.empty()) row["failure"] = r.failure;
    j["rows"].push_back(row);
  }
  return j.dump(2);
}

ConvergenceReport report_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  ConvergenceReport report;
  report.study_case = j.at("case").get<std::string>();
  report.element = j.at("element").get<std::string>();
  report.axis = j.at("axis").get<std::string>() == "space" ? StudyAxis::Space : StudyAxis::Time;
  report.example = j.at("example").get<int>();
  report.series_max_index = j.at("series_max_index").get<int>();
  report.convention = j.at("convention").get<std::string>();
  report.fixed_tau = j.at("fixed_tau").get<double>();
  report.fixed_level = j.at("fixed_level").get<int>();
  report.wall_seconds = j.at("wall_seconds").get<double>();
  for (const auto& row : j.at("rows")) {
    ReportRow r;
    r.alpha = row.at("alpha").get<double>();
    r.level_or_n = row.at("level_or_n").get<int>();
    r.h_or_tau = row.at("h_or_tau").get<double>();
    r.err_u = row.at("err_u").get<double>();
    r.err_sigma = row.at("err_sigma").get<double>();
    if (row.contains("oc_u")) r.oc_u = row.at("oc_u").get<double>();
    if (row.contains("oc_sigma")) r.oc_sigma = row.at("oc_sigma").get<double>();
    if (row.contains("failure")) r.failure = row.at("failure").get<std::string>();
    report.rows.push_back(std::move(r));
  }
  return report;
}

std::string report_to_plot_script(const ConvergenceReport& report,
                                  const std::string& csv_path) {
  std::string xlabel = report.axis == StudyAxis::Space ? "h" : "tau";
  std::string out;
  out += "set datafile separator ','\n";
  out += "set logscale xy\n";
  out += "set xlabel '" + xlabel + "'\n";
  out += "set ylabel 'L2 error'\n";
  out += "set key left top\n";
  out += "set title '" + report.study_case + " (" + report.element + ")'\n";
  out += "plot '" + csv_path + "' using 5:6 skip 1 with linespoints title 'u', \\\n";
  out += "     '" + csv_path + "' using 5:8 skip 1 with linespoints title 'sigma', \\\n";
  out += "     x with lines dashtype 2 title 'slope 1', \\\n";
  out += "     x**2 with lines dashtype 3 title 'slope 2'\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace fracflow
