// fracflow command line driver: convergence sweeps, single solves, mesh and
// Mittag-Leffler diagnostics.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "fracflow/harness.hpp"
#include "fracflow/mittag_leffler.hpp"
#include "fracflow/stepper.hpp"

using namespace fracflow;

namespace {

ElementPair parse_element(const std::string& name) {
  if (name == "rt0") return ElementPair{ElementKind::RT0_P0};
  if (name == "rt1") return ElementPair{ElementKind::RT1_P1dc};
  throw CLI::ValidationError("--element", "must be rt0 or rt1");
}

SignConvention parse_convention(const std::string& name) {
  if (name == "separable") return SignConvention::Separable;
  if (name == "product") return SignConvention::ProductParity;
  throw CLI::ValidationError("--convention", "must be separable or product");
}

int run_convergence(const StudyConfig& cfg, StudyAxis axis, const std::string& out_csv,
                    const std::string& out_json, const std::string& out_plot) {
  ConvergenceReport report = axis == StudyAxis::Space ? space_study(cfg) : time_study(cfg);

  std::string csv = report_to_csv(report);
  if (out_csv.empty()) {
    std::cout << csv;
  } else {
    write_text_file(out_csv, csv);
    std::cout << "wrote " << out_csv << "\n";
  }
  if (!out_json.empty()) {
    write_text_file(out_json, report_to_json(report));
    std::cout << "wrote " << out_json << "\n";
  }
  if (!out_plot.empty()) {
    write_text_file(out_plot, report_to_plot_script(report, out_csv.empty() ? "report.csv"
                                                                            : out_csv));
    std::cout << "wrote " << out_plot << "\n";
  }
  std::fprintf(stderr, "%s: %zu rows in %.1f s\n", report.study_case.c_str(),
               report.rows.size(), report.wall_seconds);

  for (const auto& row : report.rows)
    if (!row.failure.empty()) {
      std::fprintf(stderr, "row alpha=%g %s=%d failed: %s\n", row.alpha,
                   axis == StudyAxis::Space ? "level" : "N", row.level_or_n,
                   row.failure.c_str());
      return 1;
    }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed FEM / convolution-quadrature solver for the fractional "
               "Fokker-Planck equation on the unit square"};
  app.require_subcommand(1);

  // convergence
  auto* conv = app.add_subcommand("convergence", "Run a space or time refinement study");
  int example = 2;
  std::string study = "space";
  std::vector<double> alphas = {0.3, 0.7};
  std::string element = "rt0";
  std::vector<int> levels;
  std::vector<int> nsteps;
  double tau = 1.0 / 1200.0;
  int fixed_level = 4;
  int reference_level = 6;
  int series_m = 64;
  std::string convention = "separable";
  double final_time = 0.5;
  std::string out_csv, out_json, out_plot;
  conv->add_option("--example", example, "Benchmark problem (1, 2 or 3)")
      ->check(CLI::Range(1, 3));
  conv->add_option("--study", study, "space or time")
      ->check(CLI::IsMember({"space", "time"}));
  conv->add_option("--alpha", alphas, "Fractional orders")->delimiter(',');
  conv->add_option("--element", element, "rt0 or rt1")
      ->check(CLI::IsMember({"rt0", "rt1"}));
  conv->add_option("--levels", levels, "Mesh levels for a space study")->delimiter(',');
  conv->add_option("--nsteps", nsteps, "Step counts N for a time study")->delimiter(',');
  conv->add_option("--tau", tau, "Fixed time step for space studies");
  conv->add_option("--fixed-level", fixed_level, "Mesh level for time studies");
  conv->add_option("--reference-level", reference_level,
                   "Reference mesh level for Example 1");
  conv->add_option("--series-m", series_m, "Series truncation index M");
  conv->add_option("--convention", convention, "separable or product")
      ->check(CLI::IsMember({"separable", "product"}));
  conv->add_option("--final-time", final_time, "Final time T");
  double eval_time = 0.05;
  conv->add_option("--eval-time", eval_time,
                   "Error evaluation time for time studies (<= 0: final time)");
  std::string source = "exact";
  conv->add_option("--source", source,
                   "Source handling: exact (closed-form Caputo source) or cq "
                   "(discrete fractional integral of the sampled RL source)")
      ->check(CLI::IsMember({"exact", "cq"}));
  conv->add_option("--out", out_csv, "CSV output path (stdout if omitted)");
  conv->add_option("--json", out_json, "JSON report path");
  conv->add_option("--plot", out_plot, "Gnuplot script path");

  // run
  auto* single = app.add_subcommand("run", "Single solve, printing final-time errors");
  int run_example = 2;
  double run_alpha = 0.5;
  std::string run_element = "rt0";
  int run_level = 3;
  int run_nsteps = 100;
  int run_series_m = 64;
  std::string run_convention = "separable";
  double run_final_time = 0.5;
  single->add_option("--example", run_example)->check(CLI::Range(1, 3));
  single->add_option("--alpha", run_alpha)->check(CLI::Range(0.0, 1.0));
  single->add_option("--element", run_element)->check(CLI::IsMember({"rt0", "rt1"}));
  single->add_option("--level", run_level)->check(CLI::Range(0, 8));
  single->add_option("--nsteps", run_nsteps)->check(CLI::PositiveNumber);
  single->add_option("--series-m", run_series_m);
  single->add_option("--convention", run_convention)
      ->check(CLI::IsMember({"separable", "product"}));
  single->add_option("--final-time", run_final_time);

  // mesh info
  auto* mesh_cmd = app.add_subcommand("mesh", "Mesh utilities");
  auto* mesh_info = mesh_cmd->add_subcommand("info", "Entity counts at a level");
  int mesh_level = 0;
  mesh_info->add_option("--level", mesh_level, "Refinement level")->required();

  // ml-eval
  auto* mleval = app.add_subcommand("ml-eval", "Evaluate E_{alpha,beta}(z), z <= 0");
  double ml_alpha = 0.5, ml_beta = 1.0, ml_z = 0.0;
  mleval->add_option("--alpha", ml_alpha)->required();
  mleval->add_option("--beta", ml_beta)->required();
  mleval->add_option("--z", ml_z)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*conv) {
      StudyConfig cfg;
      cfg.example = example;
      cfg.alphas = alphas;
      cfg.pair = parse_element(element);
      cfg.axis = study == "space" ? StudyAxis::Space : StudyAxis::Time;
      cfg.levels = levels;
      cfg.step_counts = nsteps;
      cfg.tau = tau;
      cfg.fixed_level = fixed_level;
      cfg.reference_level = reference_level;
      cfg.series_max_index = series_m;
      cfg.convention = parse_convention(convention);
      cfg.final_time = final_time;
      cfg.eval_time = eval_time;
      cfg.source_mode = source == "cq" ? SourceMode::CqIntegral : SourceMode::ClosedForm;
      if (cfg.axis == StudyAxis::Space && cfg.levels.empty()) cfg.levels = {1, 2, 3, 4};
      if (cfg.axis == StudyAxis::Time && cfg.step_counts.empty())
        cfg.step_counts = {10, 20, 40, 80, 160};
      return run_convergence(cfg, cfg.axis, out_csv, out_json, out_plot);
    }

    if (*single) {
      ProblemSpec problem =
          make_example(run_example, run_alpha, run_series_m, parse_convention(run_convention));
      problem.final_time = run_final_time;
      Mesh mesh = level_mesh(run_level);
      ElementPair pair = parse_element(run_element);
      SchemeConfig scfg;
      scfg.alpha = run_alpha;
      scfg.final_time = run_final_time;
      scfg.steps = run_nsteps;
      scfg.pair = pair;
      StepperState state = run(problem, mesh, pair, scfg);
      DofMap dofmap = build_dofmap(mesh, pair);
      std::printf("example=%d alpha=%g element=%s level=%d (n=%d) N=%d\n", run_example,
                  run_alpha, run_element.c_str(), run_level, mesh.subdivisions, run_nsteps);
      std::printf("dofs: flux=%d scalar=%d\n", dofmap.n_flux, dofmap.n_scalar);
      if (problem.has_exact()) {
        const auto& u = state.scalar_history.back();
        double eu = l2_error_scalar(mesh, dofmap, pair, u, [&](double x, double y) {
          return eval_exact_u(problem, x, y, run_final_time);
        });
        double es = l2_error_flux(mesh, dofmap, pair, state.flux, [&](double x, double y) {
          return eval_exact_flux(problem, x, y, run_final_time);
        });
        std::printf("err_u=%.6e err_sigma=%.6e\n", eu, es);
      } else {
        std::printf("no exact solution for this example; use a convergence study\n");
      }
      return 0;
    }

    if (*mesh_info) {
      Mesh mesh = level_mesh(mesh_level);
      int boundary = 0;
      for (bool b : mesh.boundary_flags) boundary += b;
      std::printf("level=%d n=%d vertices=%d edges=%d (boundary=%d) triangles=%d\n",
                  mesh_level, mesh.subdivisions, mesh.num_vertices(), mesh.num_edges(),
                  boundary, mesh.num_triangles());
      return 0;
    }

    if (*mleval) {
      std::printf("%.15e\n", ml(ml_alpha, ml_beta, ml_z));
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
