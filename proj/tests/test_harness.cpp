#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fracflow/harness.hpp"
#include "fracflow/quadrature.hpp"

using namespace fracflow;

TEST_CASE("error norms vanish for fields the space represents exactly") {
  Mesh mesh = build_uniform(3);
  {
    ElementPair pair{ElementKind::RT0_P0};
    DofMap dm = build_dofmap(mesh, pair);
    std::vector<double> u(dm.n_scalar, 0.7);
    CHECK(l2_error_scalar(mesh, dm, pair, u, [](double, double) { return 0.7; }) < 1e-14);
  }
  {
    ElementPair pair{ElementKind::RT1_P1dc};
    DofMap dm = build_dofmap(mesh, pair);
    auto f = [](double x, double y) { return 1.0 + 2.0 * x - y; };
    auto u = project_scalar(mesh, pair, f, {2, true});
    CHECK(l2_error_scalar(mesh, dm, pair, u, f) < 1e-13);
  }
}

TEST_CASE("error norms reproduce known distances") {
  Mesh mesh = build_uniform(2);
  ElementPair pair{ElementKind::RT0_P0};
  DofMap dm = build_dofmap(mesh, pair);
  std::vector<double> zero_u(dm.n_scalar, 0.0);
  CHECK(l2_error_scalar(mesh, dm, pair, zero_u, [](double, double) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-13));
  std::vector<double> zero_s(dm.n_flux, 0.0);
  CHECK(l2_error_flux(mesh, dm, pair, zero_s,
                      [](double, double) { return std::array<double, 2>{3.0, 4.0}; }) ==
        doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("precomputed-value variants agree with the callback variants") {
  Mesh mesh = build_uniform(2);
  ElementPair pair{ElementKind::RT1_P1dc};
  DofMap dm = build_dofmap(mesh, pair);
  auto f = [](double x, double y) { return std::sin(2.0 * x) + y * y; };
  auto fs = [](double x, double y) { return std::array<double, 2>{x * y, std::cos(y)}; };
  auto u = project_scalar(mesh, pair, f);
  std::vector<double> sig(dm.n_flux, 0.0);

  auto pts = mesh_quad_points(mesh, 8);
  CHECK(static_cast<int>(pts.size()) == mesh.num_triangles() * rule(8).size());
  std::vector<double> fv;
  std::vector<std::array<double, 2>> sv;
  for (const auto& p : pts) {
    fv.push_back(f(p.x, p.y));
    sv.push_back(fs(p.x, p.y));
  }
  CHECK(l2_error_scalar_values(mesh, dm, pair, u, fv) ==
        doctest::Approx(l2_error_scalar(mesh, dm, pair, u, f)).epsilon(1e-13));
  CHECK(l2_error_flux_values(mesh, dm, pair, sig, sv) ==
        doctest::Approx(l2_error_flux(mesh, dm, pair, sig, fs)).epsilon(1e-13));
}

TEST_CASE("reference comparison of nested discrete fields") {
  Mesh coarse = build_uniform(2);
  Mesh fine = build_uniform(8);
  ElementPair pair{ElementKind::RT0_P0};
  DofMap dmc = build_dofmap(coarse, pair);
  DofMap dmf = build_dofmap(fine, pair);
  std::vector<double> uc(dmc.n_scalar, 0.7), uf(dmf.n_scalar, 0.7);
  std::vector<double> sc(dmc.n_flux, 0.0), sf(dmf.n_flux, 0.0);
  FieldPair a{coarse, dmc, pair, uc, sc};
  FieldPair b{fine, dmf, pair, uf, sf};
  ReferenceErrors same = reference_compare(a, b);
  CHECK(same.err_u < 1e-14);
  CHECK(same.err_sigma < 1e-14);

  std::vector<double> uf0(dmf.n_scalar, 0.0);
  FieldPair c{fine, dmf, pair, uf0, sf};
  CHECK(reference_compare(a, c).err_u == doctest::Approx(0.7).epsilon(1e-13));

  Mesh odd = build_uniform(3);
  DofMap dmo = build_dofmap(odd, pair);
  std::vector<double> uo(dmo.n_scalar, 0.0), so(dmo.n_flux, 0.0);
  FieldPair d{odd, dmo, pair, uo, so};
  CHECK_THROWS(reference_compare(a, d));  // not nested
}

TEST_CASE("level-to-grid conventions") {
  CHECK(space_subdivisions(1, 6) == 128);
  CHECK(space_subdivisions(1, 0) == 2);
  CHECK(space_subdivisions(2, 1) == 1);
  CHECK(space_subdivisions(2, 4) == 8);
  CHECK(space_subdivisions(3, 5) == 16);
  CHECK_THROWS(space_subdivisions(2, 0));
  CHECK_THROWS(space_subdivisions(1, -1));
}

TEST_CASE("small space study: decreasing errors, orders, CSV and JSON round trip") {
  StudyConfig cfg;
  cfg.example = 2;
  cfg.alphas = {0.5};
  cfg.pair = ElementPair{ElementKind::RT0_P0};
  cfg.axis = StudyAxis::Space;
  cfg.levels = {2, 3, 4};
  cfg.tau = 0.5 / 40;
  cfg.series_max_index = 16;
  ConvergenceReport report = space_study(cfg);
  REQUIRE(report.rows.size() == 3);
  for (const auto& r : report.rows) {
    CHECK(r.failure.empty());
    CHECK(r.err_u > 0.0);
    CHECK(r.err_sigma > 0.0);
  }
  CHECK(report.rows[1].err_u < report.rows[0].err_u);
  CHECK(report.rows[2].err_u < report.rows[1].err_u);
  CHECK_FALSE(report.rows[0].oc_u.has_value());
  REQUIRE(report.rows[2].oc_u.has_value());

  // the observed order is the two-row slope in log-log
  const auto& r1 = report.rows[1];
  const auto& r2 = report.rows[2];
  double expect = std::log(r1.err_u / r2.err_u) / std::log(r1.h_or_tau / r2.h_or_tau);
  CHECK(*r2.oc_u == doctest::Approx(expect).epsilon(1e-9));
  CHECK(*r2.oc_u == doctest::Approx(1.0).epsilon(0.35));  // first-order elements

  std::string csv = report_to_csv(report);
  CHECK(csv.rfind("case,alpha,element,level_or_n,h_or_tau,err_u,oc_u,err_sigma,oc_sigma\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  ConvergenceReport back = report_from_json(report_to_json(report));
  CHECK(back.study_case == report.study_case);
  CHECK(back.element == report.element);
  CHECK(back.example == report.example);
  REQUIRE(back.rows.size() == report.rows.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    CHECK(back.rows[i].err_u == report.rows[i].err_u);
    CHECK(back.rows[i].err_sigma == report.rows[i].err_sigma);
    CHECK(back.rows[i].oc_u.has_value() == report.rows[i].oc_u.has_value());
  }

  std::string plot = report_to_plot_script(report, "report.csv");
  CHECK(plot.find("logscale") != std::string::npos);
}

TEST_CASE("time study validation") {
  StudyConfig cfg;
  cfg.example = 1;
  cfg.axis = StudyAxis::Time;
  cfg.step_counts = {10, 20};
  CHECK_THROWS(time_study(cfg));  // no exact solution to measure against

  cfg.example = 2;
  cfg.alphas = {0.5};
  cfg.fixed_level = 2;
  cfg.series_max_index = 8;
  cfg.step_counts = {7};  // eval_time = 0.05 is not a step point of N = 7
  ConvergenceReport report = time_study(cfg);
  REQUIRE(report.rows.size() == 1);
  CHECK_FALSE(report.rows[0].failure.empty());
}

TEST_CASE("write_text_file reports unwritable paths") {
  CHECK_THROWS(write_text_file("/nonexistent-dir/out.txt", "x"));
}
