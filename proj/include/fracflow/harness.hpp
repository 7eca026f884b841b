#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracflow/fe_space.hpp"
#include "fracflow/mesh.hpp"
#include "fracflow/problems.hpp"
#include "fracflow/stepper.hpp"

namespace fracflow {

using FluxField = std::function<std::array<double, 2>(double, double)>;

/// L2 norm of (FE field - exact) over the mesh, degree-8 quadrature by default.
double l2_error_scalar(const Mesh& mesh, const DofMap& dofmap, const ElementPair& pair,
                       const std::vector<double>& coeffs, const ScalarField& exact,
                       int quad_degree = 8);
double l2_error_flux(const Mesh& mesh, const DofMap& dofmap, const ElementPair& pair,
                     const std::vector<double>& coeffs, const FluxField& exact,
                     int quad_degree = 8);

/// Variants against precomputed exact values at the quadrature points of the
/// mesh (triangle-major, rule-point order — the enumeration of mesh_quad_points).
std::vector<Point> mesh_quad_points(const Mesh& mesh, int quad_degree);
double l2_error_scalar_values(const Mesh& mesh, const DofMap& dofmap, const ElementPair& pair,
                              const std::vector<double>& coeffs,
                              const std::vector<double>& exact_values, int quad_degree = 8);
double l2_error_flux_values(const Mesh& mesh, const DofMap& dofmap, const ElementPair& pair,
                            const std::vector<double>& coeffs,
                            const std::vector<std::array<double, 2>>& exact_values,
                            int quad_degree = 8);

struct FieldPair {
  const Mesh& mesh;
  const DofMap& dofmap;
  const ElementPair& pair;
  const std::vector<double>& scalar_coeffs;
  const std::vector<double>& flux_coeffs;
};

/// L2 distances between a coarse and a reference discrete solution on nested
/// uniform meshes. The integration runs over the reference triangles, where
/// both fields are polynomial, so it is exact.
struct ReferenceErrors {
  double err_u = 0.0;
  double err_sigma = 0.0;
};
ReferenceErrors reference_compare(const FieldPair& coarse, const FieldPair& reference);

enum class StudyAxis { Space, Time };

struct StudyConfig {
  int example = 2;
  std::vector<double> alphas = {0.3, 0.7};
  ElementPair pair;
  StudyAxis axis = StudyAxis::Space;
  std::vector<int> levels;     // space study
  std::vector<int> step_counts;  // time study (N values)
  double tau = 1.0 / 1200.0;   // fixed step size for space studies
  int fixed_level = 4;         // fixed mesh level for time studies
  int reference_level = 6;     // Example 1 reference solution level
  // Time studies evaluate errors at this time (must be a step point); <= 0
  // means the final time. The reference temporal-error magnitudes correspond
  // to an early evaluation time, where the solution is still large.
  double eval_time = 0.05;
  SourceMode source_mode = SourceMode::ClosedForm;
  int series_max_index = 64;
  SignConvention convention = SignConvention::Separable;
  double final_time = 0.5;
};

struct ReportRow {
  double alpha = 0.0;
  int level_or_n = 0;
  double h_or_tau = 0.0;
  double err_u = 0.0;
  std::optional<double> oc_u;
  double err_sigma = 0.0;
  std::optional<double> oc_sigma;
  std::string failure;  // non-empty when the solver failed for this row
};

struct ConvergenceReport {
  std::string study_case;  // e.g. "example2-space"
  std::string element;     // "rt0" / "rt1"
  StudyAxis axis = StudyAxis::Space;
  int example = 0;
  int series_max_index = 0;
  std::string convention;
  double fixed_tau = 0.0;   // space studies
  int fixed_level = 0;      // time studies
  double wall_seconds = 0.0;
  std::vector<ReportRow> rows;
};

/// Grid resolution of a space-study level. Two conventions coexist in the
/// benchmark definitions: Example 1 pins level 6 = 128x128 (n = 2^(level+1)),
/// while the Example 2/3 reference error magnitudes correspond to
/// n = 2^(level-1).
int space_subdivisions(int example, int level);

ConvergenceReport space_study(const StudyConfig& cfg);
ConvergenceReport time_study(const StudyConfig& cfg);

std::string report_to_csv(const ConvergenceReport& report);
std::string report_to_json(const ConvergenceReport& report);
ConvergenceReport report_from_json(const std::string& json_text);
/// Gnuplot script plotting err_u and err_sigma against h or tau with
/// slope-1 and slope-2 guide lines.
std::string report_to_plot_script(const ConvergenceReport& report,
                                  const std::string& csv_path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace fracflow
