#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nicem/lagrange_fem.hpp"
#include "nicem/legendre_lab.hpp"
#include "nicem/mesh2d.hpp"
#include "nicem/schwarz_solver.hpp"

namespace nicem {

/// Closed-form u, grad u and f = u - Laplace u on a rectangle.
struct ManufacturedCase {
  std::string name;
  Rect domain;
  ExactSolution exact;
  ScalarField forcing;

  ProblemData data() const { return {forcing, exact.u}; }
};

/// Largest relative mismatch of f and grad u against centered finite
/// differences (step 1e-4) at `points` seeded random points of the domain.
double forcing_fd_mismatch(const ManufacturedCase& c, int points = 100, unsigned long long seed = 7);

/// Names: "A", "B", "poly1", "poly2", "poly3", "zero". Every case is checked
/// by forcing_fd_mismatch on lookup; a mismatch above 1e-5 throws.
ManufacturedCase manufactured_case(const std::string& name);
std::vector<std::string> manufactured_case_names();

enum class AlphaPolicy { Min, Mean, Max, Fixed, PerInterface };
enum class SolverKind { Schwarz, Gmres };
enum class StopRule { Fixed, Target };

struct ExperimentConfig {
  std::string case_name = "A";
  std::string layout = "two-strip";
  /// Per-subdomain (nx, ny); empty means the layout's defaults.
  std::vector<std::array<int, 2>> resolutions;
  int degree = 2;
  int levels = 4;
  int refine_factor = 2;
  AlphaPolicy alpha_policy = AlphaPolicy::Min;
  double alpha = 0.0;                // Fixed policy
  std::vector<double> alpha_values;  // PerInterface override, or the explicit sweep grid
  std::vector<double> alpha_ratios = {0.6, 0.8, 1.0, 1.2, 1.45, 1.7};
  SolverKind solver = SolverKind::Schwarz;
  double tol = 1e-14;
  bool relative_residual = true;
  double h1_reduction = 1e-6;
  StopRule stop_rule = StopRule::Target;
  int max_iter = 1000;
  bool error_equation = false;
  unsigned long long seed = 20240611ULL;
  /// Error-equation counts are averaged over this many random initial
  /// guesses, seeded seed, seed + 1, ...
  int samples = 5;
  int threads = 0;
  bool serial = false;
  int p_max = 20;
  std::string output_dir;  // empty: nothing written
};

/// Parses a JSON object; unknown keys, wrong types and invalid values throw.
ExperimentConfig parse_config(const std::string& json_text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});
std::string to_json(const ExperimentConfig& config);
void validate_config(const ExperimentConfig& config);

/// Layout presets: "mono", "two-strip", "quad4", "grid12".
std::vector<std::string> layout_names();
std::vector<SubdomainSpec> layout_specs(const std::string& layout, const std::vector<std::array<int, 2>>& resolutions);
Rect layout_domain(const std::string& layout);
DecomposedMesh build_layout(const ExperimentConfig& config);

std::vector<double> resolve_alpha(const ExperimentConfig& config, const DecomposedMesh& mesh);

/// Relative H1 error (sum over subdomains) of a state against the exact solution.
H1Error state_error(const NicemSystem& system, const SchwarzState& state, const ExactSolution& exact);

// Results of the subcommands; each also writes its artifacts when
// config.output_dir is set.

struct SolveSummary {
  bool converged = false;
  int iterations = 0;
  double relative_h1_error = 0.0;
  double interface_jump = 0.0;
  double weak_residual = 0.0;
  double final_residual = 0.0;
  std::vector<double> alpha;
  std::vector<std::string> warnings;
  SolveResult result;
};
SolveSummary cmd_solve(const ExperimentConfig& config, std::ostream& log);

struct StudyLevel {
  int level = 0;
  double h = 0.0;
  int dofs = 0;
  int iterations = 0;
  bool converged = false;
  double relative_h1_error = 0.0;
};
struct ConvergenceStudy {
  std::vector<StudyLevel> levels;
  double slope = 0.0;
  bool complete = false;
};
ConvergenceStudy cmd_converge_study(const ExperimentConfig& config, std::ostream& log);
/// Least-squares slope of log(error) against log(h).
double fitted_slope(const std::vector<double>& h, const std::vector<double>& error);

struct SweepRow {
  double alpha = 0.0;
  double ratio = 0.0;       // alpha / alpha_min
  double iterations = 0.0;  // mean over the samples
  bool censored = false;    // some sample hit max_iter
};
struct AlphaSweep {
  double alpha_min = 0.0, alpha_mean = 0.0, alpha_max = 0.0;
  std::vector<SweepRow> rows;
  int best_row = 0;
  /// Iterations at alpha = alpha_min (run separately when not on the grid).
  double iterations_at_alpha_min = 0.0;
  bool u_shaped() const;
};
AlphaSweep cmd_alpha_sweep(const ExperimentConfig& config, std::ostream& log);

struct KrylovRow {
  double alpha = 0.0;
  double schwarz_iterations = 0.0;  // means over the samples
  double gmres_iterations = 0.0;
  bool schwarz_converged = false;
  bool gmres_converged = false;
};
struct KrylovComparison {
  double alpha_min = 0.0;
  std::vector<KrylovRow> rows;
  double schwarz_at_alpha_min = 0.0;
  double gmres_at_alpha_min = 0.0;
  double schwarz_spread = 0.0;
  double gmres_spread = 0.0;
  double max_u_difference = 0.0;  // both solvers on the data problem at alpha_min
};
KrylovComparison cmd_compare_krylov(const ExperimentConfig& config, std::ostream& log);

struct LegendreRow {
  int p = 0;
  double lambda_max = 0.0;
  bool certified_negative = false;
  lab::Rational case1;
  lab::Rational case1_fit;
  double case2 = 0.0;
  double case2_from_delta = 0.0;
  double duality_residual = 0.0;  // max relative |J(S(eta);eta) + Delta/(2p^2)| over random eta
  double quadrature_residual = 0.0;
};
struct LegendreReport {
  std::vector<LegendreRow> rows;
  bool all_negative_up_to_13 = false;
};
LegendreReport cmd_legendre_verify(const ExperimentConfig& config, std::ostream& log);

/// Writes mesh.txt and mesh.vtk; returns the validated mesh.
DecomposedMesh cmd_mesh_export(const ExperimentConfig& config, std::ostream& log);

}  // namespace nicem
