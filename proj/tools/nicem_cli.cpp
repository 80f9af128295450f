#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "nicem/experiments.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> case_name, layout, solver, alpha_policy, output_dir, stop_rule;
  std::optional<int> degree, levels, refine_factor, max_iter, threads, p_max, samples;
  std::optional<double> alpha, tol, h1_reduction;
  std::optional<unsigned long long> seed;
  std::vector<double> alpha_values, alpha_ratios;
  bool serial = false;
  bool error_equation = false;
  bool absolute_residual = false;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("-c,--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  sub->add_option("--case", o.case_name, "manufactured case: A, B, poly1, poly2, poly3, zero");
  sub->add_option("--layout", o.layout, "mono, two-strip, quad4, grid12");
  sub->add_option("-p,--degree", o.degree, "polynomial degree 1..3");
  sub->add_option("--levels", o.levels, "refinement levels");
  sub->add_option("--refine-factor", o.refine_factor, "2 or 3");
  sub->add_option("--alpha-policy", o.alpha_policy, "min, mean, max, fixed, per-interface");
  sub->add_option("--alpha", o.alpha, "Robin parameter for the fixed policy");
  sub->add_option("--alpha-values", o.alpha_values, "per-interface values or explicit sweep grid");
  sub->add_option("--alpha-ratios", o.alpha_ratios, "sweep grid as multiples of alpha_min");
  sub->add_option("--solver", o.solver, "schwarz or gmres");
  sub->add_option("--tol", o.tol, "residual tolerance");
  sub->add_flag("--absolute-residual", o.absolute_residual, "do not normalize the residual by its first value");
  sub->add_option("--h1-reduction", o.h1_reduction, "error-equation stopping factor");
  sub->add_option("--stop-rule", o.stop_rule, "fixed or target (convergence study)");
  sub->add_option("--max-iter", o.max_iter, "iteration cap");
  sub->add_flag("--error-equation", o.error_equation, "f = 0, g = 0, random initial multipliers");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--samples", o.samples, "random initial guesses averaged per error-equation count");
  sub->add_option("--threads", o.threads, "OpenMP threads (0: environment)");
  sub->add_flag("--serial", o.serial, "use the serial reference sweep");
  sub->add_option("--p-max", o.p_max, "largest degree for legendre-verify");
  sub->add_option("-o,--out", o.output_dir, "output directory");
}

nicem::ExperimentConfig make_config(const Overrides& o, nicem::ExperimentConfig base) {
  nicem::ExperimentConfig c = o.config_path.empty() ? base : nicem::load_config(o.config_path, base);
  if (o.case_name) c.case_name = *o.case_name;
  if (o.layout) c.layout = *o.layout;
  if (o.degree) c.degree = *o.degree;
  if (o.levels) c.levels = *o.levels;
  if (o.refine_factor) c.refine_factor = *o.refine_factor;
  if (o.alpha) c.alpha = *o.alpha;
  if (!o.alpha_values.empty()) c.alpha_values = o.alpha_values;
  if (!o.alpha_ratios.empty()) c.alpha_ratios = o.alpha_ratios;
  if (o.tol) c.tol = *o.tol;
  if (o.absolute_residual) c.relative_residual = false;
  if (o.h1_reduction) c.h1_reduction = *o.h1_reduction;
  if (o.max_iter) c.max_iter = *o.max_iter;
  if (o.error_equation) c.error_equation = true;
  if (o.seed) c.seed = *o.seed;
  if (o.samples) c.samples = *o.samples;
  if (o.threads) c.threads = *o.threads;
  if (o.serial) c.serial = true;
  if (o.p_max) c.p_max = *o.p_max;
  if (o.output_dir) c.output_dir = *o.output_dir;
  // Enum-valued flags go through the same parser as the file.
  std::string json = "{";
  auto add = [&json](const char* key, const std::optional<std::string>& v) {
    if (!v) return;
    if (json.size() > 1) json += ",";
    json += "\"" + std::string(key) + "\":\"" + *v + "\"";
  };
  add("alpha_policy", o.alpha_policy);
  add("solver", o.solver);
  add("stop_rule", o.stop_rule);
  json += "}";
  c = nicem::parse_config(json, c);
  return c;
}

void apply_threads(const nicem::ExperimentConfig& c) {
  int n = c.threads;
  if (n == 0)
    if (const char* env = std::getenv("NICEM_NUM_THREADS")) n = std::atoi(env);
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NICEM: Robin-Schwarz iterations with mortar coupling on non-matching meshes"};
  app.require_subcommand(1);
  Overrides o;

  auto* solve = app.add_subcommand("solve", "solve one problem, write history, solution and summary");
  auto* study = app.add_subcommand("converge-study", "relative H1 error over a refinement sequence");
  auto* sweep = app.add_subcommand("alpha-sweep", "error-equation iteration counts over a grid of alpha");
  auto* krylov = app.add_subcommand("compare-krylov", "Schwarz and GMRES histories over the alpha grid");
  auto* legendre = app.add_subcommand("legendre-verify", "certify negativity of the end-segment quadratic form");
  auto* mesh = app.add_subcommand("mesh-export", "write the decomposed mesh as text and VTK");
  auto* show = app.add_subcommand("show-config", "print the effective configuration as JSON");
  for (auto* s : {solve, study, sweep, krylov, legendre, mesh, show}) add_common(s, o);

  CLI11_PARSE(app, argc, argv);

  try {
    nicem::ExperimentConfig base;
    if (*sweep || *krylov) {
      base.error_equation = true;
      base.max_iter = 2000;
    }
    if (*study) {
      base.layout = "quad4";
      base.solver = nicem::SolverKind::Gmres;
    }
    const nicem::ExperimentConfig c = make_config(o, base);
    apply_threads(c);
    if (*show) {
      std::cout << nicem::to_json(c) << '\n';
      return 0;
    }
    if (*solve) return nicem::cmd_solve(c, std::cout).converged ? 0 : 2;
    if (*study) return nicem::cmd_converge_study(c, std::cout).complete ? 0 : 2;
    if (*sweep) {
      const auto r = nicem::cmd_alpha_sweep(c, std::cout);
      for (const auto& row : r.rows)
        if (row.censored) return 2;
      return 0;
    }
    if (*krylov) return (nicem::cmd_compare_krylov(c, std::cout), 0);
    if (*legendre) return nicem::cmd_legendre_verify(c, std::cout).all_negative_up_to_13 || c.p_max < 1 ? 0 : 1;
    if (*mesh) return (nicem::cmd_mesh_export(c, std::cout), 0);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
