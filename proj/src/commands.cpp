#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nicem/experiments.hpp"

namespace nicem {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Append-only CSV, flushed after every row.
class Csv {
 public:
  Csv() = default;
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
  }
  bool open() const { return out_.is_open(); }
  void row(const std::vector<std::string>& cells) {
    if (!out_.is_open()) return;
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

std::optional<fs::path> output_dir(const ExperimentConfig& c) {
  if (c.output_dir.empty()) return std::nullopt;
  fs::create_directories(c.output_dir);
  return fs::path(c.output_dir);
}

Csv open_csv(const ExperimentConfig& c, const std::string& name, const std::vector<std::string>& header) {
  const auto dir = output_dir(c);
  return dir ? Csv(*dir / name, header) : Csv();
}

void write_text(const ExperimentConfig& c, const std::string& name, const std::string& text) {
  const auto dir = output_dir(c);
  if (!dir) return;
  std::ofstream out(*dir / name);
  out << text;
}

Execution execution_of(const ExperimentConfig& c) { return c.serial ? Execution::Serial : Execution::Parallel; }

SolveResult run(const NicemSystem& system, SchwarzState initial, SolverKind kind, const SolverOptions& options) {
  return kind == SolverKind::Gmres ? run_gmres(system, initial, options)
                                   : run_schwarz(system, std::move(initial), options);
}

int total_dofs(const NicemSystem& s) {
  int n = 0;
  for (int k = 0; k < s.subdomain_count(); ++k) n += s.space(k).dof_count();
  return n;
}

void write_solution_vtk(const fs::path& path, const NicemSystem& system, const SchwarzState& state) {
  std::vector<std::vector<double>> values;
  for (int k = 0; k < system.subdomain_count(); ++k) {
    const auto nv = system.mesh().subdomains[k].vertices.size();
    values.emplace_back(state.u[k].data(), state.u[k].data() + nv);
  }
  std::ofstream out(path);
  write_vtk(out, system.mesh(), &values, "u");
}

// Error-equation run: f = 0, g = 0, seeded random multipliers, stop on the
// H1 reduction only.
struct MeanCount {
  double iterations = 0.0;
  bool censored = false;
};

// Error-equation iteration count averaged over c.samples random initial guesses.
MeanCount error_equation_count(const DecomposedMesh& mesh, const ExperimentConfig& c, const std::vector<double>& alpha,
                               SolverKind kind,
                               const std::function<void(int, const IterationRecord&)>& on_record = {}) {
  NicemSystem system(mesh, c.degree, alpha, ProblemData{}, {}, execution_of(c));
  MeanCount m;
  for (int i = 0; i < c.samples; ++i) {
    SolverOptions o;
    o.tol = 0.0;
    o.h1_reduction = c.h1_reduction;
    o.max_iter = c.max_iter;
    if (on_record) o.on_iteration = [&](const IterationRecord& r, const SchwarzState&) { on_record(i, r); };
    const SolveResult r = run(system, system.random_state(c.seed + static_cast<unsigned long long>(i)), kind, o);
    m.iterations += static_cast<double>(r.iterations) / c.samples;
    m.censored = m.censored || !r.converged;
  }
  return m;
}

}  // namespace

std::vector<std::string> layout_names() { return {"mono", "two-strip", "quad4", "grid12"}; }

Rect layout_domain(const std::string& layout) {
  if (layout == "grid12") return {-3.0, 3.0, -2.0, 2.0};
  return {0.0, 1.0, 0.0, 1.0};
}

std::vector<SubdomainSpec> layout_specs(const std::string& layout, const std::vector<std::array<int, 2>>& res) {
  std::vector<SubdomainSpec> specs;
  std::vector<std::array<int, 2>> defaults;
  if (layout == "mono") {
    specs.push_back({{0.0, 1.0, 0.0, 1.0}});
    defaults = {{16, 16}};
  } else if (layout == "two-strip") {
    specs.push_back({{0.0, 0.5, 0.0, 1.0}});
    specs.push_back({{0.5, 1.0, 0.0, 1.0}});
    defaults = {{8, 16}, {20, 40}};
  } else if (layout == "quad4") {
    // bottom-left, bottom-right, top-left, top-right
    specs.push_back({{0.0, 0.5, 0.0, 0.5}});
    specs.push_back({{0.5, 1.0, 0.0, 0.5}});
    specs.push_back({{0.0, 0.5, 0.5, 1.0}});
    specs.push_back({{0.5, 1.0, 0.5, 1.0}});
    defaults = {{8, 8}, {12, 12}, {10, 10}, {16, 16}};
  } else if (layout == "grid12") {
    const double xs[] = {-3.0, -1.5, 0.0, 1.5, 3.0};
    const double ys[] = {-2.0, -2.0 / 3.0, 2.0 / 3.0, 2.0};
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 4; ++i) specs.push_back({{xs[i], xs[i + 1], ys[j], ys[j + 1]}});
    defaults = {{6, 5}, {9, 8}, {7, 6}, {10, 9}, {8, 7}, {6, 6}, {9, 7}, {7, 7}, {10, 8}, {6, 5}, {8, 8}, {9, 9}};
  } else {
    throw std::invalid_argument("unknown layout '" + layout + "'");
  }
  const auto& use = res.empty() ? defaults : res;
  if (use.size() != specs.size())
    throw std::invalid_argument("layout " + layout + " needs " + std::to_string(specs.size()) + " resolutions");
  for (std::size_t i = 0; i < specs.size(); ++i) {
    specs[i].nx = use[i][0];
    specs[i].ny = use[i][1];
  }
  return specs;
}

DecomposedMesh build_layout(const ExperimentConfig& c) {
  const auto specs = layout_specs(c.layout, c.resolutions);
  DecomposedMesh mesh = build_rect_partition(layout_domain(c.layout), specs);
  validate(mesh);
  return mesh;
}

std::vector<double> resolve_alpha(const ExperimentConfig& c, const DecomposedMesh& mesh) {
  const std::size_t n = mesh.interfaces.size();
  if (n == 0) return {};
  switch (c.alpha_policy) {
    case AlphaPolicy::Min: return std::vector<double>(n, alpha_global(mesh, c.degree, AlphaStat::Min));
    case AlphaPolicy::Mean: return std::vector<double>(n, alpha_global(mesh, c.degree, AlphaStat::Mean));
    case AlphaPolicy::Max: return std::vector<double>(n, alpha_global(mesh, c.degree, AlphaStat::Max));
    case AlphaPolicy::Fixed: return std::vector<double>(n, c.alpha);
    case AlphaPolicy::PerInterface:
      if (c.alpha_values.empty()) return alpha_per_interface(mesh, c.degree, AlphaStat::Min);
      if (c.alpha_values.size() != n)
        throw std::invalid_argument("per-interface alpha needs " + std::to_string(n) + " values");
      return c.alpha_values;
  }
  throw std::logic_error("unknown alpha policy");
}

H1Error state_error(const NicemSystem& system, const SchwarzState& state, const ExactSolution& exact) {
  H1Error total;
  double e2 = 0.0, n2 = 0.0, l2 = 0.0;
  for (int k = 0; k < system.subdomain_count(); ++k) {
    const H1Error e = h1_error(system.space(k), state.u[k], exact);
    e2 += e.error * e.error;
    n2 += e.norm * e.norm;
    l2 += e.l2_error * e.l2_error;
  }
  total.error = std::sqrt(e2);
  total.norm = std::sqrt(n2);
  total.l2_error = std::sqrt(l2);
  return total;
}

namespace {

// The polynomial cases hold on any rectangle; A and B are tied to their domains.
void check_domain(const ManufacturedCase& mc, const std::string& layout) {
  if (mc.name != "A" && mc.name != "B") return;
  const Rect d = layout_domain(layout);
  if (d.x0 != mc.domain.x0 || d.x1 != mc.domain.x1 || d.y0 != mc.domain.y0 || d.y1 != mc.domain.y1)
    throw std::invalid_argument("case " + mc.name + " is not posed on the domain of layout " + layout);
}

}  // namespace

SolveSummary cmd_solve(const ExperimentConfig& c, std::ostream& log) {
  validate_config(c);
  const ManufacturedCase mc = manufactured_case(c.error_equation ? "zero" : c.case_name);
  const DecomposedMesh mesh = build_layout(c);
  check_domain(mc, c.layout);
  SolveSummary s;
  s.alpha = resolve_alpha(c, mesh);
  const NicemSystem system(mesh, c.degree, s.alpha, c.error_equation ? ProblemData{} : mc.data(), {}, execution_of(c));
  s.warnings = system.warnings();
  for (const auto& w : s.warnings) log << "warning: " << w << '\n';

  Csv history = open_csv(c, "history.csv", {"n", "energy", "interface_term", "residual", "linf", "seconds"});
  SolverOptions o;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  o.relative_residual = c.relative_residual;
  if (c.error_equation) o.h1_reduction = c.h1_reduction;
  o.on_iteration = [&](const IterationRecord& r, const SchwarzState&) {
    history.row({std::to_string(r.n), fmt(r.energy), fmt(r.interface_term), fmt(r.residual), fmt(r.linf),
                 fmt(r.seconds)});
  };
  s.result = run(system, c.error_equation ? system.random_state(c.seed) : system.zero_state(), c.solver, o);
  s.converged = s.result.converged;
  s.iterations = s.result.iterations;
  s.final_residual = s.result.history.empty() ? 0.0 : s.result.history.back().residual;
  s.interface_jump = system.interface_jump(s.result.state);
  if (!c.error_equation) {
    s.weak_residual = system.weak_form_residual(s.result.state);
    const H1Error e = state_error(system, s.result.state, mc.exact);
    s.relative_h1_error = e.norm > 0.0 ? e.error / e.norm : e.error;
  } else if (!s.result.history.empty()) {
    const double e1 = s.result.history.front().energy;
    s.relative_h1_error = e1 > 0.0 ? std::sqrt(s.result.history.back().energy / e1) : 0.0;
  }

  std::ostringstream sum;
  sum << "case " << mc.name << "\nlayout " << c.layout << "\ndegree " << c.degree << "\nsolver "
      << (c.solver == SolverKind::Gmres ? "gmres" : "schwarz") << "\ndofs " << total_dofs(system) << "\nalpha";
  for (double a : s.alpha) sum << ' ' << fmt(a);
  sum << "\nconverged " << (s.converged ? "yes" : "no") << "\niterations " << s.iterations << "\nfinal_residual "
      << fmt(s.final_residual) << "\nrelative_h1_error " << fmt(s.relative_h1_error) << "\ninterface_jump "
      << fmt(s.interface_jump) << "\nweak_form_residual " << fmt(s.weak_residual) << '\n';
  for (const auto& w : s.warnings) sum << "warning " << w << '\n';
  write_text(c, "summary.txt", sum.str());
  if (const auto dir = output_dir(c)) write_solution_vtk(*dir / "solution.vtk", system, s.result.state);
  log << sum.str();
  if (!s.converged) log << "not converged after " << s.result.history.size() << " iterations; artifacts hold the best state\n";
  return s;
}

double fitted_slope(const std::vector<double>& h, const std::vector<double>& error) {
  if (h.size() != error.size() || h.size() < 2) throw std::invalid_argument("fitted_slope: need two or more points");
  const double n = static_cast<double>(h.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    mx += std::log(h[i]) / n;
    my += std::log(error[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(error[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ConvergenceStudy cmd_converge_study(const ExperimentConfig& c, std::ostream& log) {
  validate_config(c);
  if (c.levels < 3) throw std::invalid_argument("converge-study needs at least 3 levels");
  const ManufacturedCase mc = manufactured_case(c.case_name);
  check_domain(mc, c.layout);
  ConvergenceStudy study;
  Csv table = open_csv(c, "convergence.csv",
                       {"level", "h", "dofs", "iterations", "converged", "relative_h1_error", "seconds"});
  DecomposedMesh mesh = build_layout(c);
  std::vector<double> hs, errs;
  for (int level = 0; level < c.levels; ++level) {
    const auto t0 = Clock::now();
    if (level > 0) mesh = refine(mesh, c.refine_factor);
    const NicemSystem system(mesh, c.degree, resolve_alpha(c, mesh), mc.data(), {}, execution_of(c));
    StudyLevel row;
    row.level = level;
    row.h = max_mesh_size(mesh);
    row.dofs = total_dofs(system);
    SolverOptions o;
    o.max_iter = c.max_iter;
    o.relative_residual = c.relative_residual;
    // Target rule: stop at 1e-2 times the a-priori error estimate h^p.
    o.tol = c.stop_rule == StopRule::Target ? std::max(c.tol, 1e-2 * std::pow(row.h, c.degree)) : c.tol;
    const SolveResult r = run(system, system.zero_state(), c.solver, o);
    row.iterations = r.iterations;
    row.converged = r.converged;
    const H1Error e = state_error(system, r.state, mc.exact);
    row.relative_h1_error = e.error / e.norm;
    table.row({std::to_string(level), fmt(row.h), std::to_string(row.dofs), std::to_string(row.iterations),
               row.converged ? "1" : "0", fmt(row.relative_h1_error), fmt(seconds_since(t0))});
    log << "level " << level << " h " << fmt(row.h) << " dofs " << row.dofs << " iterations " << row.iterations
        << " error " << fmt(row.relative_h1_error) << '\n';
    study.levels.push_back(row);
    if (!row.converged) {
      log << "level " << level << " did not converge; study aborted\n";
      return study;
    }
    hs.push_back(row.h);
    errs.push_back(row.relative_h1_error);
  }
  study.complete = true;
  study.slope = hs.size() >= 2 ? fitted_slope(hs, errs) : 0.0;
  log << "fitted slope " << fmt(study.slope) << " (degree " << c.degree << ")\n";
  write_text(c, "convergence_summary.txt", "slope " + fmt(study.slope) + "\ndegree " + std::to_string(c.degree) + "\n");
  write_text(c, "convergence.gp",
             "set datafile separator ','\nset logscale xy\nset xlabel 'h'\nset ylabel 'relative H1 error'\n"
             "set key top left\nset terminal pngcairo size 800,600\nset output 'convergence.png'\n"
             "plot 'convergence.csv' using 2:6 skip 1 with linespoints title 'P" +
                 std::to_string(c.degree) + " (slope " + fmt(study.slope) + ")'\n");
  return study;
}

bool AlphaSweep::u_shaped() const {
  if (rows.size() < 3) return false;
  const double best = rows[best_row].iterations;
  return rows.front().iterations > best && rows.back().iterations > best;
}

namespace {

std::vector<double> sweep_grid(const ExperimentConfig& c, double alpha_min) {
  if (!c.alpha_values.empty()) return c.alpha_values;
  std::vector<double> g;
  for (double r : c.alpha_ratios) g.push_back(r * alpha_min);
  return g;
}

}  // namespace

AlphaSweep cmd_alpha_sweep(const ExperimentConfig& c, std::ostream& log) {
  validate_config(c);
  const DecomposedMesh mesh = build_layout(c);
  if (mesh.interfaces.empty()) throw std::invalid_argument("alpha-sweep needs a layout with interfaces");
  AlphaSweep sweep;
  sweep.alpha_min = alpha_global(mesh, c.degree, AlphaStat::Min);
  sweep.alpha_mean = alpha_global(mesh, c.degree, AlphaStat::Mean);
  sweep.alpha_max = alpha_global(mesh, c.degree, AlphaStat::Max);
  const std::size_t nif = mesh.interfaces.size();
  Csv table = open_csv(c, "alpha_sweep.csv", {"alpha", "ratio", "iterations", "censored", "seconds"});
  std::vector<double> grid = sweep_grid(c, sweep.alpha_min);
  std::sort(grid.begin(), grid.end());
  bool have_min = false;
  for (double a : grid) {
    const auto t0 = Clock::now();
    const MeanCount r = error_equation_count(mesh, c, std::vector<double>(nif, a), c.solver);
    SweepRow row{a, a / sweep.alpha_min, r.iterations, r.censored};
    if (std::abs(row.ratio - 1.0) < 1e-12) {
      have_min = true;
      sweep.iterations_at_alpha_min = row.iterations;
    }
    table.row({fmt(a), fmt(row.ratio), fmt(row.iterations), row.censored ? "1" : "0", fmt(seconds_since(t0))});
    log << "alpha " << fmt(a) << " iterations " << fmt(row.iterations) << (row.censored ? " (censored)" : "") << '\n';
    sweep.rows.push_back(row);
  }
  if (!have_min)
    sweep.iterations_at_alpha_min =
        error_equation_count(mesh, c, std::vector<double>(nif, sweep.alpha_min), c.solver).iterations;
  for (std::size_t i = 0; i < sweep.rows.size(); ++i)
    if (sweep.rows[i].iterations < sweep.rows[sweep.best_row].iterations) sweep.best_row = static_cast<int>(i);

  std::ostringstream sum;
  sum << "samples " << c.samples << "\nalpha_min " << fmt(sweep.alpha_min) << "\nalpha_mean " << fmt(sweep.alpha_mean) << "\nalpha_max "
      << fmt(sweep.alpha_max) << "\niterations_at_alpha_min " << fmt(sweep.iterations_at_alpha_min) << "\nsweep_minimum_alpha "
      << fmt(sweep.rows[sweep.best_row].alpha) << "\nsweep_minimum_iterations " << fmt(sweep.rows[sweep.best_row].iterations)
      << "\nu_shaped " << (sweep.u_shaped() ? "yes" : "no") << '\n';
  write_text(c, "alpha_sweep_summary.txt", sum.str());
  log << sum.str();
  return sweep;
}

KrylovComparison cmd_compare_krylov(const ExperimentConfig& c, std::ostream& log) {
  validate_config(c);
  const DecomposedMesh mesh = build_layout(c);
  if (mesh.interfaces.empty()) throw std::invalid_argument("compare-krylov needs a layout with interfaces");
  KrylovComparison cmp;
  cmp.alpha_min = alpha_global(mesh, c.degree, AlphaStat::Min);
  const std::size_t nif = mesh.interfaces.size();
  Csv hist = open_csv(c, "krylov_history.csv",
                      {"solver", "alpha", "sample", "n", "h1_error", "h1_relative", "linf_error", "residual", "seconds"});
  std::vector<double> grid = sweep_grid(c, cmp.alpha_min);
  if (std::none_of(grid.begin(), grid.end(), [&](double a) { return std::abs(a / cmp.alpha_min - 1.0) < 1e-12; }))
    grid.push_back(cmp.alpha_min);
  std::sort(grid.begin(), grid.end());
  for (double a : grid) {
    KrylovRow row;
    row.alpha = a;
    for (SolverKind kind : {SolverKind::Schwarz, SolverKind::Gmres}) {
      const char* name = kind == SolverKind::Gmres ? "gmres" : "schwarz";
      double e1 = 0.0;
      const MeanCount r = error_equation_count(mesh, c, std::vector<double>(nif, a), kind, [&](int sample, const IterationRecord& rec) {
        if (rec.n == 1) e1 = rec.energy;
        hist.row({name, fmt(a), std::to_string(sample), std::to_string(rec.n), fmt(std::sqrt(rec.energy)),
                  fmt(e1 > 0.0 ? std::sqrt(rec.energy / e1) : 0.0), fmt(rec.linf), fmt(rec.residual), fmt(rec.seconds)});
      });
      (kind == SolverKind::Gmres ? row.gmres_iterations : row.schwarz_iterations) = r.iterations;
      (kind == SolverKind::Gmres ? row.gmres_converged : row.schwarz_converged) = !r.censored;
    }
    if (std::abs(a / cmp.alpha_min - 1.0) < 1e-12) {
      cmp.schwarz_at_alpha_min = row.schwarz_iterations;
      cmp.gmres_at_alpha_min = row.gmres_iterations;
    }
    log << "alpha " << fmt(a) << " schwarz " << fmt(row.schwarz_iterations) << " gmres " << fmt(row.gmres_iterations) << '\n';
    cmp.rows.push_back(row);
  }
  auto spread = [&](auto member) {
    double lo = std::numeric_limits<double>::max(), hi = 0.0;
    for (const auto& r : cmp.rows) {
      lo = std::min(lo, r.*member);
      hi = std::max(hi, r.*member);
    }
    return hi - lo;
  };
  cmp.schwarz_spread = spread(&KrylovRow::schwarz_iterations);
  cmp.gmres_spread = spread(&KrylovRow::gmres_iterations);

  // Same data problem through both solvers at alpha_min.
  const ManufacturedCase mc = manufactured_case(c.case_name);
  const NicemSystem system(mesh, c.degree, std::vector<double>(nif, cmp.alpha_min), mc.data(), {}, execution_of(c));
  SolverOptions o;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  const SolveResult rs = run_schwarz(system, system.zero_state(), o);
  const SolveResult rg = run_gmres(system, system.zero_state(), o);
  for (int k = 0; k < system.subdomain_count(); ++k)
    cmp.max_u_difference =
        std::max(cmp.max_u_difference, (rs.state.u[k] - rg.state.u[k]).cwiseAbs().maxCoeff());

  std::ostringstream sum;
  sum << "samples " << c.samples << "\nalpha_min " << fmt(cmp.alpha_min) << "\nschwarz_at_alpha_min "
      << fmt(cmp.schwarz_at_alpha_min) << "\ngmres_at_alpha_min " << fmt(cmp.gmres_at_alpha_min) << "\nratio "
      << fmt(cmp.schwarz_at_alpha_min > 0 ? cmp.gmres_at_alpha_min / cmp.schwarz_at_alpha_min : 0.0)
      << "\nschwarz_spread " << fmt(cmp.schwarz_spread) << "\ngmres_spread " << fmt(cmp.gmres_spread)
      << "\ndata_problem_max_u_difference " << fmt(cmp.max_u_difference) << '\n';
  write_text(c, "krylov_summary.txt", sum.str());
  log << sum.str();
  return cmp;
}

LegendreReport cmd_legendre_verify(const ExperimentConfig& c, std::ostream& log) {
  validate_config(c);
  LegendreReport rep;
  rep.all_negative_up_to_13 = true;
  Csv table = open_csv(c, "legendre.csv",
                       {"p", "lambda_max", "certified_negative", "case1_discriminant", "case1_from_delta", "case2_value",
                        "case2_from_delta", "duality_residual", "quadrature_residual"});
  for (int p = 1; p <= c.p_max; ++p) {
    LegendreRow row;
    row.p = p;
    const lab::Spectrum s = lab::delta_form_spectrum(p);
    row.lambda_max = s.lambda_max;
    row.certified_negative = s.certified_negative;
    if (p >= 2) {
      row.case1 = lab::case1_discriminant(p);
      row.case1_fit = lab::case1_discriminant_from_delta(p);
      row.case2 = lab::case2_value(p);
      row.case2_from_delta = lab::delta_of_eta(lab::case2_eta(p));
    }
    for (int i = 0; i < 1000; ++i) {
      const lab::EtaCoeffs eta = lab::random_eta(p, c.seed + 1000ULL * p + i);
      const auto e = lab::legendre_coefficients(eta);
      const auto sres = lab::s_operator(eta);
      const double j = lab::j_functional(e, sres.psi);
      const double jq = lab::j_functional_quadrature(e, sres.psi);
      const double target = -lab::delta_of_eta(eta) / (2.0 * p * p);
      row.duality_residual = std::max(row.duality_residual, std::abs(j - target) / std::abs(target));
      row.quadrature_residual = std::max(row.quadrature_residual, std::abs(j - jq) / std::abs(j));
    }
    if (p <= 13 && !(row.lambda_max < 0.0 && row.certified_negative)) rep.all_negative_up_to_13 = false;
    table.row({std::to_string(p), fmt(row.lambda_max), row.certified_negative ? "1" : "0",
               p >= 2 ? row.case1.str() : "", p >= 2 ? row.case1_fit.str() : "", p >= 2 ? fmt(row.case2) : "",
               p >= 2 ? fmt(row.case2_from_delta) : "", fmt(row.duality_residual), fmt(row.quadrature_residual)});
    rep.rows.push_back(row);
  }
  std::ostringstream txt;
  txt << "p  lambda_max  negative(exact)  case1_discriminant  case2_value\n";
  for (const auto& r : rep.rows) {
    txt << r.p << "  " << fmt(r.lambda_max) << "  " << (r.certified_negative ? "yes" : "no");
    if (r.p >= 2) txt << "  " << r.case1.str() << "  " << fmt(r.case2);
    txt << '\n';
  }
  if (c.p_max >= 2) {
    const auto d = lab::delta_form_exact(2);
    txt << "p=2 form: " << d[0][0].str() << " eta1^2 + " << lab::Rational(2 * d[0][1]).str() << " eta1 eta2 + " << d[1][1].str()
        << " eta2^2\n";
  }
  txt << "negative for all p <= 13: " << (rep.all_negative_up_to_13 ? "yes" : "no") << '\n';
  write_text(c, "legendre.txt", txt.str());
  log << txt.str();
  return rep;
}

DecomposedMesh cmd_mesh_export(const ExperimentConfig& c, std::ostream& log) {
  validate_config(c);
  DecomposedMesh mesh = build_layout(c);
  for (int l = 1; l < c.levels; ++l) mesh = refine(mesh, c.refine_factor);
  validate(mesh);
  if (const auto dir = output_dir(c)) {
    std::ofstream txt(*dir / "mesh.txt");
    write_mesh(txt, mesh);
    std::ofstream vtk(*dir / "mesh.vtk");
    std::vector<std::vector<double>> ids;
    for (const auto& s : mesh.subdomains) ids.emplace_back(s.vertices.size(), static_cast<double>(s.id));
    write_vtk(vtk, mesh, &ids, "subdomain");
  }
  log << "subdomains " << mesh.subdomains.size() << " interfaces " << mesh.interfaces.size() << " triangles "
      << mesh.triangle_count() << " h_max " << fmt(max_mesh_size(mesh)) << '\n';
  for (std::size_t i = 0; i < mesh.interfaces.size(); ++i) {
    const auto& f = mesh.interfaces[i];
    const StepStats st = interface_steps(mesh, f);
    log << "interface " << i << " (" << f.a << "-" << f.b << ") length " << fmt(f.length()) << " h_min " << fmt(st.h_min)
        << " h_max " << fmt(st.h_max) << " alpha_min " << fmt(alpha_opt(f.length(), st.h_min, c.degree)) << '\n';
  }
  return mesh;
}

}  // namespace nicem
