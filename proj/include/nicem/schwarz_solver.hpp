#pragma once

#include <Eigen/SparseCholesky>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nicem/interface_mortar.hpp"
#include "nicem/lagrange_fem.hpp"
#include "nicem/mesh2d.hpp"

namespace nicem {

/// Serial is the reference path; Parallel runs subdomain kernels under OpenMP.
enum class Execution { Serial, Parallel };

/// Right-hand side data of (Id - Laplace) u = f with u = g on the exterior
/// boundary. Empty callables mean zero.
struct ProblemData {
  ScalarField forcing;
  ScalarField dirichlet;
  bool homogeneous() const { return !forcing && !dirichlet; }
};

/// Per subdomain k: coefficients u_k. Per interface side (k, l): multiplier
/// coefficients p_{k,l} in the mortar space of that side.
struct SchwarzState {
  std::vector<Vector> u;
  std::vector<Vector> p;
  int iteration = 0;
};

/// Discretized decomposed problem. Side 2i receives on subdomain
/// interfaces[i].a from interfaces[i].b, side 2i+1 the other way round.
class NicemSystem {
 public:
  struct Side {
    int owner = 0;
    int neighbor = 0;
    int interface = 0;
    int opposite = 0;
    double alpha = 1.0;
    std::vector<int> trace_dofs;  // owner DOFs in chain order
    std::unique_ptr<CouplingMatrices> coupling;
    int moment_offset = 0;
  };

  NicemSystem(const DecomposedMesh& mesh, int degree, std::vector<double> alpha_per_interface,
              const ProblemData& data, QuadratureOrders orders = {}, Execution exec = Execution::Parallel);
  ~NicemSystem();
  NicemSystem(const NicemSystem&) = delete;
  NicemSystem& operator=(const NicemSystem&) = delete;

  const DecomposedMesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int subdomain_count() const { return static_cast<int>(spaces_.size()); }
  int side_count() const { return static_cast<int>(sides_.size()); }
  const FeSpace& space(int k) const { return *spaces_[k]; }
  const Side& side(int s) const { return sides_[s]; }
  std::span<const int> sides_of(int k) const { return sides_by_owner_[k]; }
  /// Length of the concatenated interface moment vector.
  int moment_size() const { return moment_size_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Unconstrained \int (grad u grad v + u v) of subdomain k.
  const SparseMatrix& energy_matrix(int k) const { return energy_[k]; }
  /// Load vector \int f v (no Dirichlet treatment).
  const Vector& load(int k) const { return load_[k]; }
  /// Robin coupling sum_l alpha_l C_l, C_l(i,j) = \int pi(phi_i) pi(phi_j), unconstrained.
  SparseMatrix robin_matrix(int k) const;
  /// Dirichlet-constrained DOF mask of subdomain k.
  const std::vector<char>& constrained_mask(int k) const { return fixed_[k]; }

  SchwarzState zero_state() const;
  /// Zero u, multipliers uniform in [-1, 1] from a seeded generator.
  SchwarzState random_state(unsigned long long seed) const;

  /// Moments \int (-p_l + alpha u_l) psi against every receiving mortar basis.
  Vector moments(const SchwarzState& state) const;
  /// Subdomain solves for given incoming moments plus multiplier recovery.
  SchwarzState solve_from_moments(const Vector& moments, bool with_data) const;
  /// Reference implementation of solve_from_moments without OpenMP.
  SchwarzState solve_from_moments_serial(const Vector& moments, bool with_data) const;
  /// One Jacobi sweep: all subdomains use neighbor data of `state`.
  SchwarzState step(const SchwarzState& state) const;

  /// E = sum_k \int |grad u_k|^2 + u_k^2.
  double energy(const SchwarzState& state) const;
  /// B = sum_sides 1/(4 alpha) \int (p_k - alpha pi(u_k))^2.
  double interface_term(const SchwarzState& state) const;
  /// sqrt(sum_sides ||pi((p_k + alpha u_k) - (-p_l + alpha u_l))||^2), absolute.
  double residual_norm(const SchwarzState& state) const;
  /// Largest per-side jump of the interface condition relative to ||pi(p_k + alpha u_k)||.
  double interface_jump(const SchwarzState& state) const;
  /// Largest per-subdomain relative residual of the discrete weak form on free DOFs.
  double weak_form_residual(const SchwarzState& state) const;
  /// L2 norm of the projection of the own trace of u onto the own mortar space.
  double projected_trace_norm(const SchwarzState& state, int s) const;

  Execution execution() const { return exec_; }
  void set_execution(Execution exec) { exec_ = exec; }

 private:
  void solve_subdomain(int k, const Vector& moments, bool with_data, SchwarzState& out) const;
  Vector trace_of(const SchwarzState& state, int s) const;

  const DecomposedMesh* mesh_;
  int degree_;
  Execution exec_;
  std::vector<std::unique_ptr<FeSpace>> spaces_;
  std::vector<Side> sides_;
  std::vector<std::vector<int>> sides_by_owner_;
  std::vector<SparseMatrix> energy_;
  std::vector<Vector> load_;
  std::vector<Vector> data_rhs_;  // eliminated right-hand side for the given data
  std::vector<std::vector<char>> fixed_;
  std::vector<std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix>>> factors_;
  std::vector<std::string> warnings_;
  int moment_size_ = 0;
};

/// Optimal Robin parameter of the two-subdomain continuous analysis, applied
/// at step h/p: [((pi/L)^2 + 1)((pi p/h)^2 + 1)]^{1/4}.
double alpha_opt(double length, double h, int degree);

enum class AlphaStat { Min, Mean, Max };

/// alpha_opt per interface from that interface's step statistic.
std::vector<double> alpha_per_interface(const DecomposedMesh& mesh, int degree, AlphaStat stat);
/// One constant for all interfaces: the statistic over all interface steps;
/// the length is taken from the interface attaining it (mean: average length).
double alpha_global(const DecomposedMesh& mesh, int degree, AlphaStat stat);

struct IterationRecord {
  int n = 0;
  double energy = 0.0;
  double interface_term = 0.0;
  double residual = 0.0;
  double linf = 0.0;  // max |u| over DOFs (error norm in error-equation mode)
  double seconds = 0.0;
};

struct SolverOptions {
  double tol = 1e-14;
  int max_iter = 1000;
  bool relative_residual = true;
  /// When > 0, also stop once sqrt(E^n / E^1) <= h1_reduction.
  double h1_reduction = 0.0;
  std::function<void(const IterationRecord&, const SchwarzState&)> on_iteration;
};

struct SolveResult {
  SchwarzState state;
  std::vector<IterationRecord> history;
  bool converged = false;
  int iterations = 0;
};

SolveResult run_schwarz(const NicemSystem& system, SchwarzState initial, const SolverOptions& options);

/// GMRES on the interface moments: (I - Phi) lambda = b, with Phi one sweep
/// without data and b one sweep of the zero state with data.
SolveResult run_gmres(const NicemSystem& system, const SchwarzState& initial, const SolverOptions& options);

}  // namespace nicem
