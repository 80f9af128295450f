#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nicem/mesh2d.hpp"

namespace nicem {

/// Continuous piecewise P_p space on a 1D partition s_0 < ... < s_N of an
/// interface (arc-length parameter). Nodal basis: DOF i*p + j is the j-th of
/// the p+1 equispaced Lagrange nodes of segment i; neighbouring segments
/// share their end DOF. Matches the trace numbering of FeSpace::trace_dofs.
class TraceSpace1D {
 public:
  TraceSpace1D(std::vector<double> breakpoints, int degree);

  int degree() const { return degree_; }
  int segments() const { return static_cast<int>(breaks_.size()) - 1; }
  int dimension() const { return segments() * degree_ + 1; }
  const std::vector<double>& breakpoints() const { return breaks_; }
  double length() const { return breaks_.back() - breaks_.front(); }
  double node(int dof) const;

  /// Segment containing s (the last one for s at the right end).
  int segment_of(double s) const;
  /// Values of the p+1 local basis functions of `segment` at s.
  void local_values(int segment, double s, double* out) const;
  /// Value at s of the function with nodal coefficients c.
  double evaluate(const Eigen::VectorXd& c, double s) const;

  /// Nodal interpolant of a function of the arc-length parameter.
  template <class F>
  Eigen::VectorXd interpolate(F&& f) const {
    Eigen::VectorXd c(dimension());
    for (int i = 0; i < dimension(); ++i) c[i] = f(node(i));
    return c;
  }

 private:
  std::vector<double> breaks_;
  int degree_;
};

/// Arc-length parameters of a chain of mesh vertices measured from `origin`.
std::vector<double> chain_parameters(const SubdomainMesh& mesh, const std::vector<int>& chain, const Point& origin);

/// Mortar space: members of the trace space that have degree <= p-1 on the
/// first and last segments. For a single-segment interface the space is
/// P_{p-1} on that segment. Basis functions are rows of `basis()` expressed
/// in the trace nodal basis.
class MortarSpace {
 public:
  explicit MortarSpace(TraceSpace1D trace);

  const TraceSpace1D& trace() const { return trace_; }
  int dimension() const { return static_cast<int>(basis_.rows()); }
  /// dimension() x trace().dimension()
  const Eigen::MatrixXd& basis() const { return basis_; }
  /// Trace nodal coefficients of the mortar function with coefficients c.
  Eigen::VectorXd to_trace(const Eigen::VectorXd& c) const { return basis_.transpose() * c; }

 private:
  TraceSpace1D trace_;
  Eigen::MatrixXd basis_;
};

/// Entry (i, j) = \int phi^rows_i phi^cols_j over the merged partition, with a
/// Gauss rule exact for the product degree on every merged sub-interval.
Eigen::MatrixXd cross_mass(const TraceSpace1D& rows, const TraceSpace1D& cols);

/// Matrices of one interface side: own mortar space tested against the own
/// trace, the neighbor trace and the neighbor mortar space.
struct CouplingMatrices {
  MortarSpace mortar;
  Eigen::MatrixXd mass_w;      // M_W
  Eigen::MatrixXd own;         // B_own: mortar x own trace
  Eigen::MatrixXd nbr_trace;   // mortar x neighbor trace
  Eigen::MatrixXd nbr_mortar;  // mortar x neighbor mortar
  Eigen::LLT<Eigen::MatrixXd> mass_w_factor;

  enum class Source { OwnTrace, NeighborTrace, NeighborMortar };

  /// Mortar coefficients of the L2 projection of v.
  Eigen::VectorXd project(Source source, const Eigen::VectorXd& v) const;
  /// M_W^{-1} m for a moment vector m.
  Eigen::VectorXd solve_mass(const Eigen::VectorXd& moments) const { return mass_w_factor.solve(moments); }
  /// M_W^{-1} applied column-wise.
  Eigen::MatrixXd solve_mass_columns(const Eigen::MatrixXd& m) const { return mass_w_factor.solve(m); }
};

CouplingMatrices build_coupling(const TraceSpace1D& own, const TraceSpace1D& neighbor);

}  // namespace nicem
