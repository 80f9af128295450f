#pragma once

#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <span>
#include <vector>

#include "nicem/mesh2d.hpp"

namespace nicem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
using ScalarField = std::function<double(double, double)>;
using VectorField = std::function<std::array<double, 2>(double, double)>;

/// Lagrange basis of degree p on the reference triangle. Local nodes are
/// ordered: the three vertices, then p-1 nodes per edge (0-1, 1-2, 2-0, each
/// running from its first vertex), then interior nodes.
struct BasisEval {
  std::vector<double> values;
  std::vector<std::array<double, 2>> grads;  // d/dxi, d/deta
};

int local_dof_count(int degree);

/// Barycentric coordinates of the local nodes.
std::vector<std::array<double, 3>> reference_nodes(int degree);

/// `bary` = (l0, l1, l2) with xi = l1, eta = l2. Throws for degree outside 1..3.
BasisEval reference_basis(int degree, const std::array<double, 3>& bary);

/// Continuous P_p space over one subdomain mesh. Global numbering: vertex
/// DOFs first (same index as the mesh vertex), then p-1 DOFs per mesh edge,
/// then interior DOFs. The mesh must outlive the space.
class FeSpace {
 public:
  FeSpace(const SubdomainMesh& mesh, int degree);

  const SubdomainMesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int dof_count() const { return dof_count_; }
  int edge_count() const { return edge_count_; }

  const std::vector<Point>& dof_coords() const { return coords_; }
  std::span<const int> cell_dofs(int t) const {
    return {cell_dofs_.data() + static_cast<std::size_t>(t) * local_, static_cast<std::size_t>(local_)};
  }

  /// DOFs on the exterior boundary (sorted).
  const std::vector<int>& dirichlet_dofs() const { return dirichlet_; }

  /// Trace DOFs along an interface chain, in chain order (N p + 1 entries).
  std::vector<int> trace_dofs(const std::vector<int>& chain) const;

 private:
  int edge_dofs_from(int a, int b, int step) const;

  const SubdomainMesh* mesh_;
  int degree_;
  int local_;
  int edge_count_ = 0;
  int dof_count_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<Point> coords_;
  std::vector<int> dirichlet_;
  std::vector<std::pair<std::pair<int, int>, int>> edge_index_;  // sorted (a<b) -> edge id
};

/// Quadrature orders; negative means the default (2p for bilinear forms, 2p+4
/// for loads and errors).
struct QuadratureOrders {
  int bilinear = -1;
  int load = -1;
  int error = -1;
};

SparseMatrix assemble_stiffness(const FeSpace& space, int order = -1);
SparseMatrix assemble_mass(const FeSpace& space, int order = -1);
/// Matrix of \int (grad u . grad v + u v).
SparseMatrix assemble_reaction_diffusion(const FeSpace& space, int order = -1);

Vector assemble_load(const FeSpace& space, const ScalarField& f, int order = -1);

/// Nodal interpolant of g.
Vector interpolate(const FeSpace& space, const ScalarField& g);

/// Matrix with right-hand side and the constrained DOFs.
struct SparseSystem {
  SparseMatrix matrix;
  Vector rhs;
  std::vector<int> constrained;
  Vector constrained_values;
};

/// Symmetric elimination of the exterior-boundary DOFs with g interpolated:
/// constrained rows and columns are zeroed with unit diagonal, the right-hand
/// side carries g on constrained DOFs and is corrected elsewhere.
void apply_dirichlet(SparseSystem& system, const FeSpace& space, const ScalarField& g);

struct ExactSolution {
  ScalarField u;
  VectorField grad;
};

struct H1Error {
  double error = 0.0;     // ||u_h - u||_{H^1}
  double norm = 0.0;      // ||u||_{H^1}
  double l2_error = 0.0;  // ||u_h - u||_{L^2}
};

H1Error h1_error(const FeSpace& space, const Vector& uh, const ExactSolution& exact, int order = -1);

/// Value and gradient of the discrete function at a point inside triangle t.
double evaluate(const FeSpace& space, const Vector& uh, int t, const std::array<double, 3>& bary);

}  // namespace nicem
