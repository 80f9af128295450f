#include "nicem/lagrange_fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "nicem/quadrature.hpp"

namespace nicem {

namespace {

void check_degree(int degree) {
  if (degree < 1 || degree > 3) throw std::invalid_argument("unsupported Lagrange degree " + std::to_string(degree));
}

// Integer barycentric lattice coordinates (sum = p) of the local nodes.
std::vector<std::array<int, 3>> lattice(int p) {
  std::vector<std::array<int, 3>> nodes = {{p, 0, 0}, {0, p, 0}, {0, 0, p}};
  for (int t = 1; t < p; ++t) nodes.push_back({p - t, t, 0});
  for (int t = 1; t < p; ++t) nodes.push_back({0, p - t, t});
  for (int t = 1; t < p; ++t) nodes.push_back({t, 0, p - t});
  for (int i = 1; i < p; ++i)
    for (int j = 1; i + j < p; ++j) nodes.push_back({p - i - j, i, j});
  return nodes;
}

// prod_{s < a} (p l - s) / (s + 1) and its derivative in l.
std::pair<double, double> lattice_factor(int p, int a, double l) {
  double value = 1.0;
  for (int s = 0; s < a; ++s) value *= (p * l - s) / (s + 1.0);
  double deriv = 0.0;
  for (int r = 0; r < a; ++r) {
    double term = p / (r + 1.0);
    for (int s = 0; s < a; ++s)
      if (s != r) term *= (p * l - s) / (s + 1.0);
    deriv += term;
  }
  return {value, deriv};
}

struct Geometry {
  double det;              // 2 * area
  std::array<double, 4> jinv_t;  // J^{-T}, row-major
  Point p0, e1, e2;
};

Geometry geometry(const SubdomainMesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const Point a = mesh.vertices[tri[0]];
  const Point b = mesh.vertices[tri[1]];
  const Point c = mesh.vertices[tri[2]];
  Geometry g;
  g.p0 = a;
  g.e1 = {b.x - a.x, b.y - a.y};
  g.e2 = {c.x - a.x, c.y - a.y};
  g.det = g.e1.x * g.e2.y - g.e2.x * g.e1.y;
  if (!(std::abs(g.det) > 0.0)) throw std::runtime_error("degenerate triangle " + std::to_string(t));
  // J = [e1 e2]; J^{-T} = 1/det [[e2.y, -e1.y], [-e2.x, e1.x]]
  g.jinv_t = {g.e2.y / g.det, -g.e1.y / g.det, -g.e2.x / g.det, g.e1.x / g.det};
  return g;
}

std::array<double, 2> physical_grad(const Geometry& g, const std::array<double, 2>& ref) {
  return {g.jinv_t[0] * ref[0] + g.jinv_t[1] * ref[1], g.jinv_t[2] * ref[0] + g.jinv_t[3] * ref[1]};
}

Point map_point(const Geometry& g, const std::array<double, 2>& xi) {
  return {g.p0.x + g.e1.x * xi[0] + g.e2.x * xi[1], g.p0.y + g.e1.y * xi[0] + g.e2.y * xi[1]};
}

struct TabulatedBasis {
  TriangleRule rule;
  std::vector<BasisEval> at;
};

TabulatedBasis tabulate(int degree, int order) {
  TabulatedBasis tb;
  tb.rule = triangle_rule(order);
  for (const auto& q : tb.rule.points) tb.at.push_back(reference_basis(degree, {1.0 - q[0] - q[1], q[0], q[1]}));
  return tb;
}

int resolve(int order, int fallback) { return order < 0 ? fallback : order; }

std::pair<int, int> sorted_pair(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

int local_dof_count(int degree) {
  check_degree(degree);
  return (degree + 1) * (degree + 2) / 2;
}

std::vector<std::array<double, 3>> reference_nodes(int degree) {
  check_degree(degree);
  std::vector<std::array<double, 3>> out;
  for (const auto& n : lattice(degree))
    out.push_back({static_cast<double>(n[0]) / degree, static_cast<double>(n[1]) / degree,
                   static_cast<double>(n[2]) / degree});
  return out;
}

BasisEval reference_basis(int degree, const std::array<double, 3>& bary) {
  check_degree(degree);
  const auto nodes = lattice(degree);
  BasisEval out;
  out.values.reserve(nodes.size());
  out.grads.reserve(nodes.size());
  for (const auto& n : nodes) {
    std::array<std::pair<double, double>, 3> f;
    for (int i = 0; i < 3; ++i) f[i] = lattice_factor(degree, n[i], bary[i]);
    const double d0 = f[0].second * f[1].first * f[2].first;
    const double d1 = f[0].first * f[1].second * f[2].first;
    const double d2 = f[0].first * f[1].first * f[2].second;
    out.values.push_back(f[0].first * f[1].first * f[2].first);
    // l0 = 1 - xi - eta, l1 = xi, l2 = eta
    out.grads.push_back({d1 - d0, d2 - d0});
  }
  return out;
}

FeSpace::FeSpace(const SubdomainMesh& mesh, int degree) : mesh_(&mesh), degree_(degree) {
  check_degree(degree);
  local_ = local_dof_count(degree);
  const int nv = static_cast<int>(mesh.vertices.size());
  const int nt = static_cast<int>(mesh.triangles.size());

  std::map<std::pair<int, int>, int> edges;
  for (const auto& tri : mesh.triangles)
    for (int i = 0; i < 3; ++i) edges.emplace(sorted_pair(tri[i], tri[(i + 1) % 3]), static_cast<int>(edges.size()));
  edge_count_ = static_cast<int>(edges.size());
  edge_index_.assign(edges.begin(), edges.end());

  const int per_edge = degree - 1;
  const int per_cell = (degree - 1) * (degree - 2) / 2;
  dof_count_ = nv + per_edge * edge_count_ + per_cell * nt;

  coords_.resize(dof_count_);
  for (int v = 0; v < nv; ++v) coords_[v] = mesh.vertices[v];
  for (const auto& [key, e] : edge_index_) {
    const Point a = mesh.vertices[key.first];
    const Point b = mesh.vertices[key.second];
    for (int k = 0; k < per_edge; ++k) {
      const double s = static_cast<double>(k + 1) / degree;
      coords_[nv + e * per_edge + k] = {a.x + (b.x - a.x) * s, a.y + (b.y - a.y) * s};
    }
  }

  cell_dofs_.resize(static_cast<std::size_t>(nt) * local_);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    int* out = cell_dofs_.data() + static_cast<std::size_t>(t) * local_;
    int n = 0;
    for (int i = 0; i < 3; ++i) out[n++] = tri[i];
    for (int i = 0; i < 3; ++i)
      for (int s = 1; s < degree; ++s) out[n++] = edge_dofs_from(tri[i], tri[(i + 1) % 3], s);
    for (int j = 0; j < per_cell; ++j) {
      const int dof = nv + per_edge * edge_count_ + per_cell * t + j;
      out[n++] = dof;
      const Point a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
      coords_[dof] = {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
    }
  }

  for (const auto& e : mesh.boundary_edges) {
    if (e.is_interface()) continue;
    dirichlet_.push_back(e.v[0]);
    dirichlet_.push_back(e.v[1]);
    for (int s = 1; s < degree; ++s) dirichlet_.push_back(edge_dofs_from(e.v[0], e.v[1], s));
  }
  std::sort(dirichlet_.begin(), dirichlet_.end());
  dirichlet_.erase(std::unique(dirichlet_.begin(), dirichlet_.end()), dirichlet_.end());
}

int FeSpace::edge_dofs_from(int a, int b, int step) const {
  const auto key = sorted_pair(a, b);
  auto it = std::lower_bound(edge_index_.begin(), edge_index_.end(), key,
                             [](const auto& entry, const auto& k) { return entry.first < k; });
  if (it == edge_index_.end() || it->first != key) throw std::invalid_argument("FeSpace: not a mesh edge");
  const int k = a < b ? step - 1 : degree_ - 1 - step;
  return static_cast<int>(mesh_->vertices.size()) + it->second * (degree_ - 1) + k;
}

std::vector<int> FeSpace::trace_dofs(const std::vector<int>& chain) const {
  if (chain.size() < 2) throw std::invalid_argument("trace_dofs: chain needs two nodes");
  std::vector<int> out;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    out.push_back(chain[i]);
    for (int s = 1; s < degree_; ++s) out.push_back(edge_dofs_from(chain[i], chain[i + 1], s));
  }
  out.push_back(chain.back());
  return out;
}

namespace {

SparseMatrix assemble_bilinear(const FeSpace& space, int order, double stiff_w, double mass_w) {
  const int p = space.degree();
  const auto tb = tabulate(p, resolve(order, 2 * p));
  const int nl = local_dof_count(p);
  const int nt = static_cast<int>(space.mesh().triangles.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nt) * nl * nl);
  std::vector<std::array<double, 2>> g(nl);
  Eigen::MatrixXd local(nl, nl);
  for (int t = 0; t < nt; ++t) {
    const Geometry geo = geometry(space.mesh(), t);
    local.setZero();
    for (std::size_t q = 0; q < tb.rule.weights.size(); ++q) {
      const double w = tb.rule.weights[q] * std::abs(geo.det);
      const auto& be = tb.at[q];
      for (int i = 0; i < nl; ++i) g[i] = physical_grad(geo, be.grads[i]);
      for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j)
          local(i, j) += w * (stiff_w * (g[i][0] * g[j][0] + g[i][1] * g[j][1]) + mass_w * be.values[i] * be.values[j]);
    }
    const auto dofs = space.cell_dofs(t);
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) trip.emplace_back(dofs[i], dofs[j], local(i, j));
  }
  SparseMatrix a(space.dof_count(), space.dof_count());
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

}  // namespace

SparseMatrix assemble_stiffness(const FeSpace& space, int order) { return assemble_bilinear(space, order, 1.0, 0.0); }

SparseMatrix assemble_mass(const FeSpace& space, int order) { return assemble_bilinear(space, order, 0.0, 1.0); }

SparseMatrix assemble_reaction_diffusion(const FeSpace& space, int order) {
  return assemble_bilinear(space, order, 1.0, 1.0);
}

Vector assemble_load(const FeSpace& space, const ScalarField& f, int order) {
  const int p = space.degree();
  const auto tb = tabulate(p, resolve(order, 2 * p + 4));
  const int nl = local_dof_count(p);
  Vector b = Vector::Zero(space.dof_count());
  for (int t = 0; t < static_cast<int>(space.mesh().triangles.size()); ++t) {
    const Geometry geo = geometry(space.mesh(), t);
    const auto dofs = space.cell_dofs(t);
    for (std::size_t q = 0; q < tb.rule.weights.size(); ++q) {
      const Point x = map_point(geo, tb.rule.points[q]);
      const double fw = f(x.x, x.y) * tb.rule.weights[q] * std::abs(geo.det);
      for (int i = 0; i < nl; ++i) b[dofs[i]] += fw * tb.at[q].values[i];
    }
  }
  return b;
}

Vector interpolate(const FeSpace& space, const ScalarField& g) {
  Vector v(space.dof_count());
  const auto& c = space.dof_coords();
  for (int i = 0; i < space.dof_count(); ++i) v[i] = g(c[i].x, c[i].y);
  return v;
}

void apply_dirichlet(SparseSystem& system, const FeSpace& space, const ScalarField& g) {
  const int n = static_cast<int>(system.matrix.rows());
  if (n != space.dof_count() || system.rhs.size() != n) throw std::invalid_argument("apply_dirichlet: size mismatch");
  system.constrained = space.dirichlet_dofs();
  system.constrained_values.resize(static_cast<Eigen::Index>(system.constrained.size()));
  std::vector<char> fixed(n, 0);
  Vector values = Vector::Zero(n);
  const auto& coords = space.dof_coords();
  for (std::size_t i = 0; i < system.constrained.size(); ++i) {
    const int d = system.constrained[i];
    fixed[d] = 1;
    values[d] = g(coords[d].x, coords[d].y);
    system.constrained_values[static_cast<Eigen::Index>(i)] = values[d];
  }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(system.matrix.nonZeros()));
  for (int col = 0; col < system.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(system.matrix, col); it; ++it) {
      const int row = static_cast<int>(it.row());
      if (fixed[row] || fixed[col]) {
        if (fixed[col] && !fixed[row]) system.rhs[row] -= it.value() * values[col];
        continue;
      }
      trip.emplace_back(row, col, it.value());
    }
  }
  for (int d : system.constrained) {
    trip.emplace_back(d, d, 1.0);
    system.rhs[d] = values[d];
  }
  SparseMatrix reduced(n, n);
  reduced.setFromTriplets(trip.begin(), trip.end());
  system.matrix = std::move(reduced);
}

H1Error h1_error(const FeSpace& space, const Vector& uh, const ExactSolution& exact, int order) {
  const int p = space.degree();
  const auto tb = tabulate(p, resolve(order, 2 * p + 4));
  const int nl = local_dof_count(p);
  double err2 = 0.0, norm2 = 0.0, l2 = 0.0;
  for (int t = 0; t < static_cast<int>(space.mesh().triangles.size()); ++t) {
    const Geometry geo = geometry(space.mesh(), t);
    const auto dofs = space.cell_dofs(t);
    for (std::size_t q = 0; q < tb.rule.weights.size(); ++q) {
      const double w = tb.rule.weights[q] * std::abs(geo.det);
      const auto& be = tb.at[q];
      double v = 0.0, gx = 0.0, gy = 0.0;
      for (int i = 0; i < nl; ++i) {
        const double c = uh[dofs[i]];
        const auto g = physical_grad(geo, be.grads[i]);
        v += c * be.values[i];
        gx += c * g[0];
        gy += c * g[1];
      }
      const Point x = map_point(geo, tb.rule.points[q]);
      const double u = exact.u(x.x, x.y);
      const auto du = exact.grad(x.x, x.y);
      const double e0 = v - u, ex = gx - du[0], ey = gy - du[1];
      err2 += w * (e0 * e0 + ex * ex + ey * ey);
      l2 += w * e0 * e0;
      norm2 += w * (u * u + du[0] * du[0] + du[1] * du[1]);
    }
  }
  return {std::sqrt(err2), std::sqrt(norm2), std::sqrt(l2)};
}

double evaluate(const FeSpace& space, const Vector& uh, int t, const std::array<double, 3>& bary) {
  const auto be = reference_basis(space.degree(), bary);
  const auto dofs = space.cell_dofs(t);
  double v = 0.0;
  for (std::size_t i = 0; i < dofs.size(); ++i) v += uh[dofs[i]] * be.values[i];
  return v;
}

}  // namespace nicem
