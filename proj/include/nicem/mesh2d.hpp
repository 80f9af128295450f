#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nicem {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

inline constexpr int kExterior = -1;

/// Edge on the boundary of a subdomain; `neighbor` is the id of the adjacent
/// subdomain or kExterior.
struct BoundaryEdge {
  std::array<int, 2> v{};
  int neighbor = kExterior;
  bool is_interface() const { return neighbor != kExterior; }
};

struct SubdomainMesh {
  int id = 0;
  Rect rect;
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;

  double signed_area(int t) const;
  double area() const;
};

/// Straight interface segment between subdomains `a` and `b` (a < b). Each
/// chain lists vertex indices of the respective subdomain mesh, ordered from
/// `start` to `end`.
struct Interface {
  int a = 0;
  int b = 0;
  Point start;
  Point end;
  std::vector<int> chain_a;
  std::vector<int> chain_b;

  double length() const;
  const std::vector<int>& chain_of(int subdomain) const;
};

struct DecomposedMesh {
  Rect domain;
  std::vector<SubdomainMesh> subdomains;
  std::vector<Interface> interfaces;

  /// Rebuilds `interfaces` from the interface-tagged boundary edges.
  void rebuild_interfaces();
  std::size_t triangle_count() const;
};

/// One rectangle of a layout with its division counts.
struct SubdomainSpec {
  Rect rect;
  int nx = 1;
  int ny = 1;
  bool alternate_diagonals = false;
};

class LayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structured triangulation of every rectangle (each cell split in two), with
/// interfaces extracted between rectangles sharing a full side. Throws
/// LayoutError for overlaps, gaps, or partially shared sides.
DecomposedMesh build_rect_partition(const Rect& domain, std::span<const SubdomainSpec> layout);

/// Uniform refinement: every triangle is split into factor^2 similar triangles.
DecomposedMesh refine(const DecomposedMesh& mesh, int factor);
SubdomainMesh refine(const SubdomainMesh& mesh, int factor);

struct MeshSize {
  double h_max = 0.0;  // largest triangle diameter
  double h_min = 0.0;  // smallest triangle diameter
};
MeshSize mesh_size(const SubdomainMesh& mesh);
double max_mesh_size(const DecomposedMesh& mesh);

/// Step statistics of an interface chain (chord lengths between consecutive nodes).
struct StepStats {
  double h_min = 0.0;
  double h_mean = 0.0;
  double h_max = 0.0;
};
StepStats chain_steps(const SubdomainMesh& mesh, const std::vector<int>& chain);
/// Statistics over both sides of an interface.
StepStats interface_steps(const DecomposedMesh& mesh, const Interface& iface);

/// max over triangles of h_T / rho_T (rho_T the inscribed circle diameter).
double shape_regularity(const SubdomainMesh& mesh);

/// Throws std::runtime_error when a structural invariant is violated.
void validate(const SubdomainMesh& mesh, double max_regularity = 10.0);
void validate(const DecomposedMesh& mesh, double max_regularity = 10.0);

// Text format "nicem-mesh v1".
void write_mesh(std::ostream& os, const DecomposedMesh& mesh);
DecomposedMesh read_mesh(std::istream& is);

/// VTK legacy ASCII (unstructured grid) with one block per subdomain merged;
/// `point_data` optionally holds one vertex value per subdomain vertex.
void write_vtk(std::ostream& os, const DecomposedMesh& mesh,
               const std::vector<std::vector<double>>* point_data = nullptr,
               const std::string& field_name = "u");

}  // namespace nicem
