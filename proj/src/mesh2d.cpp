#include "nicem/mesh2d.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace nicem {

namespace {

constexpr double kGeomTol = 1e-12;

double dist(const Point& a, const Point& b) { return std::hypot(b.x - a.x, b.y - a.y); }

bool near(double a, double b, double scale = 1.0) {
  return std::abs(a - b) <= kGeomTol * std::max(1.0, scale);
}

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

// One side of a rectangle: fixed coordinate along `axis` (0: x = c, 1: y = c),
// running over [lo, hi] in the other coordinate.
struct Side {
  int axis;
  double c;
  double lo, hi;
};

std::array<Side, 4> sides_of(const Rect& r) {
  return {Side{1, r.y0, r.x0, r.x1}, Side{0, r.x1, r.y0, r.y1}, Side{1, r.y1, r.x0, r.x1},
          Side{0, r.x0, r.y0, r.y1}};
}

std::string rect_str(int i, const Rect& r) {
  std::ostringstream os;
  os << "#" << i << " [" << r.x0 << "," << r.x1 << "]x[" << r.y0 << "," << r.y1 << "]";
  return os.str();
}

SubdomainMesh structured_mesh(int id, const SubdomainSpec& spec, const std::array<int, 4>& side_neighbor) {
  SubdomainMesh m;
  m.id = id;
  m.rect = spec.rect;
  const int nx = spec.nx, ny = spec.ny;
  const Rect& r = spec.rect;
  auto coord = [](double a, double b, int i, int n) { return i == n ? b : a + (b - a) * i / n; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) m.vertices.push_back({coord(r.x0, r.x1, i, nx), coord(r.y0, r.y1, j, ny)});
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      if (spec.alternate_diagonals && (i + j) % 2 == 1) {
        m.triangles.push_back({v00, v10, v01});
        m.triangles.push_back({v10, v11, v01});
      } else {
        m.triangles.push_back({v00, v10, v11});
        m.triangles.push_back({v00, v11, v01});
      }
    }
  }
  // Bottom, right, top, left; counterclockwise around the rectangle.
  for (int i = 0; i < nx; ++i) m.boundary_edges.push_back({{vid(i, 0), vid(i + 1, 0)}, side_neighbor[0]});
  for (int j = 0; j < ny; ++j) m.boundary_edges.push_back({{vid(nx, j), vid(nx, j + 1)}, side_neighbor[1]});
  for (int i = nx; i > 0; --i) m.boundary_edges.push_back({{vid(i, ny), vid(i - 1, ny)}, side_neighbor[2]});
  for (int j = ny; j > 0; --j) m.boundary_edges.push_back({{vid(0, j), vid(0, j - 1)}, side_neighbor[3]});
  return m;
}

}  // namespace

double SubdomainMesh::signed_area(int t) const {
  const auto& tri = triangles[t];
  const Point& a = vertices[tri[0]];
  const Point& b = vertices[tri[1]];
  const Point& c = vertices[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double SubdomainMesh::area() const {
  double s = 0.0;
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t) s += signed_area(t);
  return s;
}

double Interface::length() const { return dist(start, end); }

const std::vector<int>& Interface::chain_of(int subdomain) const {
  if (subdomain == a) return chain_a;
  if (subdomain == b) return chain_b;
  throw std::invalid_argument("Interface::chain_of: subdomain not on this interface");
}

std::size_t DecomposedMesh::triangle_count() const {
  std::size_t n = 0;
  for (const auto& s : subdomains) n += s.triangles.size();
  return n;
}

void DecomposedMesh::rebuild_interfaces() {
  interfaces.clear();
  const int k_count = static_cast<int>(subdomains.size());

  auto chain_for = [&](int k, int nbr) {
    const auto& m = subdomains[k];
    std::map<int, int> degree;
    for (const auto& e : m.boundary_edges) {
      if (e.neighbor != nbr) continue;
      ++degree[e.v[0]];
      ++degree[e.v[1]];
    }
    std::vector<int> ends, all;
    for (auto [v, d] : degree) {
      all.push_back(v);
      if (d == 1) ends.push_back(v);
    }
    return std::pair{all, ends};
  };

  for (int a = 0; a < k_count; ++a) {
    std::set<int> nbrs;
    for (const auto& e : subdomains[a].boundary_edges)
      if (e.is_interface()) nbrs.insert(e.neighbor);
    for (int b : nbrs) {
      if (b <= a) continue;
      if (b >= k_count) throw std::runtime_error("interface tag refers to unknown subdomain");
      auto [all_a, ends_a] = chain_for(a, b);
      auto [all_b, ends_b] = chain_for(b, a);
      if (ends_a.size() != 2 || ends_b.size() != 2)
        throw std::runtime_error("interface between subdomains " + std::to_string(a) + " and " +
                                 std::to_string(b) + " is not a single connected chain");
      const auto& va = subdomains[a].vertices;
      const auto& vb = subdomains[b].vertices;
      Point p0 = va[ends_a[0]], p1 = va[ends_a[1]];
      if (std::tie(p1.x, p1.y) < std::tie(p0.x, p0.y)) std::swap(p0, p1);
      Interface iface;
      iface.a = a;
      iface.b = b;
      iface.start = p0;
      iface.end = p1;
      const double dx = p1.x - p0.x, dy = p1.y - p0.y;
      auto sort_chain = [&](std::vector<int> chain, const std::vector<Point>& verts) {
        std::sort(chain.begin(), chain.end(), [&](int i, int j) {
          return (verts[i].x - p0.x) * dx + (verts[i].y - p0.y) * dy <
                 (verts[j].x - p0.x) * dx + (verts[j].y - p0.y) * dy;
        });
        return chain;
      };
      iface.chain_a = sort_chain(all_a, va);
      iface.chain_b = sort_chain(all_b, vb);
      interfaces.push_back(std::move(iface));
    }
  }
}

DecomposedMesh build_rect_partition(const Rect& domain, std::span<const SubdomainSpec> layout) {
  if (layout.empty()) throw LayoutError("empty layout");
  const double scale = std::max(domain.x1 - domain.x0, domain.y1 - domain.y0);
  const int n = static_cast<int>(layout.size());

  for (int i = 0; i < n; ++i) {
    const auto& s = layout[i];
    const Rect& r = s.rect;
    if (s.nx < 1 || s.ny < 1) throw LayoutError("subdomain " + rect_str(i, r) + ": resolutions must be >= 1");
    if (!(r.x1 > r.x0 && r.y1 > r.y0)) throw LayoutError("subdomain " + rect_str(i, r) + " is degenerate");
    if (r.x0 < domain.x0 - kGeomTol * scale || r.x1 > domain.x1 + kGeomTol * scale ||
        r.y0 < domain.y0 - kGeomTol * scale || r.y1 > domain.y1 + kGeomTol * scale)
      throw LayoutError("subdomain " + rect_str(i, r) + " leaves the domain");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Rect& a = layout[i].rect;
      const Rect& b = layout[j].rect;
      const double ox = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
      const double oy = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
      if (ox > kGeomTol * scale && oy > kGeomTol * scale)
        throw LayoutError("overlapping subdomains " + rect_str(i, a) + " and " + rect_str(j, b));
    }
  }

  // Side-by-side matching: each side is exterior, or fully shared with exactly one rectangle.
  std::vector<std::array<int, 4>> neighbor(n, {kExterior, kExterior, kExterior, kExterior});
  for (int i = 0; i < n; ++i) {
    const auto si = sides_of(layout[i].rect);
    for (int s = 0; s < 4; ++s) {
      const Side& a = si[s];
      std::vector<int> touching;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const Side b = sides_of(layout[j].rect)[(s + 2) % 4];
        if (b.axis != a.axis || !near(a.c, b.c, scale)) continue;
        const double overlap = std::min(a.hi, b.hi) - std::max(a.lo, b.lo);
        if (overlap <= kGeomTol * scale) continue;
        if (!near(a.lo, b.lo, scale) || !near(a.hi, b.hi, scale))
          throw LayoutError("subdomains " + rect_str(i, layout[i].rect) + " and " + rect_str(j, layout[j].rect) +
                            " share only part of a side (geometrically non-conforming)");
        touching.push_back(j);
      }
      if (touching.size() > 1)
        throw LayoutError("side of subdomain " + rect_str(i, layout[i].rect) + " touches several subdomains");
      if (touching.size() == 1) {
        neighbor[i][s] = touching[0];
        continue;
      }
      const bool on_boundary = a.axis == 0 ? (near(a.c, domain.x0, scale) || near(a.c, domain.x1, scale))
                                           : (near(a.c, domain.y0, scale) || near(a.c, domain.y1, scale));
      if (!on_boundary) throw LayoutError("gap next to subdomain " + rect_str(i, layout[i].rect));
    }
  }
  double total = 0.0;
  for (const auto& s : layout) total += s.rect.area();
  if (std::abs(total - domain.area()) > 1e-12 * domain.area())
    throw LayoutError("layout does not tile the domain (area mismatch " +
                      std::to_string(total - domain.area()) + ")");

  // Snap coordinates that agree to tolerance so shared corners coincide exactly.
  std::vector<SubdomainSpec> specs(layout.begin(), layout.end());
  auto snap = [&](auto member_list) {
    std::vector<double> reps;
    for (auto& s : specs)
      for (auto member : member_list) {
        double& c = s.rect.*member;
        auto it = std::find_if(reps.begin(), reps.end(), [&](double r) { return near(r, c, scale); });
        if (it == reps.end())
          reps.push_back(c);
        else
          c = *it;
      }
  };
  snap(std::array{&Rect::x0, &Rect::x1});
  snap(std::array{&Rect::y0, &Rect::y1});

  DecomposedMesh mesh;
  mesh.domain = domain;
  for (int i = 0; i < n; ++i) mesh.subdomains.push_back(structured_mesh(i, specs[i], neighbor[i]));
  mesh.rebuild_interfaces();
  return mesh;
}

SubdomainMesh refine(const SubdomainMesh& mesh, int factor) {
  if (factor != 2 && factor != 3) throw std::invalid_argument("refine: factor must be 2 or 3");
  const int f = factor;
  SubdomainMesh out;
  out.id = mesh.id;
  out.rect = mesh.rect;
  out.vertices = mesh.vertices;

  // New nodes of each edge, ordered from the lower to the higher vertex index.
  std::map<std::pair<int, int>, std::vector<int>> edge_nodes;
  auto nodes_of = [&](int a, int b) -> const std::vector<int>& {
    const auto key = edge_key(a, b);
    auto it = edge_nodes.find(key);
    if (it != edge_nodes.end()) return it->second;
    std::vector<int> ids;
    const Point p = out.vertices[key.first];
    const Point q = out.vertices[key.second];
    for (int t = 1; t < f; ++t) {
      ids.push_back(static_cast<int>(out.vertices.size()));
      out.vertices.push_back({p.x + (q.x - p.x) * t / f, p.y + (q.y - p.y) * t / f});
    }
    return edge_nodes.emplace(key, std::move(ids)).first->second;
  };
  // Node `t` steps from a towards b (0 < t < f).
  auto edge_node = [&](int a, int b, int t) {
    const auto& ids = nodes_of(a, b);
    return a < b ? ids[t - 1] : ids[f - t - 1];
  };

  for (const auto& tri : mesh.triangles) {
    const int a = tri[0], b = tri[1], c = tri[2];
    int interior = -1;
    auto node = [&](int i, int j, int k) -> int {
      if (j == 0 && k == 0) return a;
      if (i == 0 && k == 0) return b;
      if (i == 0 && j == 0) return c;
      if (k == 0) return edge_node(a, b, j);
      if (i == 0) return edge_node(b, c, k);
      if (j == 0) return edge_node(c, a, i);
      // Only (1,1,1) for f = 3.
      if (interior < 0) {
        const Point& pa = mesh.vertices[a];
        const Point& pb = mesh.vertices[b];
        const Point& pc = mesh.vertices[c];
        interior = static_cast<int>(out.vertices.size());
        out.vertices.push_back({(i * pa.x + j * pb.x + k * pc.x) / f, (i * pa.y + j * pb.y + k * pc.y) / f});
      }
      return interior;
    };
    for (int i = 0; i < f; ++i)
      for (int j = 0; i + j < f; ++j) {
        const int k = f - 1 - i - j;
        out.triangles.push_back({node(i + 1, j, k), node(i, j + 1, k), node(i, j, k + 1)});
      }
    for (int i = 0; i < f - 1; ++i)
      for (int j = 0; i + j < f - 1; ++j) {
        const int k = f - 2 - i - j;
        out.triangles.push_back({node(i, j + 1, k + 1), node(i + 1, j, k + 1), node(i + 1, j + 1, k)});
      }
  }
  for (const auto& e : mesh.boundary_edges) {
    int prev = e.v[0];
    for (int t = 1; t < f; ++t) {
      const int cur = edge_node(e.v[0], e.v[1], t);
      out.boundary_edges.push_back({{prev, cur}, e.neighbor});
      prev = cur;
    }
    out.boundary_edges.push_back({{prev, e.v[1]}, e.neighbor});
  }
  return out;
}

DecomposedMesh refine(const DecomposedMesh& mesh, int factor) {
  DecomposedMesh out;
  out.domain = mesh.domain;
  for (const auto& s : mesh.subdomains) out.subdomains.push_back(refine(s, factor));
  out.rebuild_interfaces();
  return out;
}

MeshSize mesh_size(const SubdomainMesh& mesh) {
  if (mesh.triangles.empty()) throw std::invalid_argument("mesh_size: empty mesh");
  MeshSize s{0.0, std::numeric_limits<double>::infinity()};
  for (const auto& t : mesh.triangles) {
    const auto& v = mesh.vertices;
    const double h = std::max({dist(v[t[0]], v[t[1]]), dist(v[t[1]], v[t[2]]), dist(v[t[2]], v[t[0]])});
    s.h_max = std::max(s.h_max, h);
    s.h_min = std::min(s.h_min, h);
  }
  return s;
}

double max_mesh_size(const DecomposedMesh& mesh) {
  double h = 0.0;
  for (const auto& s : mesh.subdomains) h = std::max(h, mesh_size(s).h_max);
  return h;
}

StepStats chain_steps(const SubdomainMesh& mesh, const std::vector<int>& chain) {
  if (chain.size() < 2) throw std::invalid_argument("chain_steps: chain needs two nodes");
  StepStats s{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const double h = dist(mesh.vertices[chain[i]], mesh.vertices[chain[i + 1]]);
    s.h_min = std::min(s.h_min, h);
    s.h_max = std::max(s.h_max, h);
    total += h;
  }
  s.h_mean = total / static_cast<double>(chain.size() - 1);
  return s;
}

StepStats interface_steps(const DecomposedMesh& mesh, const Interface& iface) {
  const auto a = chain_steps(mesh.subdomains[iface.a], iface.chain_a);
  const auto b = chain_steps(mesh.subdomains[iface.b], iface.chain_b);
  const double na = static_cast<double>(iface.chain_a.size() - 1);
  const double nb = static_cast<double>(iface.chain_b.size() - 1);
  return {std::min(a.h_min, b.h_min), (a.h_mean * na + b.h_mean * nb) / (na + nb), std::max(a.h_max, b.h_max)};
}

double shape_regularity(const SubdomainMesh& mesh) {
  double sigma = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& v = mesh.vertices;
    const double e0 = dist(v[tri[0]], v[tri[1]]);
    const double e1 = dist(v[tri[1]], v[tri[2]]);
    const double e2 = dist(v[tri[2]], v[tri[0]]);
    const double rho = 4.0 * std::abs(mesh.signed_area(t)) / (e0 + e1 + e2);
    sigma = std::max(sigma, std::max({e0, e1, e2}) / rho);
  }
  return sigma;
}

void validate(const SubdomainMesh& mesh, double max_regularity) {
  const std::string who = "subdomain " + std::to_string(mesh.id) + ": ";
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t)
    if (!(mesh.signed_area(t) > 0.0)) throw std::runtime_error(who + "triangle " + std::to_string(t) + " is not positively oriented");
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : mesh.triangles)
    for (int i = 0; i < 3; ++i) ++count[edge_key(t[i], t[(i + 1) % 3])];
  std::set<std::pair<int, int>> boundary;
  for (const auto& e : mesh.boundary_edges) {
    if (!boundary.insert(edge_key(e.v[0], e.v[1])).second) throw std::runtime_error(who + "duplicate boundary edge");
    auto it = count.find(edge_key(e.v[0], e.v[1]));
    if (it == count.end() || it->second != 1) throw std::runtime_error(who + "boundary edge not on exactly one triangle");
  }
  for (const auto& [key, c] : count) {
    if (c > 2) throw std::runtime_error(who + "edge shared by more than two triangles");
    if (c == 1 && !boundary.contains(key)) throw std::runtime_error(who + "untagged boundary edge");
  }
  const long v = static_cast<long>(mesh.vertices.size());
  const long e = static_cast<long>(count.size());
  const long t = static_cast<long>(mesh.triangles.size());
  if (v - e + t != 1) throw std::runtime_error(who + "Euler characteristic is not 1");
  const double sigma = shape_regularity(mesh);
  if (sigma > max_regularity)
    throw std::runtime_error(who + "shape regularity " + std::to_string(sigma) + " exceeds bound");
}

void validate(const DecomposedMesh& mesh, double max_regularity) {
  double total = 0.0;
  for (const auto& s : mesh.subdomains) {
    validate(s, max_regularity);
    total += s.area();
  }
  if (std::abs(total - mesh.domain.area()) > 1e-12 * mesh.domain.area())
    throw std::runtime_error("subdomain areas do not sum to the domain area");
  for (const auto& iface : mesh.interfaces) {
    const double len = iface.length();
    const double ux = (iface.end.x - iface.start.x) / len, uy = (iface.end.y - iface.start.y) / len;
    for (int side = 0; side < 2; ++side) {
      const auto& chain = side == 0 ? iface.chain_a : iface.chain_b;
      const auto& verts = mesh.subdomains[side == 0 ? iface.a : iface.b].vertices;
      if (dist(verts[chain.front()], iface.start) > 1e-12 || dist(verts[chain.back()], iface.end) > 1e-12)
        throw std::runtime_error("interface chain endpoints differ between sides");
      double prev = -1.0;
      for (int v : chain) {
        const double dx = verts[v].x - iface.start.x, dy = verts[v].y - iface.start.y;
        if (std::abs(dx * uy - dy * ux) > 1e-12 * std::max(1.0, len))
          throw std::runtime_error("interface node off the straight segment");
        const double s = dx * ux + dy * uy;
        if (!(s > prev)) throw std::runtime_error("interface chain not strictly monotone");
        prev = s;
      }
    }
  }
}

void write_mesh(std::ostream& os, const DecomposedMesh& mesh) {
  const auto old_prec = os.precision(17);
  os << "nicem-mesh v1\n";
  os << "domain " << mesh.domain.x0 << ' ' << mesh.domain.x1 << ' ' << mesh.domain.y0 << ' ' << mesh.domain.y1 << '\n';
  os << "subdomains " << mesh.subdomains.size() << '\n';
  for (const auto& s : mesh.subdomains) {
    os << "subdomain " << s.id << ' ' << s.rect.x0 << ' ' << s.rect.x1 << ' ' << s.rect.y0 << ' ' << s.rect.y1 << '\n';
    os << "vertices " << s.vertices.size() << '\n';
    for (const auto& v : s.vertices) os << v.x << ' ' << v.y << '\n';
    os << "triangles " << s.triangles.size() << '\n';
    for (const auto& t : s.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    os << "boundary_edges " << s.boundary_edges.size() << '\n';
    for (const auto& e : s.boundary_edges) {
      os << e.v[0] << ' ' << e.v[1] << ' ';
      if (e.is_interface())
        os << "interface " << e.neighbor << '\n';
      else
        os << "exterior\n";
    }
  }
  os.precision(old_prec);
}

DecomposedMesh read_mesh(std::istream& is) {
  auto fail = [](const std::string& what) { throw std::runtime_error("read_mesh: " + what); };
  auto expect = [&](const std::string& word) {
    std::string tok;
    if (!(is >> tok) || tok != word) fail("expected '" + word + "'");
  };
  std::string line;
  std::getline(is, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "nicem-mesh v1") fail("missing 'nicem-mesh v1' header");
  DecomposedMesh mesh;
  expect("domain");
  is >> mesh.domain.x0 >> mesh.domain.x1 >> mesh.domain.y0 >> mesh.domain.y1;
  expect("subdomains");
  std::size_t k = 0;
  is >> k;
  for (std::size_t i = 0; i < k; ++i) {
    SubdomainMesh s;
    expect("subdomain");
    is >> s.id >> s.rect.x0 >> s.rect.x1 >> s.rect.y0 >> s.rect.y1;
    std::size_t n = 0;
    expect("vertices");
    is >> n;
    s.vertices.resize(n);
    for (auto& v : s.vertices) is >> v.x >> v.y;
    expect("triangles");
    is >> n;
    s.triangles.resize(n);
    for (auto& t : s.triangles) is >> t[0] >> t[1] >> t[2];
    expect("boundary_edges");
    is >> n;
    s.boundary_edges.resize(n);
    for (auto& e : s.boundary_edges) {
      std::string tag;
      is >> e.v[0] >> e.v[1] >> tag;
      if (tag == "interface")
        is >> e.neighbor;
      else if (tag == "exterior")
        e.neighbor = kExterior;
      else
        fail("unknown edge tag '" + tag + "'");
    }
    if (!is) fail("truncated subdomain block");
    for (const auto& t : s.triangles)
      for (int v : t)
        if (v < 0 || v >= static_cast<int>(s.vertices.size())) fail("vertex index out of range");
    mesh.subdomains.push_back(std::move(s));
  }
  mesh.rebuild_interfaces();
  return mesh;
}

void write_vtk(std::ostream& os, const DecomposedMesh& mesh, const std::vector<std::vector<double>>* point_data,
               const std::string& field_name) {
  std::size_t nv = 0, nt = 0;
  for (const auto& s : mesh.subdomains) {
    nv += s.vertices.size();
    nt += s.triangles.size();
  }
  const auto old_prec = os.precision(17);
  os << "# vtk DataFile Version 3.0\nnicem decomposed mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nv << " double\n";
  for (const auto& s : mesh.subdomains)
    for (const auto& v : s.vertices) os << v.x << ' ' << v.y << " 0\n";
  os << "CELLS " << nt << ' ' << 4 * nt << '\n';
  std::size_t offset = 0;
  for (const auto& s : mesh.subdomains) {
    for (const auto& t : s.triangles)
      os << "3 " << t[0] + offset << ' ' << t[1] + offset << ' ' << t[2] + offset << '\n';
    offset += s.vertices.size();
  }
  os << "CELL_TYPES " << nt << '\n';
  for (std::size_t i = 0; i < nt; ++i) os << "5\n";
  os << "CELL_DATA " << nt << "\nSCALARS subdomain int 1\nLOOKUP_TABLE default\n";
  for (const auto& s : mesh.subdomains)
    for (std::size_t i = 0; i < s.triangles.size(); ++i) os << s.id << '\n';
  if (point_data) {
    if (point_data->size() != mesh.subdomains.size()) throw std::invalid_argument("write_vtk: point data per subdomain expected");
    os << "POINT_DATA " << nv << "\nSCALARS " << field_name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t k = 0; k < mesh.subdomains.size(); ++k) {
      const auto& d = (*point_data)[k];
      if (d.size() < mesh.subdomains[k].vertices.size()) throw std::invalid_argument("write_vtk: short point data");
      for (std::size_t i = 0; i < mesh.subdomains[k].vertices.size(); ++i) os << d[i] << '\n';
    }
  }
  os.precision(old_prec);
}

}  // namespace nicem
