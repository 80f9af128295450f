#include "nicem/interface_mortar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nicem/legendre.hpp"
#include "nicem/quadrature.hpp"

namespace nicem {

TraceSpace1D::TraceSpace1D(std::vector<double> breakpoints, int degree)
    : breaks_(std::move(breakpoints)), degree_(degree) {
  if (degree < 1) throw std::invalid_argument("TraceSpace1D: degree must be >= 1");
  if (breaks_.size() < 2) throw std::invalid_argument("TraceSpace1D: need at least one segment");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    if (!(breaks_[i + 1] > breaks_[i])) throw std::invalid_argument("TraceSpace1D: breakpoints not increasing");
}

double TraceSpace1D::node(int dof) const {
  if (dof == dimension() - 1) return breaks_.back();
  const int seg = dof / degree_;
  const int j = dof % degree_;
  return breaks_[seg] + (breaks_[seg + 1] - breaks_[seg]) * j / degree_;
}

int TraceSpace1D::segment_of(double s) const {
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), s);
  const int seg = static_cast<int>(it - breaks_.begin()) - 1;
  return std::clamp(seg, 0, segments() - 1);
}

void TraceSpace1D::local_values(int segment, double s, double* out) const {
  const double a = breaks_[segment], b = breaks_[segment + 1];
  const double t = (s - a) / (b - a) * degree_;  // in node units
  for (int j = 0; j <= degree_; ++j) {
    double v = 1.0;
    for (int m = 0; m <= degree_; ++m)
      if (m != j) v *= (t - m) / (j - m);
    out[j] = v;
  }
}

double TraceSpace1D::evaluate(const Eigen::VectorXd& c, double s) const {
  const int seg = segment_of(s);
  std::vector<double> phi(degree_ + 1);
  local_values(seg, s, phi.data());
  double v = 0.0;
  for (int j = 0; j <= degree_; ++j) v += c[seg * degree_ + j] * phi[j];
  return v;
}

std::vector<double> chain_parameters(const SubdomainMesh& mesh, const std::vector<int>& chain, const Point& origin) {
  std::vector<double> s;
  s.reserve(chain.size());
  for (int v : chain) s.push_back(std::hypot(mesh.vertices[v].x - origin.x, mesh.vertices[v].y - origin.y));
  return s;
}

MortarSpace::MortarSpace(TraceSpace1D trace) : trace_(std::move(trace)) {
  const int p = trace_.degree();
  const int n = trace_.segments();
  const int dim_y = trace_.dimension();
  if (n == 1) {
    // Single segment: P_{p-1}, spanned by Legendre polynomials on the segment.
    basis_.resize(p, dim_y);
    for (int j = 0; j < dim_y; ++j) {
      const auto l = legendre::values(p - 1, 2.0 * j / p - 1.0);
      for (int k = 0; k < p; ++k) basis_(k, j) = l[k];
    }
    return;
  }
  // The endpoint DOF is dropped; the degree p-1 polynomial through the
  // remaining p nodes of an end segment is extended to it by extrapolation.
  std::vector<double> w(p + 1, 0.0);
  for (int j = 1; j <= p; ++j) {
    double c = 1.0;
    for (int m = 1; m <= p; ++m)
      if (m != j) c *= static_cast<double>(-m) / (j - m);
    w[j] = c;
  }
  basis_ = Eigen::MatrixXd::Zero(dim_y - 2, dim_y);
  for (int j = 1; j <= dim_y - 2; ++j) {
    const int row = j - 1;
    basis_(row, j) = 1.0;
    if (j <= p) basis_(row, 0) += w[j];
    const int from_end = dim_y - 1 - j;
    if (from_end <= p) basis_(row, dim_y - 1) += w[from_end];
  }
}

Eigen::MatrixXd cross_mass(const TraceSpace1D& rows, const TraceSpace1D& cols) {
  const auto& ra = rows.breakpoints();
  const auto& cb = cols.breakpoints();
  const double len = std::max(rows.length(), cols.length());
  if (std::abs(ra.front() - cb.front()) > 1e-12 * std::max(1.0, len) ||
      std::abs(ra.back() - cb.back()) > 1e-12 * std::max(1.0, len))
    throw std::invalid_argument("cross_mass: spaces are defined on different segments");

  std::vector<double> merged(ra.begin(), ra.end());
  merged.insert(merged.end(), cb.begin() + 1, cb.end() - 1);
  std::sort(merged.begin(), merged.end());
  const double eps = 1e-13 * std::max(1.0, len);
  merged.erase(std::unique(merged.begin(), merged.end(), [eps](double a, double b) { return b - a <= eps; }),
               merged.end());
  merged.back() = ra.back();

  const int pr = rows.degree(), pc = cols.degree();
  const int npts = (pr + pc) / 2 + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows.dimension(), cols.dimension());
  std::vector<double> phi_r(pr + 1), phi_c(pc + 1);
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    const double a = merged[i], b = merged[i + 1];
    const double mid = 0.5 * (a + b);
    const int sr = rows.segment_of(mid);
    const int sc = cols.segment_of(mid);
    const Rule1D rule = gauss_legendre(npts, a, b);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      rows.local_values(sr, rule.points[q], phi_r.data());
      cols.local_values(sc, rule.points[q], phi_c.data());
      for (int r = 0; r <= pr; ++r)
        for (int c = 0; c <= pc; ++c) m(sr * pr + r, sc * pc + c) += rule.weights[q] * phi_r[r] * phi_c[c];
    }
  }
  return m;
}

Eigen::VectorXd CouplingMatrices::project(Source source, const Eigen::VectorXd& v) const {
  switch (source) {
    case Source::OwnTrace: return solve_mass(own * v);
    case Source::NeighborTrace: return solve_mass(nbr_trace * v);
    case Source::NeighborMortar: return solve_mass(nbr_mortar * v);
  }
  throw std::logic_error("unknown projection source");
}

CouplingMatrices build_coupling(const TraceSpace1D& own, const TraceSpace1D& neighbor) {
  if (own.degree() != neighbor.degree()) throw std::invalid_argument("build_coupling: degree mismatch");
  MortarSpace mortar(own);
  MortarSpace nbr_mortar(neighbor);
  const Eigen::MatrixXd own_mass = cross_mass(own, own);
  const Eigen::MatrixXd cross = cross_mass(own, neighbor);
  const Eigen::MatrixXd& q = mortar.basis();
  Eigen::MatrixXd mass_w = q * own_mass * q.transpose();
  Eigen::MatrixXd b_own = q * own_mass;
  Eigen::MatrixXd b_nbr = q * cross;
  Eigen::MatrixXd b_nbr_mortar = b_nbr * nbr_mortar.basis().transpose();
  Eigen::LLT<Eigen::MatrixXd> factor(mass_w);
  if (factor.info() != Eigen::Success) throw std::runtime_error("build_coupling: mortar mass matrix is not SPD");
  return CouplingMatrices{std::move(mortar), std::move(mass_w), std::move(b_own), std::move(b_nbr),
                          std::move(b_nbr_mortar), std::move(factor)};
}

}  // namespace nicem
