#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "nicem/schwarz_solver.hpp"

namespace nicem {

namespace {

TraceSpace1D trace_space(const DecomposedMesh& mesh, const Interface& iface, int subdomain, int degree) {
  const auto& sub = mesh.subdomains[subdomain];
  auto s = chain_parameters(sub, iface.chain_of(subdomain), iface.start);
  s.front() = 0.0;
  s.back() = iface.length();
  return TraceSpace1D(std::move(s), degree);
}

}  // namespace

NicemSystem::NicemSystem(const DecomposedMesh& mesh, int degree, std::vector<double> alpha_per_interface,
                         const ProblemData& data, QuadratureOrders orders, Execution exec)
    : mesh_(&mesh), degree_(degree), exec_(exec) {
  const int nsub = static_cast<int>(mesh.subdomains.size());
  const int nif = static_cast<int>(mesh.interfaces.size());
  if (static_cast<int>(alpha_per_interface.size()) != nif)
    throw std::invalid_argument("NicemSystem: need one alpha per interface");
  for (double a : alpha_per_interface)
    if (!(a > 0.0)) throw std::invalid_argument("NicemSystem: alpha must be positive");

  for (int k = 0; k < nsub; ++k) spaces_.push_back(std::make_unique<FeSpace>(mesh.subdomains[k], degree));

  sides_.resize(2 * nif);
  sides_by_owner_.resize(nsub);
  for (int i = 0; i < nif; ++i) {
    const Interface& iface = mesh.interfaces[i];
    const TraceSpace1D ta = trace_space(mesh, iface, iface.a, degree);
    const TraceSpace1D tb = trace_space(mesh, iface, iface.b, degree);
    for (int side = 0; side < 2; ++side) {
      Side& s = sides_[2 * i + side];
      s.owner = side == 0 ? iface.a : iface.b;
      s.neighbor = side == 0 ? iface.b : iface.a;
      s.interface = i;
      s.opposite = 2 * i + (1 - side);
      s.alpha = alpha_per_interface[i];
      s.trace_dofs = spaces_[s.owner]->trace_dofs(iface.chain_of(s.owner));
      s.coupling = std::make_unique<CouplingMatrices>(side == 0 ? build_coupling(ta, tb) : build_coupling(tb, ta));
      s.moment_offset = moment_size_;
      moment_size_ += s.coupling->mortar.dimension();
      sides_by_owner_[s.owner].push_back(2 * i + side);
    }
    const double ah = alpha_per_interface[i] * interface_steps(mesh, iface).h_max;
    if (ah > 1.0) {
      std::ostringstream os;
      os << "interface " << i << " (" << iface.a << "-" << iface.b << "): alpha*h_max = " << ah << " > 1";
      warnings_.push_back(os.str());
    }
  }

  energy_.resize(nsub);
  load_.resize(nsub);
  data_rhs_.resize(nsub);
  fixed_.resize(nsub);
  factors_.resize(nsub);
  const ScalarField zero = [](double, double) { return 0.0; };
  for (int k = 0; k < nsub; ++k) {
    const FeSpace& space = *spaces_[k];
    energy_[k] = assemble_reaction_diffusion(space, orders.bilinear);
    load_[k] = data.forcing ? assemble_load(space, data.forcing, orders.load) : Vector::Zero(space.dof_count());
    SparseSystem sys{energy_[k] + robin_matrix(k), load_[k], {}, {}};
    apply_dirichlet(sys, space, data.dirichlet ? data.dirichlet : zero);
    data_rhs_[k] = std::move(sys.rhs);
    fixed_[k].assign(space.dof_count(), 0);
    for (int d : sys.constrained) fixed_[k][d] = 1;
    auto factor = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix>>(sys.matrix);
    if (factor->info() != Eigen::Success)
      throw std::runtime_error("NicemSystem: factorization of subdomain " + std::to_string(k) + " failed");
    factors_[k] = std::move(factor);
  }
}

NicemSystem::~NicemSystem() = default;

SparseMatrix NicemSystem::robin_matrix(int k) const {
  const int n = spaces_[k]->dof_count();
  std::vector<Eigen::Triplet<double>> trip;
  for (int s : sides_by_owner_[k]) {
    const Side& side = sides_[s];
    const auto& b = side.coupling->own;
    const Eigen::MatrixXd c = side.alpha * (b.transpose() * side.coupling->solve_mass_columns(b));
    const auto& dofs = side.trace_dofs;
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j)
        if (c(i, j) != 0.0) trip.emplace_back(dofs[i], dofs[j], c(i, j));
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SchwarzState NicemSystem::zero_state() const {
  SchwarzState st;
  for (const auto& sp : spaces_) st.u.push_back(Vector::Zero(sp->dof_count()));
  for (const auto& s : sides_) st.p.push_back(Vector::Zero(s.coupling->mortar.dimension()));
  return st;
}

SchwarzState NicemSystem::random_state(unsigned long long seed) const {
  SchwarzState st = zero_state();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& p : st.p)
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = dist(rng);
  return st;
}

Vector NicemSystem::trace_of(const SchwarzState& state, int s) const {
  const Side& side = sides_[s];
  const Vector& u = state.u[side.owner];
  Vector t(static_cast<Eigen::Index>(side.trace_dofs.size()));
  for (std::size_t i = 0; i < side.trace_dofs.size(); ++i) t[static_cast<Eigen::Index>(i)] = u[side.trace_dofs[i]];
  return t;
}

Vector NicemSystem::moments(const SchwarzState& state) const {
  Vector lambda(moment_size_);
  for (int s = 0; s < side_count(); ++s) {
    const Side& side = sides_[s];
    const int o = side.opposite;
    const auto& c = *side.coupling;
    lambda.segment(side.moment_offset, c.mortar.dimension()) =
        -(c.nbr_mortar * state.p[o]) + side.alpha * (c.nbr_trace * trace_of(state, o));
  }
  return lambda;
}

double NicemSystem::energy(const SchwarzState& state) const {
  double e = 0.0;
  for (int k = 0; k < subdomain_count(); ++k) e += state.u[k].dot(energy_[k] * state.u[k]);
  return e;
}

double NicemSystem::interface_term(const SchwarzState& state) const {
  double b = 0.0;
  for (int s = 0; s < side_count(); ++s) {
    const Side& side = sides_[s];
    const auto& c = *side.coupling;
    const Vector d = state.p[s] - side.alpha * c.project(CouplingMatrices::Source::OwnTrace, trace_of(state, s));
    b += d.dot(c.mass_w * d) / (4.0 * side.alpha);
  }
  return b;
}

namespace {

// Moment defect of the transmission condition on side s.
Vector side_defect(const NicemSystem::Side& side, const Vector& p, const Vector& trace, const Vector& incoming) {
  const auto& c = *side.coupling;
  return c.mass_w * p + side.alpha * (c.own * trace) - incoming;
}

}  // namespace

double NicemSystem::residual_norm(const SchwarzState& state) const {
  const Vector lambda = moments(state);
  double r2 = 0.0;
  for (int s = 0; s < side_count(); ++s) {
    const Side& side = sides_[s];
    const int dim = side.coupling->mortar.dimension();
    const Vector d = side_defect(side, state.p[s], trace_of(state, s), lambda.segment(side.moment_offset, dim));
    r2 += d.dot(side.coupling->solve_mass(d));
  }
  return std::sqrt(std::max(r2, 0.0));
}

double NicemSystem::interface_jump(const SchwarzState& state) const {
  const Vector lambda = moments(state);
  double worst = 0.0;
  for (int s = 0; s < side_count(); ++s) {
    const Side& side = sides_[s];
    const auto& c = *side.coupling;
    const int dim = c.mortar.dimension();
    const Vector t = trace_of(state, s);
    const Vector d = side_defect(side, state.p[s], t, lambda.segment(side.moment_offset, dim));
    const Vector own = c.mass_w * state.p[s] + side.alpha * (c.own * t);
    const double num = std::sqrt(std::max(d.dot(c.solve_mass(d)), 0.0));
    const double den = std::sqrt(std::max(own.dot(c.solve_mass(own)), 0.0));
    worst = std::max(worst, den > 0.0 ? num / den : num);
  }
  return worst;
}

double NicemSystem::weak_form_residual(const SchwarzState& state) const {
  double worst = 0.0;
  for (int k = 0; k < subdomain_count(); ++k) {
    const Vector au = energy_[k] * state.u[k];
    Vector r = au - load_[k];
    for (int s : sides_by_owner_[k]) {
      const Side& side = sides_[s];
      const Vector lifted = side.coupling->own.transpose() * state.p[s];
      for (std::size_t i = 0; i < side.trace_dofs.size(); ++i) r[side.trace_dofs[i]] -= lifted[static_cast<Eigen::Index>(i)];
    }
    double rn = 0.0, scale = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      if (fixed_[k][i]) continue;
      rn = std::max(rn, std::abs(r[i]));
      scale = std::max({scale, std::abs(au[i]), std::abs(load_[k][i])});
    }
    worst = std::max(worst, scale > 0.0 ? rn / scale : rn);
  }
  return worst;
}

double NicemSystem::projected_trace_norm(const SchwarzState& state, int s) const {
  const auto& c = *sides_[s].coupling;
  const Vector m = c.own * trace_of(state, s);
  return std::sqrt(std::max(m.dot(c.solve_mass(m)), 0.0));
}

double alpha_opt(double length, double h, int degree) {
  if (!(length > 0.0) || !(h > 0.0) || degree < 1) throw std::invalid_argument("alpha_opt: L, h and p must be positive");
  const double pi = std::acos(-1.0);
  const double a = pi / length;
  const double b = pi * degree / h;
  return std::pow((a * a + 1.0) * (b * b + 1.0), 0.25);
}

namespace {

double pick(const StepStats& st, AlphaStat stat) {
  switch (stat) {
    case AlphaStat::Min: return st.h_min;
    case AlphaStat::Mean: return st.h_mean;
    case AlphaStat::Max: return st.h_max;
  }
  throw std::logic_error("unknown step statistic");
}

}  // namespace

std::vector<double> alpha_per_interface(const DecomposedMesh& mesh, int degree, AlphaStat stat) {
  std::vector<double> out;
  for (const auto& iface : mesh.interfaces)
    out.push_back(alpha_opt(iface.length(), pick(interface_steps(mesh, iface), stat), degree));
  return out;
}

double alpha_global(const DecomposedMesh& mesh, int degree, AlphaStat stat) {
  if (mesh.interfaces.empty()) throw std::invalid_argument("alpha_global: mesh has no interfaces");
  if (stat == AlphaStat::Mean) {
    double h = 0.0, len = 0.0, steps = 0.0;
    for (const auto& iface : mesh.interfaces) {
      const double n = static_cast<double>(iface.chain_a.size() + iface.chain_b.size() - 2);
      h += interface_steps(mesh, iface).h_mean * n;
      steps += n;
      len += iface.length();
    }
    return alpha_opt(len / static_cast<double>(mesh.interfaces.size()), h / steps, degree);
  }
  double best_h = 0.0, best_len = 0.0;
  bool first = true;
  for (const auto& iface : mesh.interfaces) {
    const double h = pick(interface_steps(mesh, iface), stat);
    const bool better = stat == AlphaStat::Min ? h < best_h : h > best_h;
    if (first || better) {
      best_h = h;
      best_len = iface.length();
      first = false;
    }
  }
  return alpha_opt(best_len, best_h, degree);
}

}  // namespace nicem
