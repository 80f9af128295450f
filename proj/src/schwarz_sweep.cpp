#include "nicem/schwarz_solver.hpp"

namespace nicem {

void NicemSystem::solve_subdomain(int k, const Vector& moments, bool with_data, SchwarzState& out) const {
  const int n = spaces_[k]->dof_count();
  Vector rhs = with_data ? data_rhs_[k] : Vector::Zero(n);
  const auto& fixed = fixed_[k];
  std::vector<Vector> incoming;
  for (int s : sides_by_owner_[k]) {
    const Side& side = sides_[s];
    const auto& c = *side.coupling;
    incoming.push_back(moments.segment(side.moment_offset, c.mortar.dimension()));
    const Vector lifted = c.own.transpose() * c.solve_mass(incoming.back());
    for (std::size_t i = 0; i < side.trace_dofs.size(); ++i) {
      const int d = side.trace_dofs[i];
      if (!fixed[d]) rhs[d] += lifted[static_cast<Eigen::Index>(i)];
    }
  }
  out.u[k] = factors_[k]->solve(rhs);
  for (std::size_t j = 0; j < sides_by_owner_[k].size(); ++j) {
    const int s = sides_by_owner_[k][j];
    const Side& side = sides_[s];
    const auto& c = *side.coupling;
    out.p[s] = c.solve_mass(incoming[j] - side.alpha * (c.own * trace_of(out, s)));
  }
}

SchwarzState NicemSystem::solve_from_moments_serial(const Vector& moments, bool with_data) const {
  SchwarzState out = zero_state();
  for (int k = 0; k < subdomain_count(); ++k) solve_subdomain(k, moments, with_data, out);
  return out;
}

SchwarzState NicemSystem::solve_from_moments(const Vector& moments, bool with_data) const {
  if (exec_ == Execution::Serial) return solve_from_moments_serial(moments, with_data);
  SchwarzState out = zero_state();
  const int nsub = subdomain_count();
  // Every subdomain writes only its own u and its own sides' p.
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < nsub; ++k) solve_subdomain(k, moments, with_data, out);
  return out;
}

SchwarzState NicemSystem::step(const SchwarzState& state) const {
  SchwarzState next = solve_from_moments(moments(state), true);
  next.iteration = state.iteration + 1;
  return next;
}

}  // namespace nicem
