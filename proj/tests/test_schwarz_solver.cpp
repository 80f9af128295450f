#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nicem/experiments.hpp"
#include "nicem/schwarz_solver.hpp"

using namespace nicem;

namespace {

DecomposedMesh layout(const std::string& name, std::vector<std::array<int, 2>> res = {}) {
  ExperimentConfig c;
  c.layout = name;
  c.resolutions = std::move(res);
  return build_layout(c);
}

double max_u_difference(const SchwarzState& a, const SchwarzState& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.u.size(); ++k) d = std::max(d, (a.u[k] - b.u[k]).lpNorm<Eigen::Infinity>());
  return d;
}

Vector random_moments(const NicemSystem& s, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Vector v(s.moment_size());
  for (auto& x : v) x = n(rng);
  return v;
}

}  // namespace

TEST_SUITE("schwarz_solver") {
  TEST_CASE("alpha_opt values") {
    CHECK(alpha_opt(1.0, 1.0, 1) == doctest::Approx(std::sqrt(std::numbers::pi * std::numbers::pi + 1.0)));
    CHECK(alpha_opt(1.0, 1.0, 1) == doctest::Approx(3.2969).epsilon(1e-4));
    CHECK(alpha_opt(1.0, 0.1, 1) == doctest::Approx(10.18).epsilon(1e-3));
    CHECK(alpha_opt(1.0, 0.1, 2) > alpha_opt(1.0, 0.1, 1));
    CHECK_THROWS(alpha_opt(0.0, 0.1, 1));
    CHECK_THROWS(alpha_opt(1.0, -0.1, 1));
  }

  TEST_CASE("alpha statistics order with the step sizes") {
    const auto m = layout("quad4");
    for (int p = 1; p <= 3; ++p) {
      const double amin = alpha_global(m, p, AlphaStat::Min), amean = alpha_global(m, p, AlphaStat::Mean),
                   amax = alpha_global(m, p, AlphaStat::Max);
      CHECK(amin > amean);
      CHECK(amean > amax);
    }
    // Interfaces with the finer step get the larger alpha.
    const auto per = alpha_per_interface(m, 2, AlphaStat::Min);
    for (std::size_t i = 0; i < m.interfaces.size(); ++i)
      for (std::size_t j = 0; j < m.interfaces.size(); ++j) {
        const double hi = interface_steps(m, m.interfaces[i]).h_min, hj = interface_steps(m, m.interfaces[j]).h_min;
        if (hi > hj * (1 + 1e-12)) CHECK(per[i] < per[j]);
      }
  }

  TEST_CASE("nonpositive alpha is rejected") {
    const auto m = layout("two-strip", {{2, 3}, {3, 4}});
    CHECK_THROWS_AS(NicemSystem(m, 1, {0.0}, {}), std::invalid_argument);
    CHECK_THROWS_AS(NicemSystem(m, 1, {-1.0}, {}), std::invalid_argument);
    CHECK_THROWS_AS(NicemSystem(m, 1, {1.0, 2.0}, {}), std::invalid_argument);
  }

  TEST_CASE("robin coupling matrix") {
    const auto m = layout("quad4", {{3, 3}, {4, 4}, {5, 5}, {2, 2}});
    for (int p = 1; p <= 3; ++p) {
      const std::vector<double> alpha{1.5, 2.5, 3.5, 4.5};
      NicemSystem s(m, p, alpha, {});
      for (int k = 0; k < s.subdomain_count(); ++k) {
        const SparseMatrix c = s.robin_matrix(k);
        const SparseMatrix ct = c.transpose();
        CHECK((c - ct).norm() < 1e-12 * c.norm());
        // Quadratic form of the constant: alpha times interface length, summed over the sides of k.
        double expect = 0.0;
        for (int side : s.sides_of(k)) expect += s.side(side).alpha * m.interfaces[s.side(side).interface].length();
        const Vector one = Vector::Ones(s.space(k).dof_count());
        CHECK(one.dot(c * one) == doctest::Approx(expect).epsilon(1e-12));
      }
      NicemSystem tiny(m, p, {1e-12, 1e-12, 1e-12, 1e-12}, {});
      for (int k = 0; k < tiny.subdomain_count(); ++k)
        CHECK(tiny.robin_matrix(k).norm() < 1e-10 * tiny.energy_matrix(k).norm());
    }
  }

  TEST_CASE("zero data, zero state is a fixed point") {
    const auto m = layout("quad4", {{3, 3}, {4, 4}, {5, 5}, {2, 2}});
    NicemSystem s(m, 2, alpha_per_interface(m, 2, AlphaStat::Min), {});
    auto st = s.zero_state();
    for (int i = 0; i < 3; ++i) st = s.step(st);
    for (const auto& u : st.u) CHECK(u.norm() == 0.0);
    for (const auto& p : st.p) CHECK(p.norm() == 0.0);
    const auto r = run_schwarz(s, s.zero_state(), {});
    CHECK(r.converged);
    CHECK(r.iterations == 0);
  }

  TEST_CASE("one sweep is linear and the parallel sweep equals the serial one") {
    const auto m = layout("grid12");
    NicemSystem s(m, 2, alpha_per_interface(m, 2, AlphaStat::Min), {});
    const Vector a = random_moments(s, 1), b = random_moments(s, 2);
    auto phi = [&](const Vector& l) { return s.moments(s.solve_from_moments(l, false)); };
    const Vector lhs = phi(a + 2.5 * b), rhs = phi(a) + 2.5 * phi(b);
    CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());

    const auto c = manufactured_case("B");
    NicemSystem d(m, 2, alpha_per_interface(m, 2, AlphaStat::Min), c.data());
    const auto par = d.solve_from_moments(a, true);
    const auto ser = d.solve_from_moments_serial(a, true);
    for (int k = 0; k < d.subdomain_count(); ++k) CHECK((par.u[k] - ser.u[k]).norm() == 0.0);
    for (int side = 0; side < d.side_count(); ++side) CHECK((par.p[side] - ser.p[side]).norm() == 0.0);
  }

  TEST_CASE("multipliers live in the mortar spaces and satisfy the interface condition after a step") {
    const auto m = layout("quad4", {{3, 3}, {4, 4}, {5, 5}, {2, 2}});
    const auto c = manufactured_case("A");
    NicemSystem s(m, 3, alpha_per_interface(m, 3, AlphaStat::Min), c.data());
    const auto prev = s.random_state(5);
    const auto next = s.step(prev);
    CHECK(next.iteration == prev.iteration + 1);
    const Vector in = s.moments(prev);
    for (int side = 0; side < s.side_count(); ++side) {
      const auto& sd = s.side(side);
      CHECK(next.p[side].size() == sd.coupling->mortar.dimension());
      Vector t(sd.trace_dofs.size());
      for (std::size_t i = 0; i < sd.trace_dofs.size(); ++i) t[i] = next.u[sd.owner][sd.trace_dofs[i]];
      const Vector own = sd.coupling->mass_w * next.p[side] + sd.alpha * (sd.coupling->own * t);
      const Vector target = in.segment(sd.moment_offset, own.size());
      CHECK((own - target).norm() < 1e-11 * std::max(1.0, target.norm()));
    }
  }

  TEST_CASE("converged state solves the discrete coupled problem") {
    const auto c = manufactured_case("A");
    const auto m = layout("two-strip", {{5, 10}, {8, 15}});
    for (int p = 1; p <= 3; ++p) {
      NicemSystem s(m, p, alpha_per_interface(m, p, AlphaStat::Min), c.data());
      SolverOptions o;
      o.tol = 1e-14;
      o.max_iter = 2000;
      const auto r = run_schwarz(s, s.zero_state(), o);
      REQUIRE(r.converged);
      CHECK(s.weak_form_residual(r.state) < 1e-10);
      CHECK(s.interface_jump(r.state) < 1e-10);
      CHECK(r.history.front().residual == 1.0);
      CHECK(r.history.back().residual <= 1e-14);
    }
  }

  TEST_CASE("gmres and schwarz reach the same discrete solution") {
    const auto c = manufactured_case("A");
    for (const char* name : {"two-strip", "quad4"}) {
      const auto m = layout(name, std::string(name) == "quad4"
                                      ? std::vector<std::array<int, 2>>{{4, 4}, {6, 6}, {5, 5}, {8, 8}}
                                      : std::vector<std::array<int, 2>>{{5, 10}, {8, 15}});
      NicemSystem s(m, 2, alpha_per_interface(m, 2, AlphaStat::Min), c.data());
      SolverOptions o;
      o.tol = 1e-13;
      o.max_iter = 3000;
      const auto a = run_schwarz(s, s.zero_state(), o);
      const auto g = run_gmres(s, s.zero_state(), o);
      REQUIRE(a.converged);
      REQUIRE(g.converged);
      CHECK(g.iterations <= a.iterations);
      CHECK(max_u_difference(a.state, g.state) < 1e-10);
      CHECK(s.interface_jump(g.state) < 1e-10);
      CHECK(s.weak_form_residual(g.state) < 1e-10);
    }
  }

  TEST_CASE("per-interface alpha is honoured") {
    const auto c = manufactured_case("A");
    const auto m = layout("quad4", {{4, 4}, {6, 6}, {5, 5}, {8, 8}});
    NicemSystem s(m, 1, {5.0, 9.0, 13.0, 17.0}, c.data());
    for (int side = 0; side < s.side_count(); ++side)
      CHECK(s.side(side).alpha == std::vector<double>{5.0, 9.0, 13.0, 17.0}[s.side(side).interface]);
    SolverOptions o;
    o.tol = 1e-12;
    const auto r = run_gmres(s, s.zero_state(), o);
    CHECK(r.converged);
    CHECK(s.interface_jump(r.state) < 1e-9);
  }

  TEST_CASE("error equation: energy decays") {
    const auto m = layout("two-strip", {{4, 8}, {6, 12}});
    const double h = max_mesh_size(m);
    for (int p = 1; p <= 3; ++p) {
      CAPTURE(p);
      NicemSystem s(m, p, {0.3 / h}, {});
      SolverOptions o;
      o.tol = 0.0;
      o.h1_reduction = 1e-7;
      o.max_iter = 5000;
      const auto r = run_schwarz(s, s.random_state(3), o);
      REQUIRE(r.converged);
      const auto& hist = r.history;
      // E + B falls below the previous B and B never rises; E alone may oscillate for p >= 2.
      double e_sum = 0.0;
      for (std::size_t n = 1; n < hist.size(); ++n) {
        CHECK(hist[n].energy + hist[n].interface_term <= hist[n - 1].interface_term * (1 + 1e-12));
        CHECK(hist[n].interface_term <= hist[n - 1].interface_term * (1 + 1e-12));
        e_sum += hist[n].energy;
      }
      CHECK(e_sum <= hist[0].interface_term * (1 + 1e-12));
      CHECK(hist.back().energy < 1e-12 * hist.front().energy);
    }
  }

  TEST_CASE("random state is seeded") {
    const auto m = layout("two-strip", {{2, 3}, {3, 4}});
    NicemSystem s(m, 2, {3.0}, {});
    const auto a = s.random_state(17), b = s.random_state(17), c = s.random_state(18);
    CHECK((a.p[0] - b.p[0]).norm() == 0.0);
    CHECK((a.p[0] - c.p[0]).norm() > 0.0);
    for (double x : a.p[1]) CHECK(std::abs(x) <= 1.0);
    for (const auto& u : a.u) CHECK(u.norm() == 0.0);
  }

  TEST_CASE("max_iter returns a non-converged best state") {
    const auto c = manufactured_case("A");
    const auto m = layout("two-strip", {{4, 8}, {6, 12}});
    NicemSystem s(m, 2, alpha_per_interface(m, 2, AlphaStat::Min), c.data());
    SolverOptions o;
    o.max_iter = 3;
    const auto r = run_schwarz(s, s.zero_state(), o);
    CHECK_FALSE(r.converged);
    CHECK(r.history.size() == 3);
    double best = 1e300;
    for (const auto& h : r.history) best = std::min(best, h.residual);
    CHECK(s.residual_norm(r.state) > 0.0);
    CHECK(best <= r.history.front().residual);
  }
}
