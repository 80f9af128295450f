#include <doctest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "nicem/interface_mortar.hpp"

using namespace nicem;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::vector<double> uniform(int n, double length = 1.0) {
  std::vector<double> b(n + 1);
  for (int i = 0; i <= n; ++i) b[i] = length * i / n;
  return b;
}

std::vector<double> jittered(int n, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  auto b = uniform(n);
  for (int i = 1; i < n; ++i) b[i] += u(rng) / n;
  return b;
}

VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  VectorXd v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double adaptive(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-13);
}

}  // namespace

TEST_SUITE("interface_mortar") {
  TEST_CASE("trace space basics") {
    TraceSpace1D t(uniform(4), 3);
    CHECK(t.dimension() == 13);
    CHECK(t.node(0) == 0.0);
    CHECK(t.node(12) == doctest::Approx(1.0));
    CHECK(t.node(4) == doctest::Approx(1.0 / 3.0));
    CHECK(t.segment_of(1.0) == 3);
    const VectorXd c = t.interpolate([](double s) { return s * s * s - s; });
    CHECK(t.evaluate(c, 0.37) == doctest::Approx(0.37 * 0.37 * 0.37 - 0.37));
    CHECK_THROWS(TraceSpace1D({0.0}, 1));
    CHECK_THROWS(TraceSpace1D({0.0, 0.5, 0.5, 1.0}, 1));
    CHECK_THROWS(TraceSpace1D(uniform(2), 0));
  }

  TEST_CASE("mortar dimensions") {
    CHECK(MortarSpace(TraceSpace1D(uniform(4), 1)).dimension() == 3);
    CHECK(MortarSpace(TraceSpace1D(uniform(2), 2)).dimension() == 3);
    CHECK(MortarSpace(TraceSpace1D(uniform(5), 3)).dimension() == 14);
    for (int p = 1; p <= 3; ++p) CHECK(MortarSpace(TraceSpace1D(uniform(1), p)).dimension() == p);
    for (int n = 1; n <= 6; ++n)
      for (int p = 1; p <= 3; ++p) {
        MortarSpace w(TraceSpace1D(uniform(n), p));
        CHECK(w.dimension() < w.trace().dimension());
      }
  }

  TEST_CASE("mortar members have degree p-1 on the end segments and contain constants") {
    for (int p = 1; p <= 3; ++p)
      for (int n : {1, 2, 5}) {
        MortarSpace w(TraceSpace1D(jittered(n, 3), p));
        const auto& tr = w.trace();
        std::mt19937_64 rng(11);
        const VectorXd c = w.to_trace(random_vector(w.dimension(), rng));
        // The p-th finite difference over p+1 equispaced points of an end segment vanishes.
        for (int seg : {0, n - 1}) {
          const double a = tr.breakpoints()[seg], b = tr.breakpoints()[seg + 1];
          double diff = 0.0;
          for (int j = 0; j <= p; ++j) {
            const double binom = std::tgamma(p + 1) / (std::tgamma(j + 1) * std::tgamma(p - j + 1));
            diff += ((p - j) % 2 ? -1.0 : 1.0) * binom * tr.evaluate(c, a + (b - a) * j / p);
          }
          CHECK(std::abs(diff) < 1e-10 * c.norm());
        }
        // Constant 1 lies in the space.
        CouplingMatrices cm = build_coupling(tr, tr);
        const VectorXd pi1 = w.to_trace(cm.project(CouplingMatrices::Source::OwnTrace, VectorXd::Ones(tr.dimension())));
        CHECK((pi1 - VectorXd::Ones(tr.dimension())).norm() < 1e-12);
      }
  }

  TEST_CASE("cross mass examples") {
    for (int p = 1; p <= 3; ++p) {
      TraceSpace1D t(jittered(5, 1), p);
      const MatrixXd m = cross_mass(t, t);
      // Standard 1D mass matrix: symmetric, integrates products, 1^T M 1 = length.
      CHECK((m - m.transpose()).norm() < 1e-15);
      CHECK(VectorXd::Ones(t.dimension()).dot(m * VectorXd::Ones(t.dimension())) == doctest::Approx(1.0));
      const VectorXd x = t.interpolate([](double s) { return s; });
      CHECK(x.dot(m * x) == doctest::Approx(1.0 / 3.0));
    }
    TraceSpace1D hats({0.0, 0.5, 1.0}, 1);
    TraceSpace1D thirds({0.0, 1.0 / 3, 2.0 / 3, 1.0}, 1);
    const MatrixXd x = cross_mass(hats, thirds);
    CHECK(x.row(1).sum() == doctest::Approx(0.5));
    CHECK_THROWS(cross_mass(hats, TraceSpace1D({0.0, 0.5, 1.1}, 1)));
  }

  TEST_CASE("random piecewise P2 pair against adaptive quadrature") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 5; ++trial) {
      TraceSpace1D a(jittered(4 + trial, 10 + trial), 2), b(jittered(7 - trial, 20 + trial), 2);
      const VectorXd u = random_vector(a.dimension(), rng), v = random_vector(b.dimension(), rng);
      const double fast = u.dot(cross_mass(a, b) * v);
      // Adaptive quadrature on each interval of the merged partition.
      std::vector<double> merged = a.breakpoints();
      merged.insert(merged.end(), b.breakpoints().begin(), b.breakpoints().end());
      std::sort(merged.begin(), merged.end());
      double oracle = 0.0;
      for (std::size_t s = 0; s + 1 < merged.size(); ++s)
        if (merged[s + 1] - merged[s] > 1e-14)
          oracle += adaptive([&](double x) { return a.evaluate(u, x) * b.evaluate(v, x); }, merged[s], merged[s + 1]);
      CHECK(std::abs(fast - oracle) < 1e-12 * std::max(1.0, std::abs(oracle)));
    }
  }

  TEST_CASE("coupling invariants") {
    for (int p = 1; p <= 3; ++p) {
      TraceSpace1D own(jittered(5, 4), p), nbr(jittered(8, 5), p);
      const CouplingMatrices c = build_coupling(own, nbr);
      CHECK((c.mass_w - c.mass_w.transpose()).norm() < 1e-15);
      CHECK(Eigen::SelfAdjointEigenSolver<MatrixXd>(c.mass_w).eigenvalues().minCoeff() > 0.0);
      // Both integrate 1 * psi.
      const VectorXd w1 = c.project(CouplingMatrices::Source::OwnTrace, VectorXd::Ones(own.dimension()));
      CHECK((c.own * VectorXd::Ones(own.dimension()) - c.mass_w * w1).norm() < 1e-13);
      CHECK((c.nbr_trace * VectorXd::Ones(nbr.dimension()) - c.own * VectorXd::Ones(own.dimension())).norm() < 1e-13);
    }
  }

  TEST_CASE("projection examples") {
    TraceSpace1D t(uniform(8), 2);
    const CouplingMatrices c = build_coupling(t, t);
    const VectorXd v = t.interpolate([](double s) { return std::sin(std::numbers::pi * s); });
    const VectorXd pv = c.mortar.to_trace(c.project(CouplingMatrices::Source::OwnTrace, v));
    const VectorXd resid = c.mortar.basis() * (cross_mass(t, t) * (pv - v));
    CHECK(resid.lpNorm<Eigen::Infinity>() < 1e-11);

    // A global polynomial of degree p-1 is reproduced from the neighbor trace, too.
    for (int p = 1; p <= 3; ++p) {
      TraceSpace1D own(jittered(4, 8), p), nbr(jittered(6, 9), p);
      const CouplingMatrices cc = build_coupling(own, nbr);
      auto f = [p](double s) { return std::pow(s - 0.3, p - 1) + 0.5; };
      const VectorXd got = cc.mortar.to_trace(cc.project(CouplingMatrices::Source::NeighborTrace, nbr.interpolate(f)));
      CHECK((got - own.interpolate(f)).norm() < 1e-12);
    }
  }

  TEST_CASE("projection property suite") {
    std::mt19937_64 rng(99);
    for (int p = 1; p <= 3; ++p)
      for (int n : {1, 2, 3, 8}) {
        TraceSpace1D own(jittered(n, 30 + n), p), nbr(jittered(n + 3, 40 + n), p);
        const CouplingMatrices c = build_coupling(own, nbr);
        const MatrixXd mt = cross_mass(own, own);
        using S = CouplingMatrices::Source;
        auto pi = [&](const VectorXd& v) { return VectorXd(c.mortar.to_trace(c.project(S::OwnTrace, v))); };
        for (int r = 0; r < 100; ++r) {
          const VectorXd w = random_vector(c.mortar.dimension(), rng);
          CHECK((c.project(S::OwnTrace, c.mortar.to_trace(w)) - w).norm() < 1e-12 * std::max(1.0, w.norm()));
          const VectorXd u = random_vector(own.dimension(), rng), v = random_vector(own.dimension(), rng);
          const double lhs = pi(u).dot(mt * v), rhs = u.dot(mt * pi(v));
          CHECK(std::abs(lhs - rhs) < 1e-11 * std::max(1.0, std::abs(lhs)));
          CHECK(std::sqrt(pi(v).dot(mt * pi(v))) <= std::sqrt(v.dot(mt * v)) * (1 + 1e-12));
          const VectorXd orth = c.mortar.basis() * (mt * (pi(v) - v));
          CHECK(orth.lpNorm<Eigen::Infinity>() < 1e-11 * std::max(1.0, v.norm()));
          // Neighbor projection: also orthogonal against the own mortar space.
          const VectorXd vn = random_vector(nbr.dimension(), rng);
          const VectorXd pn = c.mortar.to_trace(c.project(S::NeighborTrace, vn));
          const VectorXd on = c.mortar.basis() * (mt * pn - cross_mass(own, nbr) * vn);
          CHECK(on.lpNorm<Eigen::Infinity>() < 1e-11 * std::max(1.0, vn.norm()));
        }
      }
  }
}
