#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "nicem/legendre.hpp"
#include "nicem/legendre_lab.hpp"
#include "nicem/quadrature.hpp"

using namespace nicem;
using lab::Rational;

namespace {

// Maximizes J(psi; eta) over P_{p-1} with psi(1) = eta(1) as a generic
// equality-constrained QP: J = 1/2 c^T Q c + q^T c + const in Legendre
// coefficients, with Q and q assembled by Gauss quadrature.
std::vector<double> qp_maximizer(const lab::EtaCoeffs& eta) {
  const int p = eta.degree();
  const auto e = lab::legendre_coefficients(eta);
  const Rule1D r = gauss_legendre(p + 2);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(p);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto l = legendre::values(p, r.points[i]);
    double ev = 0.0;
    for (int m = 0; m <= p; ++m) ev += e[m] * l[m];
    for (int a = 0; a < p; ++a) {
      q[a] += r.weights[i] * 1.5 * ev * l[a];
      for (int b = 0; b < p; ++b) gram(a, b) += r.weights[i] * l[a] * l[b];
    }
  }
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(p + 1, p + 1);
  kkt.topLeftCorner(p, p) = -0.5 * gram;
  kkt.block(0, p, p, 1).setOnes();
  kkt.block(p, 0, 1, p).setOnes();
  Eigen::VectorXd rhs(p + 1);
  rhs.head(p) = -q;
  rhs[p] = lab::value_at_one(eta);
  const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
  return {sol.data(), sol.data() + p};
}

Rational frac(long n, long d) { return Rational(n) / Rational(d); }

}  // namespace

TEST_SUITE("legendre_lab") {
  TEST_CASE("basis conversions") {
    for (int p = 1; p <= 10; ++p) {
      const auto eta = lab::random_eta(p, 100 + p);
      const auto e = lab::legendre_coefficients(eta);
      REQUIRE(static_cast<int>(e.size()) == p + 1);
      double at_minus_one = 0.0, at_one = 0.0;
      for (int m = 0; m <= p; ++m) {
        at_minus_one += e[m] * (m % 2 ? -1.0 : 1.0);
        at_one += e[m];
      }
      CHECK(std::abs(at_minus_one) < 1e-12);
      double sum = 0.0;
      for (double x : eta.eta) sum += x;
      CHECK(lab::value_at_one(eta) == doctest::Approx(2.0 * sum));
      CHECK(at_one == doctest::Approx(lab::value_at_one(eta)));
      const auto back = lab::from_legendre(e);
      for (int m = 0; m < p; ++m) CHECK(back.eta[m] == doctest::Approx(eta.eta[m]));
    }
    const std::vector<double> not_zero{1.0, 0.5};
    CHECK_THROWS(lab::from_legendre(not_zero));
  }

  TEST_CASE("gram matrix of the b_m basis") {
    for (int p = 1; p <= 12; ++p) {
      const auto g = lab::gram_exact(p);
      for (int m = 1; m <= p; ++m)
        for (int k = 1; k <= p; ++k) {
          Rational expect = 0;
          if (m == k) expect = frac(2, 2 * m + 1) + frac(2, 2 * m - 1);
          if (std::abs(m - k) == 1) expect = frac(2, 2 * std::min(m, k) + 1);
          CHECK(g[m - 1][k - 1] == expect);
        }
    }
  }

  TEST_CASE("S for p = 1") {
    const auto s = lab::s_operator({{1.0}});
    CHECK(s.mu == doctest::Approx(1.0));
    REQUIRE(s.psi.size() == 1);
    CHECK(s.psi[0] == doctest::Approx(2.0));
    const std::vector<double> e{1.0, 1.0};
    CHECK(lab::j_functional(e, s.psi) == doctest::Approx(10.0 / 3.0));
    CHECK(lab::j_functional(e, s.psi) / lab::l2_norm_squared({{1.0}}) == doctest::Approx(5.0 / 4.0));
    CHECK(lab::delta_of_eta({{1.0}}) == doctest::Approx(-20.0 / 3.0));
    CHECK(lab::delta_of_eta_exact(std::vector<Rational>{1}) == frac(-20, 3));
  }

  TEST_CASE("S vanishing multiplier when eta(1) = 0 and eta_p = 0") {
    for (int p = 4; p <= 9; ++p) {
      // Degree 3 polynomial with f(1) = f(-1) = 0, so eta_p = e_p = 0 for p >= 4.
      std::vector<double> f(p + 1, 0.0);
      f[2] = 1.0;
      f[3] = 0.5;
      f[0] = -1.0;
      f[1] = -0.5;
      const auto eta = lab::from_legendre(f);
      CHECK(std::abs(lab::value_at_one(eta)) < 1e-14);
      const auto s = lab::s_operator(eta);
      CHECK(std::abs(s.mu) < 1e-13);
      for (int m = 0; m < p; ++m) CHECK(s.psi[m] == doctest::Approx(3.0 * f[m]));
    }
  }

  TEST_CASE("S is linear and matches a generic constrained maximization") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int p = 1; p <= 13; ++p)
      for (int r = 0; r < 20; ++r) {
        const auto eta = lab::random_eta(p, 1000 * p + r);
        const auto s = lab::s_operator(eta);
        const auto qp = qp_maximizer(eta);
        for (int m = 0; m < p; ++m) CHECK(s.psi[m] == doctest::Approx(qp[m]).epsilon(1e-9));
        double psi1 = 0.0;
        for (double c : s.psi) psi1 += c;
        CHECK(psi1 == doctest::Approx(lab::value_at_one(eta)).epsilon(1e-12));
        const double c = u(rng);
        lab::EtaCoeffs scaled = eta;
        for (auto& x : scaled.eta) x *= c;
        const auto sc = lab::s_operator(scaled);
        for (int m = 0; m < p; ++m) CHECK(sc.psi[m] == doctest::Approx(c * s.psi[m]).epsilon(1e-12));
      }
    CHECK_THROWS(lab::s_operator({{0.0, 0.0}}));
  }

  TEST_CASE("J: coefficient algebra, quadrature, positivity and duality") {
    for (int p = 1; p <= 13; ++p)
      for (int r = 0; r < 1000; ++r) {
        const auto eta = lab::random_eta(p, 7919 * p + r);
        const auto e = lab::legendre_coefficients(eta);
        const auto s = lab::s_operator(eta);
        const double j = lab::j_functional(e, s.psi);
        CHECK(j > 0.0);
        const double d = lab::delta_of_eta(eta);
        CHECK(std::abs(j + d / (2.0 * p * p)) < 1e-11 * std::abs(j));
        if (r < 20) {
          CHECK(lab::j_functional_quadrature(e, s.psi) == doctest::Approx(j).epsilon(1e-12));
          CHECK(lab::j_functional(e, e) == doctest::Approx(lab::l2_norm_squared(eta)).epsilon(1e-12));
          lab::EtaCoeffs scaled = eta;
          for (auto& x : scaled.eta) x *= -1.7;
          CHECK(lab::delta_of_eta(scaled) == doctest::Approx(1.7 * 1.7 * d).epsilon(1e-12));
        }
      }
  }

  TEST_CASE("exact and floating Delta agree") {
    for (int p = 1; p <= 13; ++p) {
      std::vector<Rational> ex(p);
      lab::EtaCoeffs fl;
      for (int m = 0; m < p; ++m) {
        ex[m] = frac((m * 7 + 3) % 11 - 5, m + 2);
        fl.eta.push_back(static_cast<double>(ex[m]));
      }
      const double exact = static_cast<double>(lab::delta_of_eta_exact(ex));
      CHECK(lab::delta_of_eta(fl) == doctest::Approx(exact).epsilon(1e-12));
      const auto d = lab::delta_form_exact(p);
      Rational form = 0;
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) form += ex[a] * d[a][b] * ex[b];
      CHECK(form == lab::delta_of_eta_exact(ex));
    }
  }

  TEST_CASE("p = 2 form coefficients and discriminant") {
    const auto d = lab::delta_form_exact(2);
    CHECK(d[0][0] == frac(-80, 3));
    CHECK(2 * d[0][1] == frac(-40, 3));
    CHECK(d[1][1] == frac(-133, 15));
    const Rational b = 2 * d[0][1];
    CHECK(b * b - 4 * d[0][0] * d[1][1] == -768);
    const auto sp = lab::delta_form_spectrum(2);
    CHECK(sp.eigenvalues[0] < 0.0);
    CHECK(sp.eigenvalues[1] < 0.0);
  }

  TEST_CASE("spectrum") {
    const auto s1 = lab::delta_form_spectrum(1);
    CHECK(s1.lambda_max == doctest::Approx(-2.5));
    CHECK(s1.certified_negative);
    for (int p = 1; p <= 13; ++p) {
      const auto s = lab::delta_form_spectrum(p);
      CHECK(s.lambda_max < 0.0);
      CHECK(s.certified_negative);
      // Delta(eta) <= lambda_max ||eta||^2 on random eta.
      for (int r = 0; r < 50; ++r) {
        const auto eta = lab::random_eta(p, 31 * p + r);
        CHECK(lab::delta_of_eta(eta) <= s.lambda_max * lab::l2_norm_squared(eta) * (1 - 1e-12));
      }
    }
    for (int p = 14; p <= 20; ++p) {
      const auto s = lab::delta_form_spectrum(p);
      CHECK_FALSE(s.certified_negative);
      CHECK(s.lambda_max > 0.0);
    }
  }

  TEST_CASE("case 1 discriminant") {
    CHECK(lab::case1_discriminant(2) == -768);
    for (int p = 2; p <= 20; ++p) {
      const Rational c = lab::case1_discriminant(p);
      CHECK(c == lab::case1_discriminant_from_delta(p));
      if (p <= 13) CHECK(c < 0);
      else CHECK(c > 0);
    }
    CHECK(lab::case1_discriminant(13) < 0);
    CHECK(lab::case1_discriminant(14) > 0);
  }

  TEST_CASE("case 2 value") {
    CHECK(lab::case2_value(2) == doctest::Approx(-80.0 / 3.0));
    CHECK(lab::case2_value(3) == doctest::Approx(-180.0));
    for (int p = 2; p <= 13; ++p) {
      const double v = lab::case2_value(p);
      CHECK(std::abs(lab::delta_of_eta(lab::case2_eta(p)) - v) < 1e-10 * std::abs(v));
    }
  }

  TEST_CASE("projection stability construction on matching and non-matching meshes") {
    auto uniform = [](int n) {
      std::vector<double> b(n + 1);
      for (int i = 0; i <= n; ++i) b[i] = static_cast<double>(i) / n;
      return b;
    };
    for (int p = 1; p <= 3; ++p) {
      std::vector<double> c1_match, c1_other;
      for (int n : {4, 8, 16, 32}) {
        TraceSpace1D t(uniform(n), p), other(uniform(n * 3 / 2), p);
        // Interior part is a copy of eta; the result lies in the mortar space.
        std::mt19937_64 rng(n);
        std::normal_distribution<double> g;
        Eigen::VectorXd eta(t.dimension());
        for (auto& x : eta) x = g(rng);
        eta[0] = eta[t.dimension() - 1] = 0.0;
        const Eigen::VectorXd psi = lab::build_lem1_function(t, eta);
        for (int i = p; i <= (n - 1) * p; ++i) CHECK(psi[i] == doctest::Approx(eta[i]));
        const CouplingMatrices cm = build_coupling(t, t);
        const Eigen::VectorXd back =
            cm.mortar.to_trace(cm.project(CouplingMatrices::Source::OwnTrace, psi));
        CHECK((back - psi).norm() < 1e-10 * psi.norm());

        const auto wm = lab::lem1_worst_case(t, t);
        const auto wo = lab::lem1_worst_case(t, other);
        CHECK(wm.c1 > 0.0);
        CHECK(wo.c1 > 0.0);
        // Random eta never beats the worst case.
        for (int r = 0; r < 20; ++r) {
          for (int i = 1; i + 1 < t.dimension(); ++i) eta[i] = g(rng);
          const auto m = lab::measure_lem1(t, eta, other);
          CHECK(m.c1 >= wo.c1 * (1 - 1e-9));
          CHECK(m.c2 <= wo.c2 * (1 + 1e-9));
        }
        c1_match.push_back(wm.c1);
        c1_other.push_back(wo.c1);
      }
      for (const auto* v : {&c1_match, &c1_other}) {
        const auto [lo, hi] = std::minmax_element(v->begin(), v->end());
        CHECK(*hi / *lo < 1.2);
      }
    }
    TraceSpace1D t({0.0, 0.5, 1.0}, 2);
    Eigen::VectorXd bad = Eigen::VectorXd::Ones(t.dimension());
    CHECK_THROWS(lab::build_lem1_function(t, bad));
  }
}
