#include "nicem/legendre_lab.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "nicem/legendre.hpp"
#include "nicem/quadrature.hpp"

namespace nicem::lab {

std::vector<double> legendre_coefficients(const EtaCoeffs& eta) {
  const int p = eta.degree();
  std::vector<double> e(p + 1, 0.0);
  for (int m = 1; m <= p; ++m) {
    e[m] += eta.eta[m - 1];
    e[m - 1] += eta.eta[m - 1];
  }
  return e;
}

EtaCoeffs from_legendre(std::span<const double> e, double tol) {
  if (e.size() < 2) throw std::invalid_argument("from_legendre: need degree >= 1");
  const int p = static_cast<int>(e.size()) - 1;
  EtaCoeffs out{std::vector<double>(p, 0.0)};
  out.eta[p - 1] = e[p];
  for (int m = p - 1; m >= 1; --m) out.eta[m - 1] = e[m] - out.eta[m];
  double scale = 1.0;
  for (double v : e) scale = std::max(scale, std::abs(v));
  if (std::abs(e[0] - out.eta[0]) > tol * scale) throw std::invalid_argument("from_legendre: polynomial is not zero at -1");
  return out;
}

EtaCoeffs random_eta(int p, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  EtaCoeffs out{std::vector<double>(p)};
  for (auto& v : out.eta) v = dist(rng);
  return out;
}

double value_at_one(const EtaCoeffs& eta) {
  double s = 0.0;
  for (double v : eta.eta) s += v;
  return 2.0 * s;
}

double l2_norm_squared(const EtaCoeffs& eta) {
  const auto e = legendre_coefficients(eta);
  double s = 0.0;
  for (std::size_t j = 0; j < e.size(); ++j) s += e[j] * e[j] * 2.0 / (2.0 * j + 1.0);
  return s;
}

SResult s_operator(const EtaCoeffs& eta) {
  const int p = eta.degree();
  if (p < 1) throw std::invalid_argument("s_operator: degree must be >= 1");
  if (std::all_of(eta.eta.begin(), eta.eta.end(), [](double v) { return v == 0.0; }))
    throw std::invalid_argument("s_operator: eta is zero");
  const auto e = legendre_coefficients(eta);
  SResult r;
  r.mu = (2.0 * value_at_one(eta) - 3.0 * eta.eta[p - 1]) / (static_cast<double>(p) * p);
  r.psi.resize(p);
  for (int j = 0; j < p; ++j) r.psi[j] = 3.0 * e[j] - r.mu * (2.0 * j + 1.0);
  return r;
}

double j_functional(std::span<const double> eta_legendre, std::span<const double> psi_legendre) {
  const std::size_t n = std::max(eta_legendre.size(), psi_legendre.size());
  double cross = 0.0, diff = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = j < eta_legendre.size() ? eta_legendre[j] : 0.0;
    const double b = j < psi_legendre.size() ? psi_legendre[j] : 0.0;
    const double w = 2.0 / (2.0 * j + 1.0);
    cross += w * a * b;
    diff += w * (a - b) * (a - b);
  }
  return cross - 0.25 * diff;
}

double j_functional_quadrature(std::span<const double> eta_legendre, std::span<const double> psi_legendre) {
  const int n = static_cast<int>(std::max(eta_legendre.size(), psi_legendre.size()));
  const legendre::LegendreBasis basis(std::max(n - 1, 0));
  const std::vector<double> a(eta_legendre.begin(), eta_legendre.end());
  const std::vector<double> b(psi_legendre.begin(), psi_legendre.end());
  const Rule1D rule = gauss_legendre(n + 1);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double x = rule.points[q];
    const double ea = basis.series(a, x), pb = basis.series(b, x);
    s += rule.weights[q] * (ea * pb - 0.25 * (ea - pb) * (ea - pb));
  }
  return s;
}

double delta_of_eta(const EtaCoeffs& eta) {
  const int p = eta.degree();
  const double ep = eta.eta[p - 1];
  const double lead = 2.0 * value_at_one(eta) - 3.0 * ep;
  const double pp = static_cast<double>(p) * p;
  return lead * lead + pp * (-4.0 * l2_norm_squared(eta) + 9.0 * ep * ep / (2.0 * p + 1.0));
}

Rational delta_of_eta_exact(std::span<const Rational> eta) {
  const int p = static_cast<int>(eta.size());
  if (p < 1) throw std::invalid_argument("delta_of_eta_exact: degree must be >= 1");
  Rational at_one = 0, norm2 = 0;
  for (const auto& v : eta) at_one += 2 * v;
  for (int j = 0; j <= p; ++j) {
    Rational e = 0;
    if (j >= 1) e += eta[j - 1];
    if (j < p) e += eta[j];
    norm2 += e * e * Rational(2, 2 * j + 1);
  }
  const Rational& ep = eta[p - 1];
  const Rational lead = 2 * at_one - 3 * ep;
  return lead * lead + Rational(p * p) * (-4 * norm2 + 9 * ep * ep / Rational(2 * p + 1));
}

RationalMatrix gram_exact(int p) {
  RationalMatrix g(p, std::vector<Rational>(p, Rational(0)));
  for (int m = 1; m <= p; ++m) {
    g[m - 1][m - 1] = Rational(2, 2 * m + 1) + Rational(2, 2 * m - 1);
    if (m < p) g[m - 1][m] = g[m][m - 1] = Rational(2, 2 * m + 1);
  }
  return g;
}

RationalMatrix delta_form_exact(int p) {
  if (p < 1) throw std::invalid_argument("delta_form_exact: degree must be >= 1");
  const RationalMatrix g = gram_exact(p);
  RationalMatrix d(p, std::vector<Rational>(p));
  auto a = [p](int m) { return m < p ? Rational(4) : Rational(1); };
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= p; ++j) d[i - 1][j - 1] = a(i) * a(j) - 4 * Rational(p * p) * g[i - 1][j - 1];
  d[p - 1][p - 1] += Rational(9 * p * p, 2 * p + 1);
  return d;
}

namespace {

Eigen::MatrixXd to_double(const RationalMatrix& m) {
  const int n = static_cast<int>(m.size());
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = static_cast<double>(m[i][j]);
  return out;
}

// Pivots of the unpivoted LDL^T of a symmetric matrix, stopping after the
// first nonpositive one.
std::vector<Rational> ldlt_pivots(const RationalMatrix& a) {
  const int n = static_cast<int>(a.size());
  RationalMatrix l(n, std::vector<Rational>(n, Rational(0)));
  std::vector<Rational> d;
  for (int k = 0; k < n; ++k) {
    Rational dk = a[k][k];
    for (int j = 0; j < k; ++j) dk -= l[k][j] * l[k][j] * d[j];
    d.push_back(dk);
    if (dk <= 0) break;
    for (int i = k + 1; i < n; ++i) {
      Rational s = a[i][k];
      for (int j = 0; j < k; ++j) s -= l[i][j] * l[k][j] * d[j];
      l[i][k] = s / dk;
    }
  }
  return d;
}

}  // namespace

Spectrum delta_form_spectrum(int p) {
  if (p < 1 || p > 30) throw std::invalid_argument("delta_form_spectrum: degree must be in 1..30");
  const RationalMatrix d = delta_form_exact(p);
  Spectrum s;
  s.form = to_double(d);
  s.gram = to_double(gram_exact(p));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s.form, s.gram);
  if (es.info() != Eigen::Success) throw std::runtime_error("delta_form_spectrum: eigensolver failed");
  s.eigenvalues = es.eigenvalues();
  s.lambda_max = s.eigenvalues[p - 1];
  RationalMatrix neg = d;
  for (auto& row : neg)
    for (auto& v : row) v = -v;
  s.pivots = ldlt_pivots(neg);
  s.certified_negative = static_cast<int>(s.pivots.size()) == p &&
                         std::all_of(s.pivots.begin(), s.pivots.end(), [](const Rational& v) { return v > 0; });
  return s;
}

Rational case1_discriminant(int p) {
  if (p < 2) throw std::invalid_argument("case1_discriminant: p must be >= 2");
  const Rational q(p);
  return 16 * (q * q - 13 * q - 8) * (q - 1) * q * q * q / (2 * q + 1);
}

namespace {

// Legendre coefficients (size p+1) to the b_m basis, exactly.
std::vector<Rational> to_eta_exact(const std::vector<Rational>& c) {
  const int p = static_cast<int>(c.size()) - 1;
  std::vector<Rational> eta(p);
  eta[p - 1] = c[p];
  for (int m = p - 1; m >= 1; --m) eta[m - 1] = c[m] - eta[m];
  if (c[0] != eta[0]) throw std::logic_error("to_eta_exact: polynomial is not zero at -1");
  return eta;
}

void add_derivative(std::vector<Rational>& c, int n, const Rational& scale) {
  for (int k = n - 1; k >= 0; k -= 2) c[k] += scale * (2 * k + 1);
}

}  // namespace

std::vector<Rational> case1_eta(int p, const Rational& lambda3) {
  if (p < 2) throw std::invalid_argument("case1_eta: p must be >= 2");
  const Rational lambda2 = Rational(2, p * (p + 1)) + lambda3 * Rational(p - 1, p + 1);
  std::vector<Rational> c(p + 1, Rational(0));
  c[p] += 1;
  add_derivative(c, p, lambda2);
  add_derivative(c, p - 1, lambda3);
  return to_eta_exact(c);
}

Rational case1_discriminant_from_delta(int p) {
  const Rational f0 = delta_of_eta_exact(case1_eta(p, Rational(0)));
  const Rational fp = delta_of_eta_exact(case1_eta(p, Rational(1)));
  const Rational fm = delta_of_eta_exact(case1_eta(p, Rational(-1)));
  const Rational a = (fp + fm) / 2 - f0;
  const Rational b = (fp - fm) / 2;
  return b * b - 4 * a * f0;
}

double case2_value(int p) {
  if (p < 2) throw std::invalid_argument("case2_value: p must be >= 2");
  const double q = p;
  return -4.0 * (q - 1.0) * q * q * (q * q + 1.0) / (q + 1.0);
}

EtaCoeffs case2_eta(int p) {
  if (p < 2) throw std::invalid_argument("case2_eta: p must be >= 2");
  std::vector<double> c(p + 1, 0.0);
  const auto dp = legendre::derivative_coefficients(p);
  const auto dq = legendre::derivative_coefficients(p - 1);
  const double lambda2 = (p - 1.0) / (p + 1.0);
  for (int k = 0; k <= p; ++k) c[k] += lambda2 * dp[k];
  for (int k = 0; k < p; ++k) c[k] += dq[k];
  return from_legendre(c);
}

namespace {

// Legendre coefficients of the degree-p polynomial with values v_j at t_j.
std::vector<double> legendre_fit(const std::vector<double>& t, const std::vector<double>& v) {
  const int n = static_cast<int>(t.size());
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);
  for (int j = 0; j < n; ++j) {
    const auto l = legendre::values(n - 1, t[j]);
    for (int k = 0; k < n; ++k) a(j, k) = l[k];
    b[j] = v[j];
  }
  const Eigen::VectorXd c = a.partialPivLu().solve(b);
  return {c.data(), c.data() + n};
}

}  // namespace

Eigen::VectorXd build_lem1_function(const TraceSpace1D& trace, const Eigen::VectorXd& eta) {
  const int p = trace.degree();
  const int n = trace.segments();
  const int dim = trace.dimension();
  if (n < 2) throw std::invalid_argument("build_lem1_function: need at least two segments");
  if (eta.size() != dim) throw std::invalid_argument("build_lem1_function: size mismatch");
  const double scale = std::max(eta.cwiseAbs().maxCoeff(), 1e-300);
  if (std::abs(eta[0]) > 1e-12 * scale || std::abs(eta[dim - 1]) > 1e-12 * scale)
    throw std::invalid_argument("build_lem1_function: eta must vanish at both interface ends");

  Eigen::VectorXd psi = eta;
  // first: local node j of the end segment sits at t = -1 + 2j/p (outer end at -1).
  auto end_segment = [&](int first_dof, int stride) {
    std::vector<double> t(p + 1), v(p + 1);
    for (int j = 0; j <= p; ++j) {
      t[j] = -1.0 + 2.0 * j / p;
      v[j] = eta[first_dof + stride * j];
    }
    const auto e = legendre_fit(t, v);
    const EtaCoeffs local = from_legendre(e, 1e-8);
    if (std::all_of(local.eta.begin(), local.eta.end(), [](double x) { return x == 0.0; })) {
      for (int j = 0; j < p; ++j) psi[first_dof + stride * j] = 0.0;
      return;
    }
    const SResult s = s_operator(local);
    const legendre::LegendreBasis basis(p - 1);
    for (int j = 0; j < p; ++j) psi[first_dof + stride * j] = basis.series(s.psi, t[j]);
  };
  end_segment(0, 1);
  end_segment(dim - 1, -1);
  return psi;
}

namespace {

struct Lem1Operators {
  Eigen::MatrixXd mass;     // trace mass
  Eigen::MatrixXd pi_form;  // (eta, psi) -> \int pi(eta) psi
};

Lem1Operators lem1_operators(const TraceSpace1D& trace, const TraceSpace1D& other) {
  Lem1Operators ops;
  ops.mass = cross_mass(trace, trace);
  const MortarSpace mortar(other);
  const Eigen::MatrixXd& q = mortar.basis();
  const Eigen::MatrixXd x = cross_mass(other, trace);
  const Eigen::MatrixXd mw = q * cross_mass(other, other) * q.transpose();
  const Eigen::MatrixXd proj = q.transpose() * mw.llt().solve(q * x);  // eta -> other trace coefficients
  ops.pi_form = proj.transpose() * x;
  return ops;
}

}  // namespace

Lem1Constants measure_lem1(const TraceSpace1D& trace, const Eigen::VectorXd& eta, const TraceSpace1D& other) {
  const Eigen::VectorXd psi = build_lem1_function(trace, eta);
  const Lem1Operators ops = lem1_operators(trace, other);
  const double n2 = eta.dot(ops.mass * eta);
  if (!(n2 > 0.0)) throw std::invalid_argument("measure_lem1: eta is zero");
  Lem1Constants c;
  c.c1 = (eta.dot(ops.mass * psi) + eta.dot(ops.pi_form * psi)) / n2;
  c.c2 = std::sqrt(psi.dot(ops.mass * psi) / n2);
  return c;
}

Lem1Constants lem1_worst_case(const TraceSpace1D& trace, const TraceSpace1D& other) {
  const int dim = trace.dimension();
  const int m = dim - 2;
  if (m < 1) throw std::invalid_argument("lem1_worst_case: no interior degrees of freedom");
  Eigen::MatrixXd psi_map(dim, m);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e[i + 1] = 1.0;
    psi_map.col(i) = build_lem1_function(trace, e);
  }
  const Lem1Operators ops = lem1_operators(trace, other);
  const Eigen::MatrixXd mi = ops.mass.block(1, 1, m, m);
  const Eigen::MatrixXd k = (ops.mass + ops.pi_form).middleRows(1, m) * psi_map;
  const Eigen::MatrixXd sym = 0.5 * (k + k.transpose());
  const Eigen::MatrixXd psi_mass = psi_map.transpose() * ops.mass * psi_map;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> e1(sym, mi, Eigen::EigenvaluesOnly);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> e2(psi_mass, mi, Eigen::EigenvaluesOnly);
  Lem1Constants c;
  c.c1 = e1.eigenvalues()[0];
  c.c2 = std::sqrt(std::max(e2.eigenvalues()[m - 1], 0.0));
  return c;
}

}  // namespace nicem::lab
