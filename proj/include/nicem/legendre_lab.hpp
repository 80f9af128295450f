#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <span>
#include <vector>

#include "nicem/interface_mortar.hpp"

namespace nicem::lab {

using Rational = boost::multiprecision::cpp_rational;
using RationalMatrix = std::vector<std::vector<Rational>>;

/// Polynomial of Q^p (degree <= p, zero at -1) written as
/// sum_{m=1..p} eta[m-1] (L_m + L_{m-1}).
struct EtaCoeffs {
  std::vector<double> eta;
  int degree() const { return static_cast<int>(eta.size()); }
};

/// Legendre coefficients e_0..e_p: e_j = eta_j + eta_{j+1}.
std::vector<double> legendre_coefficients(const EtaCoeffs& eta);
/// Inverse of legendre_coefficients; throws if the polynomial does not vanish at -1
/// (relative tolerance `tol`).
EtaCoeffs from_legendre(std::span<const double> e, double tol = 1e-10);
EtaCoeffs random_eta(int p, unsigned long long seed);

double value_at_one(const EtaCoeffs& eta);
double l2_norm_squared(const EtaCoeffs& eta);

struct SResult {
  double mu = 0.0;          // optimal multiplier mu*
  std::vector<double> psi;  // Legendre coefficients of S(eta), L_0..L_{p-1}
};
/// Maximizer of J(psi; eta) over P_{p-1} with psi(1) = eta(1).
SResult s_operator(const EtaCoeffs& eta);

/// J(psi; eta) = \int_{-1}^1 eta psi - (eta - psi)^2 / 4 from Legendre coefficients.
double j_functional(std::span<const double> eta_legendre, std::span<const double> psi_legendre);
/// Same value by Gauss quadrature.
double j_functional_quadrature(std::span<const double> eta_legendre, std::span<const double> psi_legendre);

/// (2 eta(1) - 3 eta_p)^2 + p^2 (-4 ||eta||^2 + 9 eta_p^2 / (2p + 1)).
double delta_of_eta(const EtaCoeffs& eta);
Rational delta_of_eta_exact(std::span<const Rational> eta);

/// Matrix D with Delta(eta) = eta^T D eta, and the Gram matrix of the b_m basis.
RationalMatrix delta_form_exact(int p);
RationalMatrix gram_exact(int p);

struct Spectrum {
  Eigen::MatrixXd form;
  Eigen::MatrixXd gram;
  double lambda_max = 0.0;
  Eigen::VectorXd eigenvalues;      // ascending
  bool certified_negative = false;  // exact: every LDL^T pivot of -D is positive
  std::vector<Rational> pivots;     // of -D
};
Spectrum delta_form_spectrum(int p);

/// Closed form 16 (p^2 - 13p - 8)(p - 1) p^3 / (2p + 1).
Rational case1_discriminant(int p);
/// Discriminant of lambda_3 -> Delta(L_p + lambda_2 L'_p + lambda_3 L'_{p-1}) with
/// lambda_2 fixed by eta(-1) = 0, obtained by exact evaluation of Delta at three points.
Rational case1_discriminant_from_delta(int p);
/// eta of the first case for a given lambda_3, in the b_m basis.
std::vector<Rational> case1_eta(int p, const Rational& lambda3);

/// Closed form -4 (p - 1) p^2 (p^2 + 1) / (p + 1).
double case2_value(int p);
/// (p-1)/(p+1) L'_p + L'_{p-1} in the b_m basis.
EtaCoeffs case2_eta(int p);

/// Piecewise function of the stability construction for eta in the trace
/// space vanishing at both ends: eta on interior segments, S applied on each
/// end segment mapped to [-1, 1] with the outer end at -1. Returned as trace
/// nodal coefficients; the result lies in the mortar space.
Eigen::VectorXd build_lem1_function(const TraceSpace1D& trace, const Eigen::VectorXd& eta);

struct Lem1Constants {
  double c1 = 0.0;  // \int (eta + pi(eta)) psi / ||eta||^2
  double c2 = 0.0;  // ||psi|| / ||eta||
};
/// pi projects onto the mortar space of `other` (same segment, possibly another mesh).
Lem1Constants measure_lem1(const TraceSpace1D& trace, const Eigen::VectorXd& eta, const TraceSpace1D& other);
/// Worst case over all admissible eta: smallest c1 and largest c2.
Lem1Constants lem1_worst_case(const TraceSpace1D& trace, const TraceSpace1D& other);

}  // namespace nicem::lab
