#pragma once

#include <vector>

namespace nicem::legendre {

/// Values L_0(x) .. L_n(x) from the three-term recurrence
/// (m+1) L_{m+1} = (2m+1) x L_m - m L_{m-1}.
std::vector<double> values(int n, double x);

/// Derivatives L'_0(x) .. L'_n(x), obtained by differentiating the recurrence.
std::vector<double> derivatives(int n, double x);

double value(int m, double x);
double derivative(int m, double x);

/// Legendre basis up to a fixed degree; evaluates both values and derivatives.
class LegendreBasis {
 public:
  explicit LegendreBasis(int max_degree);

  int max_degree() const { return max_degree_; }

  struct Eval {
    std::vector<double> values;
    std::vector<double> derivatives;
  };
  Eval evaluate(double x) const;

  /// Value of sum_m coeffs[m] L_m(x).
  double series(const std::vector<double>& coeffs, double x) const;

 private:
  int max_degree_;
};

/// Legendre coefficients of L'_n: L'_n = sum over k = n-1, n-3, ... of (2k+1) L_k.
std::vector<double> derivative_coefficients(int n);

}  // namespace nicem::legendre
