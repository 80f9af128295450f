#include "nicem/legendre.hpp"

#include <stdexcept>

namespace nicem::legendre {

std::vector<double> values(int n, double x) {
  if (n < 0) throw std::invalid_argument("legendre::values: negative degree");
  std::vector<double> l(n + 1);
  l[0] = 1.0;
  if (n >= 1) l[1] = x;
  for (int m = 1; m < n; ++m)
    l[m + 1] = ((2.0 * m + 1.0) * x * l[m] - m * l[m - 1]) / (m + 1.0);
  return l;
}

std::vector<double> derivatives(int n, double x) {
  if (n < 0) throw std::invalid_argument("legendre::derivatives: negative degree");
  const auto l = values(n, x);
  std::vector<double> d(n + 1, 0.0);
  if (n >= 1) d[1] = 1.0;
  // (m+1) L'_{m+1} = (2m+1) (L_m + x L'_m) - m L'_{m-1}
  for (int m = 1; m < n; ++m)
    d[m + 1] = ((2.0 * m + 1.0) * (l[m] + x * d[m]) - m * d[m - 1]) / (m + 1.0);
  return d;
}

double value(int m, double x) { return values(m, x).back(); }

double derivative(int m, double x) { return derivatives(m, x).back(); }

LegendreBasis::LegendreBasis(int max_degree) : max_degree_(max_degree) {
  if (max_degree < 0) throw std::invalid_argument("LegendreBasis: negative degree");
}

LegendreBasis::Eval LegendreBasis::evaluate(double x) const {
  return {values(max_degree_, x), derivatives(max_degree_, x)};
}

double LegendreBasis::series(const std::vector<double>& coeffs, double x) const {
  if (static_cast<int>(coeffs.size()) > max_degree_ + 1)
    throw std::invalid_argument("LegendreBasis::series: too many coefficients");
  const auto l = values(max_degree_, x);
  double s = 0.0;
  for (std::size_t m = 0; m < coeffs.size(); ++m) s += coeffs[m] * l[m];
  return s;
}

std::vector<double> derivative_coefficients(int n) {
  std::vector<double> c(n + 1, 0.0);
  for (int k = n - 1; k >= 0; k -= 2) c[k] = 2.0 * k + 1.0;
  return c;
}

}  // namespace nicem::legendre
