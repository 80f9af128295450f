#pragma once

#include <array>
#include <vector>

namespace nicem {

/// Gauss-Legendre rule on [-1, 1]; n points integrate degree 2n-1 exactly.
struct Rule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

Rule1D gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
Rule1D gauss_legendre(int n, double a, double b);

/// Rule on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct TriangleRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Collapsed (Duffy) product of Gauss-Legendre rules, exact for total degree
/// `degree`. All weights are positive.
TriangleRule triangle_rule(int degree);

}  // namespace nicem
