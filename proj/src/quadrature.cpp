#include "nicem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "nicem/legendre.hpp"

namespace nicem {

Rule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  static std::mutex mutex;
  static std::map<int, Rule1D> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }

  Rule1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on L_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      const auto l = legendre::values(n, x);
      dp = n * (x * l[n] - l[n - 1]) / (x * x - 1.0);
      const double dx = l[n] / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto l = legendre::values(n, x);
    dp = n * (x * l[n] - l[n - 1]) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;

  std::lock_guard lock(mutex);
  cache.emplace(n, rule);
  return rule;
}

Rule1D gauss_legendre(int n, double a, double b) {
  Rule1D rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (auto& x : rule.points) x = mid + half * x;
  for (auto& w : rule.weights) w *= half;
  return rule;
}

TriangleRule triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: negative degree");
  // x = u, y = v (1 - u); the Jacobian (1 - u) raises the u-degree by one.
  const int nu = (degree + 3) / 2;
  const int nv = (degree + 2) / 2;
  const Rule1D ru = gauss_legendre(nu, 0.0, 1.0);
  const Rule1D rv = gauss_legendre(nv, 0.0, 1.0);
  TriangleRule rule;
  rule.degree = degree;
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const double u = ru.points[i];
      const double v = rv.points[j];
      rule.points.push_back({u, v * (1.0 - u)});
      rule.weights.push_back(ru.weights[i] * rv.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace nicem
