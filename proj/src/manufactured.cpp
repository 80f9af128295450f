#include <cmath>
#include <random>
#include <stdexcept>

#include "nicem/experiments.hpp"

namespace nicem {

namespace {

ManufacturedCase case_a() {
  // u = x^4 y^4 + x y cos(10 x y) on the unit square.
  ManufacturedCase c;
  c.name = "A";
  c.domain = {0.0, 1.0, 0.0, 1.0};
  c.exact.u = [](double x, double y) { return std::pow(x * y, 4) + x * y * std::cos(10.0 * x * y); };
  c.exact.grad = [](double x, double y) -> std::array<double, 2> {
    const double co = std::cos(10.0 * x * y), si = std::sin(10.0 * x * y);
    return {4.0 * x * x * x * std::pow(y, 4) + y * co - 10.0 * x * y * y * si,
            4.0 * y * y * y * std::pow(x, 4) + x * co - 10.0 * x * x * y * si};
  };
  c.forcing = [u = c.exact.u](double x, double y) {
    const double co = std::cos(10.0 * x * y), si = std::sin(10.0 * x * y);
    const double uxx = 12.0 * x * x * std::pow(y, 4) - 20.0 * y * y * si - 100.0 * x * y * y * y * co;
    const double uyy = 12.0 * std::pow(x, 4) * y * y - 20.0 * x * x * si - 100.0 * x * x * x * y * co;
    return u(x, y) - uxx - uyy;
  };
  return c;
}

ManufacturedCase case_b() {
  // u = x^3 y^2 + sin(x y) on (-3, 3) x (-2, 2).
  ManufacturedCase c;
  c.name = "B";
  c.domain = {-3.0, 3.0, -2.0, 2.0};
  c.exact.u = [](double x, double y) { return x * x * x * y * y + std::sin(x * y); };
  c.exact.grad = [](double x, double y) -> std::array<double, 2> {
    const double co = std::cos(x * y);
    return {3.0 * x * x * y * y + y * co, 2.0 * x * x * x * y + x * co};
  };
  c.forcing = [u = c.exact.u](double x, double y) {
    const double si = std::sin(x * y);
    return u(x, y) - (6.0 * x * y * y - y * y * si) - (2.0 * x * x * x - x * x * si);
  };
  return c;
}

ManufacturedCase polynomial(const std::string& name, ScalarField u, VectorField grad, ScalarField laplacian) {
  ManufacturedCase c;
  c.name = name;
  c.domain = {0.0, 1.0, 0.0, 1.0};
  c.exact = {u, std::move(grad)};
  c.forcing = [u, lap = std::move(laplacian)](double x, double y) { return u(x, y) - lap(x, y); };
  return c;
}

ManufacturedCase lookup(const std::string& name) {
  if (name == "A") return case_a();
  if (name == "B") return case_b();
  if (name == "poly1")
    return polynomial(
        name, [](double x, double y) { return 1.0 + x + 2.0 * y; },
        [](double, double) -> std::array<double, 2> { return {1.0, 2.0}; }, [](double, double) { return 0.0; });
  if (name == "poly2")
    return polynomial(
        name, [](double x, double y) { return x * x + y; },
        [](double x, double) -> std::array<double, 2> { return {2.0 * x, 1.0}; }, [](double, double) { return 2.0; });
  if (name == "poly3")
    return polynomial(
        name, [](double x, double y) { return x * x * x + x * y * y + y; },
        [](double x, double y) -> std::array<double, 2> { return {3.0 * x * x + y * y, 2.0 * x * y + 1.0}; },
        [](double x, double) { return 8.0 * x; });
  if (name == "zero") {
    ManufacturedCase c;
    c.name = name;
    c.domain = {0.0, 1.0, 0.0, 1.0};
    c.exact = {[](double, double) { return 0.0; }, [](double, double) -> std::array<double, 2> { return {0.0, 0.0}; }};
    c.forcing = [](double, double) { return 0.0; };
    return c;
  }
  throw std::invalid_argument("unknown manufactured case '" + name + "'");
}

}  // namespace

double forcing_fd_mismatch(const ManufacturedCase& c, int points, unsigned long long seed) {
  constexpr double h = 1e-4;
  std::mt19937_64 rng(seed);
  const Rect& r = c.domain;
  std::uniform_real_distribution<double> ux(r.x0 + 2 * h, r.x1 - 2 * h), uy(r.y0 + 2 * h, r.y1 - 2 * h);
  const auto& u = c.exact.u;
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = ux(rng), y = uy(rng);
    const double u0 = u(x, y);
    const double lap = (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4.0 * u0) / (h * h);
    const double f = c.forcing(x, y);
    const double gx = (u(x + h, y) - u(x - h, y)) / (2 * h);
    const double gy = (u(x, y + h) - u(x, y - h)) / (2 * h);
    const auto g = c.exact.grad(x, y);
    // Scale by the size of the terms involved so cancellation in f is not penalized.
    const double fscale = std::max({1.0, std::abs(f), std::abs(u0), std::abs(lap)});
    const double gscale = std::max({1.0, std::abs(g[0]), std::abs(g[1])});
    worst = std::max(worst, std::abs(u0 - lap - f) / fscale);
    worst = std::max(worst, std::max(std::abs(gx - g[0]), std::abs(gy - g[1])) / gscale);
  }
  return worst;
}

ManufacturedCase manufactured_case(const std::string& name) {
  ManufacturedCase c = lookup(name);
  const double mismatch = forcing_fd_mismatch(c);
  if (!(mismatch < 1e-5))
    throw std::logic_error("manufactured case " + name + ": forcing disagrees with finite differences (" +
                           std::to_string(mismatch) + ")");
  return c;
}

std::vector<std::string> manufactured_case_names() { return {"A", "B", "poly1", "poly2", "poly3", "zero"}; }

}  // namespace nicem
