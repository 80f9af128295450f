#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace nicem {

struct GmresResult {
  Eigen::VectorXd x;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals;  // ||b - A x_j|| / ||b - A x_0||, j = 0..iterations
};

/// Full (unrestarted) GMRES with modified Gram-Schmidt. `apply(v)` returns
/// A v. After every iteration `monitor(j, x_j, rel_residual)` is called; it
/// may return true to report convergence on its own criterion. A happy
/// breakdown counts as convergence.
template <class Apply, class Monitor>
GmresResult gmres(Apply&& apply, const Eigen::VectorXd& b, const Eigen::VectorXd& x0, double tol, int max_iter,
                  Monitor&& monitor) {
  using Eigen::VectorXd;
  GmresResult res;
  res.x = x0;
  const VectorXd r0 = b - apply(x0);
  const double beta = r0.norm();
  res.residuals.push_back(beta > 0.0 ? 1.0 : 0.0);
  if (beta == 0.0) {
    res.converged = true;
    return res;
  }
  const int m = std::max(1, std::min<int>(max_iter, static_cast<int>(b.size())));
  std::vector<VectorXd> basis;
  basis.reserve(m + 1);
  basis.push_back(r0 / beta);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
  std::vector<double> cs(m), sn(m);
  VectorXd g = VectorXd::Zero(m + 1);
  g[0] = beta;

  for (int j = 0; j < m; ++j) {
    VectorXd w = apply(basis[j]);
    const double w_norm0 = w.norm();
    for (int i = 0; i <= j; ++i) {
      h(i, j) = basis[i].dot(w);
      w -= h(i, j) * basis[i];
    }
    const double w_norm = w.norm();
    h(j + 1, j) = w_norm;
    const bool breakdown = w_norm <= 1e-14 * std::max(w_norm0, 1e-300);
    for (int i = 0; i < j; ++i) {
      const double t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
      h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
      h(i, j) = t;
    }
    const double denom = std::hypot(h(j, j), h(j + 1, j));
    cs[j] = h(j, j) / denom;
    sn[j] = h(j + 1, j) / denom;
    h(j, j) = denom;
    h(j + 1, j) = 0.0;
    g[j + 1] = -sn[j] * g[j];
    g[j] = cs[j] * g[j];

    // x_j = x0 + V y with R y = g (upper triangular).
    VectorXd y = h.topLeftCorner(j + 1, j + 1).triangularView<Eigen::Upper>().solve(g.head(j + 1));
    VectorXd x = x0;
    for (int i = 0; i <= j; ++i) x += y[i] * basis[i];
    const double rel = std::abs(g[j + 1]) / beta;
    res.x = std::move(x);
    res.iterations = j + 1;
    res.residuals.push_back(rel);
    const bool stop = monitor(j + 1, res.x, rel);
    if (stop || breakdown || rel <= tol) {
      res.converged = true;
      return res;
    }
    if (j + 1 < m) basis.push_back(w / w_norm);
  }
  return res;
}

}  // namespace nicem
