#include <chrono>
#include <cmath>

#include "nicem/gmres.hpp"
#include "nicem/schwarz_solver.hpp"

namespace nicem {

namespace {

using Clock = std::chrono::steady_clock;

double max_abs(const SchwarzState& st) {
  double m = 0.0;
  for (const auto& u : st.u) m = std::max(m, u.size() ? u.cwiseAbs().maxCoeff() : 0.0);
  return m;
}

// Shared bookkeeping for both solvers: history, scales from n = 1, stopping
// test and the best state seen so far.
class Tracker {
 public:
  Tracker(const NicemSystem& system, const SolverOptions& options)
      : system_(system), options_(options), start_(Clock::now()) {}

  // Returns true once a stopping criterion holds.
  bool record(int n, SchwarzState state) {
    IterationRecord rec;
    rec.n = n;
    rec.energy = system_.energy(state);
    rec.interface_term = system_.interface_term(state);
    const double r = system_.residual_norm(state);
    rec.linf = max_abs(state);
    if (n == 1) {
      r1_ = r;
      e1_ = rec.energy;
    }
    rec.residual = options_.relative_residual ? (r1_ > 0.0 ? r / r1_ : 0.0) : r;
    rec.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    state.iteration = n;

    bool done = false;
    if (n == 1 && r1_ == 0.0) {
      done = true;
      result_.iterations = 0;
    } else {
      if (options_.tol > 0.0 && rec.residual <= options_.tol) done = true;
      if (options_.h1_reduction > 0.0) {
        const double red = e1_ > 0.0 ? std::sqrt(std::max(rec.energy, 0.0) / e1_) : 0.0;
        if (red <= options_.h1_reduction) done = true;
      }
      if (done) result_.iterations = n;
    }
    result_.history.push_back(rec);
    if (options_.on_iteration) options_.on_iteration(rec, state);
    if (done || !have_best_ || rec.residual < best_residual_) {
      best_residual_ = rec.residual;
      have_best_ = true;
      result_.state = std::move(state);
    }
    if (done) result_.converged = true;
    return done;
  }

  SolveResult finish(int n_last) {
    if (!result_.converged) result_.iterations = n_last;
    return std::move(result_);
  }

 private:
  const NicemSystem& system_;
  const SolverOptions& options_;
  Clock::time_point start_;
  double r1_ = 0.0;
  double e1_ = 0.0;
  double best_residual_ = 0.0;
  bool have_best_ = false;
  SolveResult result_;
};

}  // namespace

SolveResult run_schwarz(const NicemSystem& system, SchwarzState initial, const SolverOptions& options) {
  Tracker tracker(system, options);
  SchwarzState state = std::move(initial);
  int n = 0;
  while (n < options.max_iter) {
    state = system.step(state);
    ++n;
    if (tracker.record(n, state)) break;
  }
  return tracker.finish(n);
}

SolveResult run_gmres(const NicemSystem& system, const SchwarzState& initial, const SolverOptions& options) {
  Tracker tracker(system, options);
  const Vector lambda0 = system.moments(initial);
  if (options.max_iter < 1 || tracker.record(1, system.solve_from_moments(lambda0, true))) return tracker.finish(1);

  const Vector b = system.moments(system.solve_from_moments(Vector::Zero(system.moment_size()), true));
  auto apply = [&](const Vector& v) -> Vector { return v - system.moments(system.solve_from_moments(v, false)); };
  int last = 1;
  auto monitor = [&](int j, const Vector& x, double) {
    last = j + 1;
    return tracker.record(j + 1, system.solve_from_moments(x, true));
  };
  // The Euclidean GMRES residual is not used for stopping; the monitor applies
  // the same criteria as the Schwarz iteration.
  gmres(apply, b, lambda0, -1.0, options.max_iter - 1, monitor);
  return tracker.finish(last);
}

}  // namespace nicem
