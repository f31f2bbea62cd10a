#include "odi/implicit_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace odi {

void SolveConfig::validate() const {
  if (!(abs_tol > 0.0)) throw Error("abs_tol must be positive");
  if (max_newton_iters < 1 || max_damped_iters < 1) throw Error("iteration caps must be at least 1");
  if (!(fd_step > 0.0)) throw Error("fd_step must be positive");
}

double default_abs_tol(double rho) { return std::max(1e-10, 1e-3 * rho); }

Vec residual(double t, const Vec& x, double h, const Vec& m, const Vec& z, const VectorField& f) {
  if (h == 0.0) return x - z;
  return x + h * f(t + h, z) + h * m - z;
}

Mat finite_difference_jacobian(const VectorField& f, double t, const Vec& z, double fd_step) {
  const auto d = z.size();
  Mat jac(d, d);
  Vec probe = z;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double s = std::max(fd_step, fd_step * std::abs(z[j]));
    probe[j] = z[j] + s;
    const Vec fp = f(t, probe);
    probe[j] = z[j] - s;
    const Vec fm = f(t, probe);
    probe[j] = z[j];
    jac.col(j) = (fp - fm) / (2.0 * s);
  }
  return jac;
}

SolveResult solve_implicit(double t, const Vec& x, double h, const Vec& m, const VectorField& f,
                           const JacobianField& jac, const SolveConfig& cfg, std::optional<double> osl,
                           const Vec* initial_guess) {
  if (osl && *osl * h >= 1.0) {
    std::ostringstream msg;
    msg << "step size violates l_f(t+h) h < 1: l_f=" << *osl << " h=" << h;
    throw StepSizeViolation(msg.str());
  }
  SolveResult out;
  SolveStats& stats = out.stats;
  Vec& z = out.z;
  if (initial_guess) {
    z = *initial_guess;
  } else {
    z = h == 0.0 ? x : Vec(x + h * (f(t, x) + m));
  }
  Vec r = residual(t, x, h, m, z, f);
  double rn = r.norm();

  const double t1 = t + h;
  const auto d = x.size();
  bool newton_stalled = false;
  while (rn > cfg.abs_tol && stats.newton_iters < cfg.max_newton_iters) {
    const Mat jf = jac ? jac(t1, z) : finite_difference_jacobian(f, t1, z, cfg.fd_step);
    const Mat jr = h * jf - Mat::Identity(d, d);
    const Vec step = jr.partialPivLu().solve(-r);
    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 8; ++halving) {
      const Vec trial = z + lambda * step;
      const Vec rt = residual(t, x, h, m, trial, f);
      const double rtn = rt.norm();
      if (std::isfinite(rtn) && rtn < rn) {
        z = trial;
        r = rt;
        rn = rtn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    ++stats.newton_iters;
    if (!accepted) {
      newton_stalled = true;
      break;
    }
  }

  if (rn > cfg.abs_tol) {
    const double tau = osl ? 0.5 * (1.0 - *osl * h) / (1.0 + std::abs(*osl) * h) : 0.25;
    while (rn > cfg.abs_tol && stats.damped_iters < cfg.max_damped_iters) {
      z += tau * r;
      r = residual(t, x, h, m, z, f);
      rn = r.norm();
      ++stats.damped_iters;
      if (!std::isfinite(rn)) break;
    }
  }

  stats.final_residual = rn;
  stats.converged = rn <= cfg.abs_tol;
  if (!stats.converged) {
    std::ostringstream msg;
    msg << "implicit solve did not converge: residual " << rn << " after " << stats.newton_iters << " Newton and "
        << stats.damped_iters << " damped iterations" << (newton_stalled ? " (Newton stalled)" : "");
    throw NoConvergence(msg.str());
  }
  return out;
}

}  // namespace odi
