#pragma once

#include "odi/types.hpp"

#include <functional>
#include <optional>

namespace odi {

using VectorField = std::function<Vec(double t, const Vec& x)>;
using JacobianField = std::function<Mat(double t, const Vec& x)>;

struct SolveConfig {
  double abs_tol = 1e-10;
  int max_newton_iters = 50;
  int max_damped_iters = 100000;
  /// Base step of the central finite-difference Jacobian.
  double fd_step = 1e-7;

  void validate() const;
};

struct SolveStats {
  int newton_iters = 0;
  int damped_iters = 0;
  double final_residual = 0.0;
  bool converged = false;
};

struct SolveResult {
  Vec z;
  SolveStats stats;
};

/// Solver tolerance used by the schemes for grid width rho.
double default_abs_tol(double rho);

/// x + h f(t + h, z) + h m - z.
Vec residual(double t, const Vec& x, double h, const Vec& m, const Vec& z, const VectorField& f);

/// Solves z = x + h f(t + h, z) + h m by Newton's method on the residual,
/// with backtracking and a damped fixed-point fallback. `osl` is l_f(t + h)
/// when known; it enables the step-size check and the fallback damping.
/// The default start is the explicit predictor x + h (f(t, x) + m).
///
/// Throws StepSizeViolation if osl * h >= 1 and NoConvergence if both
/// iteration caps are exhausted.
SolveResult solve_implicit(double t, const Vec& x, double h, const Vec& m, const VectorField& f,
                           const JacobianField& jac, const SolveConfig& cfg, std::optional<double> osl = std::nullopt,
                           const Vec* initial_guess = nullptr);

/// Central finite differences of f(t, .) at z, step max(fd_step, fd_step * |z_j|).
Mat finite_difference_jacobian(const VectorField& f, double t, const Vec& z, double fd_step);

}  // namespace odi
