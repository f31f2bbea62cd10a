#pragma once

#include "odi/convex_set.hpp"
#include "odi/implicit_solver.hpp"

#include <functional>
#include <optional>
#include <string>

namespace odi {

using ScalarFn = std::function<double(double)>;
using SetField = std::function<ConvexSet(double t, const Vec& x)>;
using MatrixField = std::function<Mat(double t, const Vec& x)>;

/// Regularity data of the splitting F = f + M on [0, T] x B_C(0).
struct ModuliSpec {
  ScalarFn l_f;    ///< one-sided Lipschitz modulus of f(t, .)
  ScalarFn L_M;    ///< Lipschitz modulus of M(t, .) in the Hausdorff metric
  ScalarFn tau_f;  ///< modulus of continuity of f in t
  ScalarFn chi_f;  ///< modulus of continuity of f in x
  ScalarFn tau_M;  ///< modulus of continuity of M in t
  double P = 0.0;  ///< max |f| + max ||M|| on B_C(0)
  double C = 0.0;  ///< trajectory bound
  double L = 0.0;  ///< joint Lipschitz constant of f and M
  /// False when C was estimated from a pilot run rather than derived.
  bool rigorous = true;
  /// True when l_f and L_M do not depend on t.
  bool constant_coefficients = true;
};

/// Differential inclusion x' in f(t, x) + M(t, x).
struct Problem {
  std::string name;
  int dim = 1;
  VectorField f;
  JacobianField jac_f;  ///< may be empty, then finite differences are used
  SetField velocity_set;
  /// True when M(t, x) does not depend on x, so one sample serves a whole step.
  bool state_independent_velocity = false;
  ScalarFn l_f;  ///< one-sided Lipschitz modulus of f(t, .), checked by the step-size condition
  ScalarFn L_M;
  /// Moduli on the ball B_C(0) for a given trajectory bound C.
  std::function<ModuliSpec(double C)> moduli_at;
  /// Exact reachable set R(t, x0), when known in closed form.
  std::function<ConvexSet(double t, const Vec& x0)> exact_reach;
};

/// x' in -x + [-1, 1]. Exact reachable set from the upper and lower solutions.
Problem dahlquist();

/// x' in lambda x + [-radius, radius] with lambda < 0.
Problem stiff_linear(double lambda, double radius);

/// f(x) = 1/2 (-x1 - x2, x1 - x2 - x2^3), M = [0, 13/2] x {0}; -1/2-OSL, with
/// non-convex one-step images of the parameterized scheme.
Problem nonconvex_example();

/// Drift data for affine control systems, with constant moduli.
struct DriftSpec {
  VectorField f;
  JacobianField jac;
  double osl = 0.0;        ///< one-sided Lipschitz constant
  double lipschitz = 0.0;  ///< Lipschitz constant in x
  double f_at_origin = 0.0;  ///< |f(t, 0)| bound
};

/// x' in f(t, x) + A(t, x) U with M(t, x) = A(t, x) U, L_M = L_A * ||U||.
/// Representable images: Box U under a diagonal A (Box), Box or Polytope U
/// under any A (vertex images), Ball U under a scalar multiple of identity.
/// Other combinations throw.
Problem affine_control(std::string name, int dim, DriftSpec drift, MatrixField a, double lipschitz_a, ConvexSet u);

/// Linear drift x' = F x for affine_control.
DriftSpec linear_drift(const Mat& f);

/// Largest value of <f(t,x) - f(t,y), x - y> - l_f(t) |x - y|^2 over random
/// pairs in B_radius(0) and t in [0, t_max]; <= 0 when the OSL claim holds.
double osl_violation(const Problem& p, double radius, double t_max, int samples, unsigned seed);

/// Largest dist_H(M(t,x), M(t,y)) - L_M(t) |x - y| over random pairs, using
/// dense samples of both sets.
double lipschitz_m_violation(const Problem& p, double radius, double t_max, int samples, unsigned seed);

/// Problem catalog lookup used by the CLI: dahlquist, nonconvex, stiff (with
/// lambda, radius parameters).
Problem problem_by_name(const std::string& name, double lambda = -50.0, double radius = 1.0);

}  // namespace odi
