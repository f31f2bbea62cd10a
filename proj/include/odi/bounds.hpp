#pragma once

#include "odi/problem.hpp"
#include "odi/schemes.hpp"

#include <vector>

namespace odi {

/// Per-step consistency error tau_f(h) + chi_f(P h) + tau_M(h) + L_M(t) P h.
double gamma(double h, double t, const ModuliSpec& m);

/// Split-scheme consistency error of step k:
///   (tau_f(h) + chi_f(P h)) / (1 - l_f(t_{k+1}) h)
///   + chi_f(int_{t_k}^{t_{k+1}} exp(int_s^{t_{k+1}} l_f) P ds) + tau_M(h) + L_M(t_k) P h.
double gamma_split(const TimeGrid& grid, std::size_t k, const ModuliSpec& m);

/// Parameterized scheme, every exact solution is tracked by a scheme trajectory:
///   sum_k exp(sum_{j>=k} a_j + sum_{j>k} L_M(t_j) h_j) h_k Gamma(h_k, t_k),
/// a_j = l_f(t_{j+1}) h_j / (1 - l_f(t_{j+1}) h_j).
double apriori_parameterized(std::size_t n, const TimeGrid& grid, const ModuliSpec& m);

/// Every scheme trajectory is tracked by an exact solution (both schemes):
///   int_0^{t_n} exp(int_t^{t_n} (l_f + L_M)) Gamma(|h|_inf, t) dt,
/// in closed form for constant coefficients, otherwise by the trapezoid rule
/// with at least `subintervals` panels.
double apriori_filippov_continuous(std::size_t n, const TimeGrid& grid, const ModuliSpec& m, int subintervals = 256);

/// Split scheme, exact solutions tracked by scheme trajectories:
///   sum_k prod_{j>k} (1 / (1 - l_f(t_{j+1}) h_j) + L_M(t_j) h_j) h_k Gamma_split_k.
double apriori_split(std::size_t n, const TimeGrid& grid, const ModuliSpec& m);

/// Hausdorff-distance temporal bound: max of the two one-sided bounds.
double apriori_temporal(Scheme scheme, std::size_t n, const TimeGrid& grid, const ModuliSpec& m);

/// Distance between time-discrete and fully discrete parameterized trajectories:
///   r rho_0 prod_k q_k + r sum_k (prod_{j>k} q_j)(rho_{k+1} + eps_k h_k / (1 - l_f h_k)),
/// q_k = (1 + L_M(t_k) h_k) / (1 - l_f(t_{k+1}) h_k), r = sqrt(d)/2.
double apriori_spatial_parameterized(std::size_t n, const TimeGrid& grid, const DiscretizationSchedule& sched,
                                     const ModuliSpec& m, int dim);

/// Same for the split scheme:
///   r sum_{k=0}^{n} prod_{j=k}^{n-1} (1 / (1 - l_f h_j) + L_M h_j) rho_k.
/// With `image_sampling`, each step's rho_{k+1} counts twice because the
/// image z + hM is sampled at rho/h before projection, which adds up to
/// r rho_{k+1} of its own.
double apriori_spatial_split(std::size_t n, const TimeGrid& grid, const DiscretizationSchedule& sched,
                             const ModuliSpec& m, int dim, bool image_sampling = true);

double apriori_spatial(Scheme scheme, std::size_t n, const TimeGrid& grid, const DiscretizationSchedule& sched,
                       const ModuliSpec& m, int dim);

/// Closed forms for constant l_f, L_M, h. Gamma is the (constant) per-step consistency error.
namespace closed_form {
/// Geometric-series evaluation of apriori_parameterized.
double parameterized(std::size_t n, double h, double l_f, double L_M, double gamma_value);
/// (Gamma / (l_f + L_M)) (exp((l_f + L_M) t) - 1), limit Gamma t at l_f + L_M = 0.
double filippov_continuous(double t, double l_f, double L_M, double gamma_value);
/// Geometric-series evaluation of apriori_spatial_parameterized.
double spatial_parameterized(std::size_t n, double h, double rho, double eps, double l_f, double L_M, int dim);
/// Exponential form: prod q_k replaced by exp((l_f/(1 - l_f h) + L_M) t_n).
double spatial_parameterized_exp(std::size_t n, double h, double rho, double eps, double l_f, double L_M, int dim);
/// Geometric-series evaluation of apriori_spatial_split without image sampling.
double spatial_split(std::size_t n, double h, double rho, double l_f, double L_M, int dim);
/// Exponential form of apriori_spatial_split without image sampling,
/// with the (n + 1) factor from projecting the initial value. The exponential
/// forms bound the sums from above only when l_f / (1 - l_f h) + L_M >= 0.
double spatial_split_exp(std::size_t n, double h, double rho, double l_f, double L_M, int dim);
}  // namespace closed_form

struct DiscreteFilippov {
  std::vector<double> defects;  ///< g_0..g_{N-1}
  std::vector<double> bounds;   ///< per node 0..N
};

/// Defects g_n = dist((x_{n+1} - x_n) / h_n, f(t_{n+1}, x_{n+1}) + M(t_n, x_n))
/// of an arbitrary sequence and the resulting distance bound to a
/// parameterized-scheme trajectory starting `initial_offset` away.
DiscreteFilippov filippov_discrete_bound(const std::vector<Vec>& xs, const TimeGrid& grid, const Problem& problem,
                                         const ModuliSpec& m, double initial_offset = 0.0);

/// Trajectory bound C: 1.5 times the largest norm reached by a pilot split
/// run with the given grid and rho = h^2. Not a rigorous bound.
double estimate_trajectory_bound(const Problem& problem, const InitialState& x0, const TimeGrid& grid);

/// Moduli for `problem` with C from estimate_trajectory_bound, flagged non-rigorous.
ModuliSpec estimated_moduli(const Problem& problem, const InitialState& x0, const TimeGrid& grid);

}  // namespace odi
