#pragma once

#include "odi/core_sets.hpp"
#include "odi/problem.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace odi {

enum class Scheme { explicit_euler, parameterized, split };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// Serial runs the reference loop; parallel distributes the per-cell step
/// maps over OpenMP threads. Both produce identical lattice sets and counters.
enum class Execution { serial, parallel };

/// Nodes 0 = t_0 < t_1 < ... < t_N = T.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> nodes);
  /// N = ceil(T / h) steps of width T / N.
  static TimeGrid uniform(double horizon, double h);

  std::size_t steps() const { return nodes_.size() - 1; }
  double node(std::size_t n) const { return nodes_[n]; }
  double step(std::size_t n) const { return nodes_[n + 1] - nodes_[n]; }
  double max_step() const;
  const std::vector<double>& nodes() const { return nodes_; }

  /// l_f(t_{n+1}) h_n < 1 for every step.
  bool satisfies_step_condition(const Problem& p) const;
  /// Throws StepSizeViolation naming the first offending step.
  void check_step_condition(const Problem& p) const;

 private:
  std::vector<double> nodes_;
};

/// Grid widths rho_0..rho_N and velocity-sampling widths eps_0..eps_{N-1}.
struct DiscretizationSchedule {
  std::vector<double> rho;
  std::vector<double> eps;

  /// rho = h^2 and eps = h, per node and step.
  static DiscretizationSchedule quadratic(const TimeGrid& grid);
  static DiscretizationSchedule constant(const TimeGrid& grid, double rho, double eps);
  void validate(const TimeGrid& grid) const;
};

struct StepCounters {
  std::size_t source_cells = 0;
  std::size_t solver_calls = 0;
  std::size_t newton_iters = 0;
  std::size_t damped_iters = 0;
  std::size_t image_points = 0;
  double max_residual = 0.0;
  double wall_seconds = 0.0;

  StepCounters& operator+=(const StepCounters& o);
};

struct ReachTube {
  Scheme scheme = Scheme::split;
  std::vector<double> times;
  std::vector<LatticeSet> sets;
  /// counters[n] describes the step producing sets[n]; counters[0] is empty.
  std::vector<StepCounters> counters;
};

struct StepOptions {
  /// abs_tol = 0 selects default_abs_tol(rho) of the target grid.
  SolveConfig solver{0.0};
  Execution execution = Execution::parallel;
};

using InitialState = std::variant<Vec, ConvexSet>;

/// P_rho({z : z in x + h f(t+h, z) + h P_eps(M(t, x))}); one implicit solve per velocity sample.
LatticeSet step_parameterized(double t, const Vec& x, double h, const GridSpec& target, double eps,
                              const Problem& problem, const StepOptions& opts = {}, StepCounters* counters = nullptr);

/// P_rho(z + h M(t, x)) with z = x + h f(t+h, z); one implicit solve. M is
/// sampled at eps_image = rho / h so the sampling error matches the projection error.
LatticeSet step_split(double t, const Vec& x, double h, const GridSpec& target, const Problem& problem,
                      const StepOptions& opts = {}, StepCounters* counters = nullptr);

/// P_rho(x + h f(t, x) + h P_eps(M(t, x))).
LatticeSet step_explicit(double t, const Vec& x, double h, const GridSpec& target, double eps, const Problem& problem,
                         StepCounters* counters = nullptr);

/// Velocity-sampling width of the split scheme's image set.
double split_image_eps(double rho, double h);

/// One step of the reachable-set iteration: the union of the step map over
/// every cell of `state`, projected onto the lattice of width rho_next that
/// shares the state's center.
LatticeSet reach_step(const Problem& problem, const LatticeSet& state, double t, double h, double rho_next, double eps,
                      Scheme scheme, const StepOptions& opts = {}, StepCounters* counters = nullptr);

/// Iterates the chosen step map over every cell of the current node. The
/// lattice of every node is centered at x0 (or at the initial set's center).
ReachTube reach(const Problem& problem, const InitialState& x0, const TimeGrid& grid,
                const DiscretizationSchedule& sched, Scheme scheme, const StepOptions& opts = {});

/// Interval hull [min, max] of a one-dimensional lattice set.
std::pair<double, double> interval_hull(const LatticeSet& set);

}  // namespace odi
