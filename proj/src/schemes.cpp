#include "odi/schemes.hpp"

#include "odi/convex_set.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>

namespace odi {

namespace {

std::string describe(const Vec& v) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

struct StepContext {
  const Problem& problem;
  Scheme scheme;
  double t;
  double h;
  double eps;
  SolveConfig solver;
  std::optional<double> osl;
  /// Velocity samples shared by every source cell when M does not depend on x.
  const PointCloud* shared_samples;
};

SolveResult annotated_solve(const StepContext& ctx, const Vec& x, const Vec& m) {
  try {
    return solve_implicit(ctx.t, x, ctx.h, m, ctx.problem.f, ctx.problem.jac_f, ctx.solver, ctx.osl);
  } catch (const NoConvergence& e) {
    throw NoConvergence(std::string(e.what()) + " at t=" + std::to_string(ctx.t) + " x=" + describe(x) +
                        " m=" + describe(m));
  }
}

void record(StepCounters& c, const SolveStats& s) {
  ++c.solver_calls;
  c.newton_iters += static_cast<std::size_t>(s.newton_iters);
  c.damped_iters += static_cast<std::size_t>(s.damped_iters);
  c.max_residual = std::max(c.max_residual, s.final_residual);
}

double sampling_eps(const StepContext& ctx, double rho) {
  return ctx.scheme == Scheme::split ? split_image_eps(rho, ctx.h) : ctx.eps;
}

// Appends the image of one source point to `out`.
void apply_step(const StepContext& ctx, const Vec& x, LatticeBuilder& out, StepCounters& c) {
  ++c.source_cells;
  PointCloud local;
  const PointCloud* samples = ctx.shared_samples;
  if (!samples) {
    local = sample_convex(ctx.problem.velocity_set(ctx.t, x), sampling_eps(ctx, out.spec().rho));
    samples = &local;
  }
  switch (ctx.scheme) {
    case Scheme::parameterized:
      for (const Vec& m : *samples) {
        const SolveResult r = annotated_solve(ctx, x, m);
        record(c, r.stats);
        out.add_projection(r.z);
        ++c.image_points;
      }
      break;
    case Scheme::split: {
      const SolveResult r = annotated_solve(ctx, x, Vec::Zero(x.size()));
      record(c, r.stats);
      if (ctx.h == 0.0) {
        out.add_projection(r.z);
        ++c.image_points;
        break;
      }
      for (const Vec& m : *samples) {
        out.add_projection(r.z + ctx.h * m);
        ++c.image_points;
      }
      break;
    }
    case Scheme::explicit_euler: {
      const Vec base = ctx.h == 0.0 ? x : Vec(x + ctx.h * ctx.problem.f(ctx.t, x));
      for (const Vec& m : *samples) {
        out.add_projection(base + ctx.h * m);
        ++c.image_points;
      }
      break;
    }
  }
}

StepContext make_context(const Problem& problem, Scheme scheme, double t, double h, double eps,
                         const GridSpec& target, const StepOptions& opts) {
  SolveConfig cfg = opts.solver;
  if (cfg.abs_tol == 0.0) cfg.abs_tol = default_abs_tol(target.rho);
  cfg.validate();
  std::optional<double> osl;
  if (problem.l_f) osl = problem.l_f(t + h);
  return StepContext{problem, scheme, t, h, eps, cfg, osl, nullptr};
}

LatticeSet single_step(const StepContext& ctx, const Vec& x, const GridSpec& target, StepCounters* counters) {
  if (x.size() != target.dim()) throw Error("point dimension does not match grid");
  LatticeBuilder builder(target);
  StepCounters c;
  apply_step(ctx, x, builder, c);
  if (counters) *counters += c;
  return std::move(builder).finish();
}

LatticeSet advance(const StepContext& ctx, const LatticeSet& state, const GridSpec& target, Execution execution,
                   StepCounters& total) {
  const auto n = static_cast<std::ptrdiff_t>(state.size());
  if (execution == Execution::serial) {
    LatticeBuilder builder(target);
    for (std::ptrdiff_t i = 0; i < n; ++i) apply_step(ctx, state.point(static_cast<std::size_t>(i)), builder, total);
    return std::move(builder).finish();
  }

  const int threads = std::max(1, omp_get_max_threads());
  std::vector<LatticeBuilder> builders(static_cast<std::size_t>(threads), LatticeBuilder(target));
  std::vector<StepCounters> counts(static_cast<std::size_t>(threads));
  std::exception_ptr error;
  std::atomic<bool> failed{false};
#pragma omp parallel num_threads(threads)
  {
    const auto tid = static_cast<std::size_t>(omp_get_thread_num());
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        apply_step(ctx, state.point(static_cast<std::size_t>(i)), builders[tid], counts[tid]);
      } catch (...) {
#pragma omp critical(odi_step_error)
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  }
  if (error) std::rethrow_exception(error);
  // Union of sorted sets: the result does not depend on merge order.
  for (std::size_t k = 1; k < builders.size(); ++k) builders[0].merge(std::move(builders[k]));
  for (const StepCounters& c : counts) total += c;
  return std::move(builders[0]).finish();
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::explicit_euler:
      return "explicit";
    case Scheme::parameterized:
      return "parameterized";
    case Scheme::split:
      return "split";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "explicit") return Scheme::explicit_euler;
  if (s == "parameterized") return Scheme::parameterized;
  if (s == "split") return Scheme::split;
  throw Error("unknown scheme '" + s + "' (expected explicit, parameterized or split)");
}

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty() || nodes_.front() != 0.0) throw Error("time grid must start at t_0 = 0");
  for (std::size_t n = 1; n < nodes_.size(); ++n) {
    if (!(nodes_[n] > nodes_[n - 1])) throw Error("time grid nodes must be strictly increasing");
  }
}

TimeGrid TimeGrid::uniform(double horizon, double h) {
  if (!(h > 0.0)) throw Error("step size must be positive");
  if (!(horizon >= 0.0)) throw Error("horizon must be nonnegative");
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / h - 1e-9));
  std::vector<double> nodes(steps + 1);
  for (std::size_t n = 0; n <= steps; ++n) {
    nodes[n] = steps == 0 ? 0.0 : horizon * static_cast<double>(n) / static_cast<double>(steps);
  }
  return TimeGrid(std::move(nodes));
}

double TimeGrid::max_step() const {
  double best = 0.0;
  for (std::size_t n = 0; n < steps(); ++n) best = std::max(best, step(n));
  return best;
}

bool TimeGrid::satisfies_step_condition(const Problem& p) const {
  for (std::size_t n = 0; n < steps(); ++n) {
    if (p.l_f(node(n + 1)) * step(n) >= 1.0) return false;
  }
  return true;
}

void TimeGrid::check_step_condition(const Problem& p) const {
  for (std::size_t n = 0; n < steps(); ++n) {
    const double lh = p.l_f(node(n + 1)) * step(n);
    if (lh >= 1.0) {
      throw StepSizeViolation("step " + std::to_string(n) + " violates l_f(t_{n+1}) h_n < 1 (value " +
                              std::to_string(lh) + ")");
    }
  }
}

DiscretizationSchedule DiscretizationSchedule::quadratic(const TimeGrid& grid) {
  DiscretizationSchedule s;
  const std::size_t n = grid.steps();
  if (n == 0) throw Error("the h^2 rule needs at least one step; use a constant schedule");
  s.rho.resize(n + 1);
  s.eps.resize(n);
  s.rho[0] = grid.step(0) * grid.step(0);
  for (std::size_t k = 0; k < n; ++k) {
    s.rho[k + 1] = grid.step(k) * grid.step(k);
    s.eps[k] = grid.step(k);
  }
  return s;
}

DiscretizationSchedule DiscretizationSchedule::constant(const TimeGrid& grid, double rho, double eps) {
  DiscretizationSchedule s;
  s.rho.assign(grid.steps() + 1, rho);
  s.eps.assign(grid.steps(), eps);
  return s;
}

void DiscretizationSchedule::validate(const TimeGrid& grid) const {
  if (rho.size() != grid.steps() + 1 || eps.size() != grid.steps()) {
    throw Error("schedule length does not match the time grid");
  }
  for (double r : rho) {
    if (!(r > 0.0)) throw Error("grid widths must be positive");
  }
  for (double e : eps) {
    if (!(e > 0.0)) throw Error("sampling widths must be positive");
  }
}

StepCounters& StepCounters::operator+=(const StepCounters& o) {
  source_cells += o.source_cells;
  solver_calls += o.solver_calls;
  newton_iters += o.newton_iters;
  damped_iters += o.damped_iters;
  image_points += o.image_points;
  max_residual = std::max(max_residual, o.max_residual);
  wall_seconds += o.wall_seconds;
  return *this;
}

double split_image_eps(double rho, double h) { return h > 0.0 ? rho / h : rho; }

LatticeSet step_parameterized(double t, const Vec& x, double h, const GridSpec& target, double eps,
                              const Problem& problem, const StepOptions& opts, StepCounters* counters) {
  return single_step(make_context(problem, Scheme::parameterized, t, h, eps, target, opts), x, target, counters);
}

LatticeSet step_split(double t, const Vec& x, double h, const GridSpec& target, const Problem& problem,
                      const StepOptions& opts, StepCounters* counters) {
  return single_step(make_context(problem, Scheme::split, t, h, 1.0, target, opts), x, target, counters);
}

LatticeSet step_explicit(double t, const Vec& x, double h, const GridSpec& target, double eps, const Problem& problem,
                         StepCounters* counters) {
  return single_step(make_context(problem, Scheme::explicit_euler, t, h, eps, target, {}), x, target, counters);
}

LatticeSet reach_step(const Problem& problem, const LatticeSet& state, double t, double h, double rho_next, double eps,
                      Scheme scheme, const StepOptions& opts, StepCounters* counters) {
  if (state.empty()) throw EmptySetError("empty set");
  const auto start = std::chrono::steady_clock::now();
  const GridSpec target(rho_next, state.spec().center);
  StepContext ctx = make_context(problem, scheme, t, h, eps, target, opts);
  PointCloud shared;
  if (problem.state_independent_velocity) {
    shared = sample_convex(problem.velocity_set(t, target.center), sampling_eps(ctx, target.rho));
    ctx.shared_samples = &shared;
  }
  StepCounters local;
  LatticeSet next = advance(ctx, state, target, opts.execution, local);
  local.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (counters) *counters += local;
  return next;
}

ReachTube reach(const Problem& problem, const InitialState& x0, const TimeGrid& grid,
                const DiscretizationSchedule& sched, Scheme scheme, const StepOptions& opts) {
  sched.validate(grid);
  if (scheme != Scheme::explicit_euler) grid.check_step_condition(problem);

  ReachTube tube;
  tube.scheme = scheme;
  Vec center;
  if (const Vec* p = std::get_if<Vec>(&x0)) {
    center = *p;
    tube.sets.push_back(project_set({*p}, GridSpec(sched.rho[0], center)));
  } else {
    const ConvexSet& s = std::get<ConvexSet>(x0);
    center = s.center();
    tube.sets.push_back(project_set(sample_convex(s, sched.rho[0]), GridSpec(sched.rho[0], center)));
  }
  if (center.size() != problem.dim) throw Error("initial state dimension does not match the problem");
  tube.times.push_back(grid.node(0));
  tube.counters.emplace_back();

  for (std::size_t n = 0; n < grid.steps(); ++n) {
    StepCounters counters;
    try {
      tube.sets.push_back(reach_step(problem, tube.sets.back(), grid.node(n), grid.step(n), sched.rho[n + 1],
                                     sched.eps[n], scheme, opts, &counters));
    } catch (const NoConvergence& e) {
      throw NoConvergence("node " + std::to_string(n) + ": " + e.what());
    }
    tube.times.push_back(grid.node(n + 1));
    tube.counters.push_back(counters);
  }
  return tube;
}

std::pair<double, double> interval_hull(const LatticeSet& set) {
  if (set.empty()) throw EmptySetError("empty set");
  if (set.dim() != 1) throw Error("interval hull needs a one-dimensional set");
  return {set.point(0)[0], set.point(set.size() - 1)[0]};
}

}  // namespace odi
