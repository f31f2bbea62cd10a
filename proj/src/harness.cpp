#include "odi/harness.hpp"

#include "odi/io.hpp"
#include "odi/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

namespace odi {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("invalid number '" + text + "' for " + what);
  }
  return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const std::string& item : split(s, ',')) out.push_back(parse_double(item, what));
  if (out.empty()) throw Error("empty list for " + what);
  return out;
}

std::optional<double> parse_rule(const std::string& text, const std::string& symbol, const std::string& what) {
  if (text == symbol) return std::nullopt;
  if (text.rfind("const:", 0) == 0) {
    const double v = parse_double(text.substr(6), what);
    if (!(v > 0.0)) throw Error(what + " constant must be positive");
    return v;
  }
  throw Error("invalid " + what + " '" + text + "' (expected " + symbol + " or const:<v>)");
}

Mat parse_matrix(const std::string& text, int dim, const std::string& what) {
  const std::vector<double> entries = parse_list(text, what);
  if (entries.size() != static_cast<std::size_t>(dim * dim)) {
    throw Error(what + " needs " + std::to_string(dim * dim) + " entries");
  }
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = entries[static_cast<std::size_t>(i * dim + j)];
  }
  return m;
}

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

ConvexSet parse_control_set(const std::string& text, int dim) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error("affine.U must be box:<lo>;<hi> or ball:<center>;<radius>");
  const std::string kind = text.substr(0, colon);
  const std::vector<std::string> parts = split(text.substr(colon + 1), ';');
  if (parts.size() != 2) throw Error("affine.U needs two ';'-separated parts");
  const Vec first = to_vec(parse_list(parts[0], "affine.U"));
  if (first.size() != dim) throw Error("affine.U dimension does not match affine.dim");
  if (kind == "box") return ConvexSet::box(first, to_vec(parse_list(parts[1], "affine.U")));
  if (kind == "ball") return ConvexSet::ball(first, parse_double(parts[1], "affine.U"));
  throw Error("unknown control set kind '" + kind + "'");
}

std::string get(const ConfigMap& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) throw Error("missing config key '" + key + "'");
  return it->second;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double max_norm(const PointCloud& cloud) {
  double m = 0.0;
  for (const Vec& p : cloud) m = std::max(m, p.norm());
  return m;
}

// Nodes of `grid` with every step split into `factor` equal substeps.
TimeGrid refine(const TimeGrid& grid, std::size_t factor) {
  std::vector<double> nodes{0.0};
  for (std::size_t n = 0; n < grid.steps(); ++n) {
    for (std::size_t k = 1; k <= factor; ++k) {
      nodes.push_back(k == factor ? grid.node(n + 1)
                                  : grid.node(n) + grid.step(n) * static_cast<double>(k) / static_cast<double>(factor));
    }
  }
  return TimeGrid(std::move(nodes));
}

ErrorRow convergence_row(const RunConfig& cfg, const Problem& problem, Scheme scheme, double h) {
  ErrorRow row;
  row.scheme = scheme;
  row.h = h;
  row.rho = cfg.rho_rule.at(h);
  row.eps = cfg.eps_rule.at(h);
  const Vec x0 = cfg.initial_state();
  const TimeGrid grid = TimeGrid::uniform(cfg.horizon, h);
  const DiscretizationSchedule sched = cfg.schedule(grid);
  const StepOptions opts = cfg.step_options();

  const auto start = std::chrono::steady_clock::now();
  const ReachTube tube = reach(problem, x0, grid, sched, scheme, opts);
  row.wall_seconds = seconds_since(start);

  std::vector<PointCloud> reference(grid.steps() + 1);
  if (problem.exact_reach) {
    row.reference = "exact";
    for (std::size_t n = 0; n <= grid.steps(); ++n) {
      reference[n] = sample_convex(problem.exact_reach(grid.node(n), x0), 0.5 * sched.rho[n]);
    }
  } else {
    row.reference = "self-convergence";
    constexpr std::size_t factor = 8;
    const TimeGrid fine = refine(grid, factor);
    const double hf = h / static_cast<double>(factor);
    const DiscretizationSchedule fine_sched =
        DiscretizationSchedule::constant(fine, hf * hf, cfg.eps_rule.constant ? *cfg.eps_rule.constant : hf);
    const ReachTube ref = reach(problem, x0, fine, fine_sched, scheme, opts);
    for (std::size_t n = 0; n <= grid.steps(); ++n) reference[n] = ref.sets[n * factor].points();
  }

  double largest = x0.norm();
  for (std::size_t n = 0; n <= grid.steps(); ++n) {
    largest = std::max({largest, max_norm(tube.sets[n].points()), max_norm(reference[n])});
  }
  ModuliSpec moduli = problem.moduli_at(1.5 * std::max(largest, 1e-12));
  moduli.rigorous = false;
  row.rigorous_moduli = moduli.rigorous;

  const bool has_bounds = scheme != Scheme::explicit_euler;
  const double r = 0.5 * std::sqrt(static_cast<double>(problem.dim));
  for (std::size_t n = 0; n <= grid.steps(); ++n) {
    const double err = dist_hausdorff(tube.sets[n].points(), reference[n]);
    row.times.push_back(grid.node(n));
    row.node_errors.push_back(err);
    row.error = std::max(row.error, err);
    double bound = std::numeric_limits<double>::quiet_NaN();
    if (has_bounds) {
      const double temporal = apriori_temporal(scheme, n, grid, moduli);
      const double spatial = apriori_spatial(scheme, n, grid, sched, moduli, problem.dim);
      row.bound_temporal = std::max(row.bound_temporal, temporal);
      row.bound_spatial = std::max(row.bound_spatial, spatial);
      bound = temporal + spatial + r * sched.rho[n];
      if (err > bound) ++row.violations;
    }
    row.node_bounds.push_back(bound);
  }
  for (const StepCounters& c : tube.counters) {
    row.solver_calls += c.solver_calls;
    row.image_points += c.image_points;
  }
  row.counters = tube.counters;
  row.final_cells = tube.sets.back().size();
  row.ok = true;
  return row;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  return os;
}

}  // namespace

RhoRule RhoRule::parse(const std::string& text) { return RhoRule{parse_rule(text, "h2", "rho rule")}; }

EpsRule EpsRule::parse(const std::string& text) { return EpsRule{parse_rule(text, "h", "eps rule")}; }

ConfigMap parse_config(std::istream& is) {
  ConfigMap out;
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(number) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error("config line " + std::to_string(number) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

void RunConfig::apply(const ConfigMap& values) {
  for (const auto& [key, value] : values) {
    if (key == "problem") {
      problem = value;
    } else if (key == "lambda") {
      lambda = parse_double(value, key);
    } else if (key == "radius") {
      radius = parse_double(value, key);
    } else if (key == "scheme") {
      schemes.clear();
      for (const std::string& s : split(value, ',')) schemes.push_back(scheme_from_string(s));
    } else if (key == "x0") {
      x0 = parse_list(value, key);
    } else if (key == "T") {
      horizon = parse_double(value, key);
    } else if (key == "h") {
      steps = parse_list(value, key);
    } else if (key == "rho-rule") {
      rho_rule = RhoRule::parse(value);
    } else if (key == "eps-rule") {
      eps_rule = EpsRule::parse(value);
    } else if (key == "out") {
      out_dir = value;
    } else if (key == "seed") {
      seed = static_cast<unsigned>(parse_double(value, key));
    } else if (key == "threads") {
      threads = static_cast<int>(parse_double(value, key));
    } else if (key == "execution") {
      if (value == "serial") {
        execution = Execution::serial;
      } else if (value == "parallel") {
        execution = Execution::parallel;
      } else {
        throw Error("execution must be serial or parallel");
      }
    } else if (key == "abs-tol") {
      solver.abs_tol = parse_double(value, key);
    } else if (key == "max-newton-iters") {
      solver.max_newton_iters = static_cast<int>(parse_double(value, key));
    } else if (key == "attractor-max-steps") {
      attractor_max_steps = static_cast<std::size_t>(parse_double(value, key));
    } else if (key == "attractor-stable-steps") {
      attractor_stable_steps = static_cast<std::size_t>(parse_double(value, key));
    } else if (key.rfind("affine.", 0) == 0) {
      affine[key] = value;
    } else {
      throw Error("unknown config key '" + key + "'");
    }
  }
}

Problem RunConfig::make_problem() const {
  if (problem != "affine") return problem_by_name(problem, lambda, radius);
  const int dim = static_cast<int>(parse_double(get(affine, "affine.dim"), "affine.dim"));
  if (dim < 1 || dim > kMaxDim) throw Error("affine.dim out of range");
  const Mat f = parse_matrix(get(affine, "affine.F"), dim, "affine.F");
  const Mat a = affine.count("affine.A") ? parse_matrix(get(affine, "affine.A"), dim, "affine.A")
                                         : Mat(Mat::Identity(dim, dim));
  const double la = affine.count("affine.LA") ? parse_double(get(affine, "affine.LA"), "affine.LA") : 0.0;
  if (la != 0.0) throw Error("affine.LA must be 0 for constant control matrices");
  return affine_control("affine", dim, linear_drift(f), [a](double, const Vec&) { return a; }, la,
                        parse_control_set(get(affine, "affine.U"), dim));
}

Vec RunConfig::initial_state() const { return to_vec(x0); }

DiscretizationSchedule RunConfig::schedule(const TimeGrid& grid) const {
  // Grids built by TimeGrid::uniform share one nominal step; differences of
  // nodes would perturb rho in the last bits from node to node.
  const double h = grid.steps() == 0 ? steps.front() : grid.node(grid.steps()) / static_cast<double>(grid.steps());
  DiscretizationSchedule s;
  s.rho.assign(grid.steps() + 1, rho_rule.at(h));
  s.eps.assign(grid.steps(), eps_rule.at(h));
  s.validate(grid);
  return s;
}

StepOptions RunConfig::step_options() const {
  StepOptions o;
  o.solver = solver;
  o.execution = execution;
  return o;
}

void RunConfig::validate() const {
  if (steps.empty()) throw Error("no step sizes given");
  if (!(horizon >= 0.0)) throw Error("T must be nonnegative");
  const Problem p = make_problem();
  if (static_cast<int>(x0.size()) != p.dim) {
    throw Error("x0 has " + std::to_string(x0.size()) + " entries, problem dimension is " + std::to_string(p.dim));
  }
  for (double h : steps) {
    if (!(h > 0.0)) throw Error("step sizes must be positive");
    const bool implicit = std::any_of(schemes.begin(), schemes.end(), [](Scheme s) { return s != Scheme::explicit_euler; });
    if (implicit) TimeGrid::uniform(horizon, h).check_step_condition(p);
  }
}

double ErrorReport::slope(Scheme scheme) const {
  std::vector<std::pair<double, double>> pts;
  for (const ErrorRow& r : rows) {
    if (r.scheme == scheme && r.ok && r.error > 0.0) pts.emplace_back(std::log(r.h), std::log(r.error));
  }
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

ErrorReport run_convergence(const RunConfig& cfg) {
  cfg.validate();
  const Problem problem = cfg.make_problem();
  ErrorReport report;
  for (Scheme scheme : cfg.schemes) {
    for (double h : cfg.steps) {
      try {
        report.rows.push_back(convergence_row(cfg, problem, scheme, h));
      } catch (const Error& e) {
        std::cerr << "convergence: " << to_string(scheme) << " h=" << format_double(h) << " failed: " << e.what()
                  << '\n';
        ErrorRow row;
        row.scheme = scheme;
        row.h = h;
        row.rho = cfg.rho_rule.at(h);
        row.eps = cfg.eps_rule.at(h);
        row.failure = e.what();
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

void write_report_csv(std::ostream& os, const ErrorReport& report) {
  os << "scheme,h,rho,eps,status,reference,error,bound_temporal,bound_spatial,bound_total,violations,"
        "rigorous_moduli,solver_calls,image_points,final_cells\n";
  for (const ErrorRow& r : report.rows) {
    double total = 0.0;
    for (double b : r.node_bounds) total = std::max(total, b);
    os << to_string(r.scheme) << ',' << format_double(r.h) << ',' << format_double(r.rho) << ','
       << format_double(r.eps) << ',' << (r.ok ? "ok" : "failed") << ',' << r.reference << ','
       << format_double(r.error) << ',' << format_double(r.bound_temporal) << ',' << format_double(r.bound_spatial)
       << ',' << format_double(total) << ',' << r.violations << ',' << (r.rigorous_moduli ? 1 : 0) << ','
       << r.solver_calls << ',' << r.image_points << ',' << r.final_cells << '\n';
  }
}

void write_nodes_csv(std::ostream& os, const ErrorReport& report) {
  os << "scheme,h,n,t,error,bound\n";
  for (const ErrorRow& r : report.rows) {
    for (std::size_t n = 0; n < r.times.size(); ++n) {
      os << to_string(r.scheme) << ',' << format_double(r.h) << ',' << n << ',' << format_double(r.times[n]) << ','
         << format_double(r.node_errors[n]) << ',' << format_double(r.node_bounds[n]) << '\n';
    }
  }
}

void write_timings_csv(std::ostream& os, const ErrorReport& report) {
  os << "scheme,h,solver_calls,wall_seconds\n";
  for (const ErrorRow& r : report.rows) {
    os << to_string(r.scheme) << ',' << format_double(r.h) << ',' << r.solver_calls << ','
       << format_double(r.wall_seconds) << '\n';
  }
}

void save_convergence(const RunConfig& cfg, const ErrorReport& report) {
  std::filesystem::create_directories(cfg.out_dir);
  auto report_os = open_output(cfg.out_dir / "report.csv");
  write_report_csv(report_os, report);
  auto nodes_os = open_output(cfg.out_dir / "nodes.csv");
  write_nodes_csv(nodes_os, report);
  auto timing_os = open_output(cfg.out_dir / "timings.csv");
  write_timings_csv(timing_os, report);
}

std::vector<AttractorReport> run_attractor(const RunConfig& cfg) {
  cfg.validate();
  const Problem problem = cfg.make_problem();
  if (problem.dim != 1) throw Error("attractor study requires a one-dimensional problem");
  const Vec x0 = cfg.initial_state();
  const StepOptions opts = cfg.step_options();
  std::vector<AttractorReport> out;
  for (Scheme scheme : cfg.schemes) {
    for (double h : cfg.steps) {
      AttractorReport rep;
      rep.scheme = scheme;
      rep.h = h;
      rep.rho = cfg.rho_rule.at(h);
      rep.eps = cfg.eps_rule.at(h);
      LatticeSet state = project_set({x0}, GridSpec(rep.rho, x0));
      std::tie(rep.min_lower, rep.max_upper) = interval_hull(state);
      std::size_t stable = 0;
      double t = 0.0;
      while (rep.steps < cfg.attractor_max_steps) {
        LatticeSet next = reach_step(problem, state, t, h, rep.rho, rep.eps, scheme, opts);
        t += h;
        ++rep.steps;
        const double change = dist_hausdorff(state.points(), next.points());
        state = std::move(next);
        const auto [lo, hi] = interval_hull(state);
        rep.min_lower = std::min(rep.min_lower, lo);
        rep.max_upper = std::max(rep.max_upper, hi);
        stable = change < 0.5 * rep.rho ? stable + 1 : 0;
        if (stable >= cfg.attractor_stable_steps) {
          rep.converged = true;
          break;
        }
      }
      std::tie(rep.lower, rep.upper) = interval_hull(state);
      if (!rep.converged) {
        std::cerr << "attractor: " << to_string(scheme) << " h=" << format_double(h) << " not converged after "
                  << rep.steps << " steps\n";
      }
      out.push_back(rep);
    }
  }
  return out;
}

void write_attractor_csv(std::ostream& os, const std::vector<AttractorReport>& reports) {
  os << "scheme,h,rho,eps,lower,upper,steps,converged,min_lower,max_upper\n";
  for (const AttractorReport& r : reports) {
    os << to_string(r.scheme) << ',' << format_double(r.h) << ',' << format_double(r.rho) << ','
       << format_double(r.eps) << ',' << format_double(r.lower) << ',' << format_double(r.upper) << ',' << r.steps
       << ',' << (r.converged ? 1 : 0) << ',' << format_double(r.min_lower) << ',' << format_double(r.max_upper)
       << '\n';
  }
}

ReachTube run_reach(const RunConfig& cfg) {
  cfg.validate();
  const Problem problem = cfg.make_problem();
  const TimeGrid grid = TimeGrid::uniform(cfg.horizon, cfg.steps.front());
  return reach(problem, cfg.initial_state(), grid, cfg.schedule(grid), cfg.schemes.front(), cfg.step_options());
}

void save_tube(const std::filesystem::path& dir, const ReachTube& tube) {
  std::filesystem::create_directories(dir);
  for (std::size_t n = 0; n < tube.sets.size(); ++n) {
    auto os = open_output(dir / ("tube_" + std::to_string(n) + ".csv"));
    write_lattice_csv(os, tube.sets[n]);
  }
  auto os = open_output(dir / "manifest.txt");
  os << "scheme " << to_string(tube.scheme) << '\n';
  os << "nodes " << tube.sets.size() << '\n';
  os << "n t rho cells source_cells solver_calls newton_iters damped_iters image_points wall_seconds\n";
  for (std::size_t n = 0; n < tube.sets.size(); ++n) {
    const StepCounters& c = tube.counters[n];
    os << n << ' ' << format_double(tube.times[n]) << ' ' << format_double(tube.sets[n].spec().rho) << ' '
       << tube.sets[n].size() << ' ' << c.source_cells << ' ' << c.solver_calls << ' ' << c.newton_iters << ' '
       << c.damped_iters << ' ' << c.image_points << ' ' << format_double(c.wall_seconds) << '\n';
  }
}

CostCalibration calibrate(const Problem& problem, double h, unsigned seed) {
  constexpr int ops = 10000;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  auto random_vec = [&]() {
    Vec v(problem.dim);
    for (int i = 0; i < problem.dim; ++i) v[i] = coord(rng);
    return v;
  };
  std::vector<Vec> points;
  for (int i = 0; i < ops; ++i) points.push_back(random_vec());

  const double rho = h * h;
  const GridSpec spec(rho, Vec::Zero(problem.dim));
  CostCalibration c;
  const LatticeSet lattice = project_set(points, spec);
  std::vector<std::vector<std::int64_t>> queries;
  for (const Vec& p : points) queries.push_back(project_point(p + random_vec() * rho, spec));

  auto start = std::chrono::steady_clock::now();
  std::size_t hits = 0;
  for (const auto& q : queries) hits += lattice.contains(q) ? 1 : 0;
  c.scan = seconds_since(start) / ops;

  SolveConfig cfg;
  cfg.abs_tol = default_abs_tol(rho);
  const std::optional<double> osl = problem.l_f ? std::optional<double>(problem.l_f(h)) : std::nullopt;
  const Vec m = Vec::Zero(problem.dim);
  double sink = 0.0;
  start = std::chrono::steady_clock::now();
  for (const Vec& p : points) sink += solve_implicit(0.0, p, h, m, problem.f, problem.jac_f, cfg, osl).z[0];
  c.newton = seconds_since(start) / ops;

  LatticeBuilder builder(spec);
  start = std::chrono::steady_clock::now();
  for (const Vec& p : points) builder.add_projection(p + h * m);
  c.eval = seconds_since(start) / ops;
  sink += static_cast<double>(std::move(builder).finish().size() + hits);
  if (sink == std::numeric_limits<double>::infinity()) std::cerr << sink;
  return c;
}

CostPrediction cost_model_estimate(const CostCalibration& c, std::size_t state_size, double image_samples,
                                   std::size_t domain_cells) {
  CostPrediction p;
  const double n = static_cast<double>(state_size);
  p.scan = c.scan * static_cast<double>(domain_cells);
  p.time_par = p.scan + (c.newton + c.eval) * n * image_samples;
  p.time_split = p.scan + (c.newton + c.eval * image_samples) * n;
  return p;
}

std::vector<CostRow> run_cost(const RunConfig& cfg) {
  cfg.validate();
  const Problem problem = cfg.make_problem();
  const Vec x0 = cfg.initial_state();
  StepOptions opts = cfg.step_options();
  opts.execution = Execution::serial;
  std::vector<CostRow> rows;
  for (double h : cfg.steps) {
    const TimeGrid grid = TimeGrid::uniform(cfg.horizon, h);
    const DiscretizationSchedule sched = cfg.schedule(grid);
    const ReachTube tube = reach(problem, x0, grid, sched, Scheme::split, opts);
    const LatticeSet& state = tube.sets.back();
    const double t = grid.node(grid.steps());
    const double rho = sched.rho.back();
    const double eps = cfg.eps_rule.at(h);

    CostRow row;
    row.h = h;
    row.state_size = state.size();
    row.image_samples = static_cast<double>(sample_convex(problem.velocity_set(t, state.point(0)), eps).size());
    row.predicted = cost_model_estimate(calibrate(problem, h, cfg.seed), row.state_size, row.image_samples,
                                        row.state_size);
    auto best_time = [&](Scheme scheme) {
      double best = std::numeric_limits<double>::infinity();
      for (int rep = 0; rep < 3; ++rep) {
        StepCounters c;
        reach_step(problem, state, t, h, rho, eps, scheme, opts, &c);
        best = std::min(best, c.wall_seconds);
      }
      return best;
    };
    row.measured_par = best_time(Scheme::parameterized);
    row.measured_split = best_time(Scheme::split);
    rows.push_back(row);
  }
  return rows;
}

void write_cost_csv(std::ostream& os, const std::vector<CostRow>& rows) {
  os << "h,state_size,image_samples,predicted_par,predicted_split,predicted_ratio,measured_par,measured_split,"
        "measured_ratio\n";
  for (const CostRow& r : rows) {
    os << format_double(r.h) << ',' << r.state_size << ',' << format_double(r.image_samples) << ','
       << format_double(r.predicted.time_par) << ',' << format_double(r.predicted.time_split) << ','
       << format_double(r.predicted.ratio()) << ',' << format_double(r.measured_par) << ','
       << format_double(r.measured_split) << ',' << format_double(r.measured_par / r.measured_split) << '\n';
  }
}

}  // namespace odi
