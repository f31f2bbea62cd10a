#pragma once

#include "odi/bounds.hpp"
#include "odi/problem.hpp"
#include "odi/schemes.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace odi {

/// `h2` (rho = h^2) or `const:<v>`.
struct RhoRule {
  std::optional<double> constant;
  static RhoRule parse(const std::string& text);
  double at(double h) const { return constant ? *constant : h * h; }
};

/// `h` (eps = h) or `const:<v>`.
struct EpsRule {
  std::optional<double> constant;
  static EpsRule parse(const std::string& text);
  double at(double h) const { return constant ? *constant : h; }
};

/// Flat key=value settings. Keys mirror the CLI flags; `h` may hold a
/// comma-separated list. Affine problems read `affine.dim`, `affine.F`
/// (row-major entries), `affine.A`, `affine.U` (`box:lo1,..;hi1,..` or
/// `ball:c1,..;r`) and `affine.LA`.
using ConfigMap = std::map<std::string, std::string>;
ConfigMap parse_config(std::istream& is);

struct RunConfig {
  std::string problem = "dahlquist";
  double lambda = -50.0;
  double radius = 1.0;
  ConfigMap affine;
  std::vector<Scheme> schemes{Scheme::split};
  std::vector<double> x0{5.0};
  double horizon = 5.0;
  std::vector<double> steps{0.5};
  RhoRule rho_rule;
  EpsRule eps_rule;
  std::filesystem::path out_dir = "out";
  SolveConfig solver{0.0};
  unsigned seed = 1;
  int threads = 0;
  Execution execution = Execution::serial;
  std::size_t attractor_max_steps = 20000;
  std::size_t attractor_stable_steps = 10;

  /// Applies the entries of a parsed config file.
  void apply(const ConfigMap& values);
  /// Throws unless every step is positive and satisfies the step-size condition.
  void validate() const;
  Problem make_problem() const;
  Vec initial_state() const;
  DiscretizationSchedule schedule(const TimeGrid& grid) const;
  StepOptions step_options() const;
};

struct ErrorRow {
  Scheme scheme = Scheme::split;
  double h = 0.0;
  double rho = 0.0;
  double eps = 0.0;
  bool ok = false;
  std::string failure;
  /// "exact" or "self-convergence".
  std::string reference;
  double error = 0.0;  ///< max over nodes of dist_H to the reference
  double bound_temporal = 0.0;
  double bound_spatial = 0.0;
  /// Nodes where error > temporal + spatial + sqrt(d)/2 rho.
  std::size_t violations = 0;
  bool rigorous_moduli = false;
  std::size_t solver_calls = 0;
  std::size_t image_points = 0;
  std::size_t final_cells = 0;
  double wall_seconds = 0.0;
  std::vector<double> times;
  std::vector<double> node_errors;
  std::vector<double> node_bounds;
  std::vector<StepCounters> counters;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;
  /// Least-squares slope of log(error) against log(h) over the successful
  /// rows of one scheme; NaN with fewer than two rows.
  double slope(Scheme scheme) const;
};

ErrorReport run_convergence(const RunConfig& cfg);

/// Deterministic: no timing columns.
void write_report_csv(std::ostream& os, const ErrorReport& report);
/// scheme,h,n,t,error,bound
void write_nodes_csv(std::ostream& os, const ErrorReport& report);
/// scheme,h,wall_seconds,step wall seconds...
void write_timings_csv(std::ostream& os, const ErrorReport& report);

/// Writes report.csv, nodes.csv and timings.csv into cfg.out_dir.
void save_convergence(const RunConfig& cfg, const ErrorReport& report);

struct AttractorReport {
  Scheme scheme = Scheme::split;
  double h = 0.0;
  double rho = 0.0;
  double eps = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t steps = 0;
  bool converged = false;
  /// Widest excursion of the hull over the whole run.
  double min_lower = 0.0;
  double max_upper = 0.0;
};

/// Long-run iteration with constant h = cfg.steps[k] and constant rho, eps.
std::vector<AttractorReport> run_attractor(const RunConfig& cfg);
void write_attractor_csv(std::ostream& os, const std::vector<AttractorReport>& reports);

/// Single reach run with h = cfg.steps.front() and the first scheme.
ReachTube run_reach(const RunConfig& cfg);
/// tube_<n>.csv per node and manifest.txt.
void save_tube(const std::filesystem::path& dir, const ReachTube& tube);

/// Per-operation costs from micro-runs of 10^4 operations each.
struct CostCalibration {
  double scan = 0.0;    ///< one lattice membership check
  double newton = 0.0;  ///< one implicit solve
  double eval = 0.0;    ///< one image point: evaluation plus projection
};

CostCalibration calibrate(const Problem& problem, double h, unsigned seed);

struct CostPrediction {
  double scan = 0.0;
  double time_par = 0.0;
  double time_split = 0.0;
  double ratio() const { return time_par / time_split; }
};

/// time_par = C_scan D + (C_Newton + C_eval) |state| V / h^d,
/// time_split = C_scan D + (C_Newton + C_eval V / h^d) |state|,
/// where V = image_vol, D = domain_cells and V / h^d counts velocity samples.
CostPrediction cost_model_estimate(const CostCalibration& c, std::size_t state_size, double image_samples,
                                   std::size_t domain_cells);

struct CostRow {
  double h = 0.0;
  std::size_t state_size = 0;
  double image_samples = 0.0;
  CostPrediction predicted;
  double measured_par = 0.0;
  double measured_split = 0.0;
};

/// For each h: runs the split scheme to T, then times one more step of each
/// scheme from the final state and compares with the prediction.
std::vector<CostRow> run_cost(const RunConfig& cfg);
void write_cost_csv(std::ostream& os, const std::vector<CostRow>& rows);

}  // namespace odi
