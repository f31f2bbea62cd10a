#include "odi/harness.hpp"
#include "odi/io.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <fstream>
#include <iostream>

namespace {

struct Flags {
  std::string config;
  std::string problem;
  std::string scheme;
  std::string x0;
  std::string horizon;
  std::vector<std::string> steps;
  std::string rho_rule;
  std::string eps_rule;
  std::string out;
  std::string seed;
  std::string threads;
  std::string execution;
};

void add_flags(CLI::App& app, Flags& f) {
  app.set_help_flag("--help", "print help");
  app.add_option("--config", f.config, "key=value config file; flags override it");
  app.add_option("--problem", f.problem, "dahlquist, nonconvex, stiff or affine");
  app.add_option("--scheme", f.scheme, "explicit, parameterized, split (comma-separated)");
  app.add_option("--x0", f.x0, "initial point, comma-separated");
  app.add_option("--T", f.horizon, "time horizon");
  app.add_option("--h", f.steps, "step size (repeatable)");
  app.add_option("--rho-rule", f.rho_rule, "h2 or const:<v>");
  app.add_option("--eps-rule", f.eps_rule, "h or const:<v>");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--threads", f.threads, "OpenMP threads (0 = default)");
  app.add_option("--execution", f.execution, "serial or parallel step evaluation");
}

odi::RunConfig build_config(const Flags& f) {
  odi::RunConfig cfg;
  if (!f.config.empty()) {
    std::ifstream is(f.config);
    if (!is) throw odi::Error("cannot read config file " + f.config);
    cfg.apply(odi::parse_config(is));
  }
  odi::ConfigMap overrides;
  auto set = [&](const char* key, const std::string& v) {
    if (!v.empty()) overrides[key] = v;
  };
  set("problem", f.problem);
  set("scheme", f.scheme);
  set("x0", f.x0);
  set("T", f.horizon);
  set("rho-rule", f.rho_rule);
  set("eps-rule", f.eps_rule);
  set("out", f.out);
  set("seed", f.seed);
  set("threads", f.threads);
  set("execution", f.execution);
  if (!f.steps.empty()) {
    std::string joined;
    for (const std::string& s : f.steps) joined += (joined.empty() ? "" : ",") + s;
    overrides["h"] = joined;
  }
  cfg.apply(overrides);
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  return cfg;
}

std::ofstream open(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw odi::Error("cannot write " + path.string());
  return os;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reachable sets of differential inclusions by semi-implicit Euler schemes"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  Flags flags;
  auto* convergence = app.add_subcommand("convergence", "error sweep over step sizes");
  auto* attractor = app.add_subcommand("attractor", "long-run hull of a one-dimensional problem");
  auto* reach = app.add_subcommand("reach", "single run dumped as a tube");
  auto* cost = app.add_subcommand("cost", "predicted vs measured per-step cost");
  for (auto* sub : {convergence, attractor, reach, cost}) add_flags(*sub, flags);
  CLI11_PARSE(app, argc, argv);

  try {
    const odi::RunConfig cfg = build_config(flags);
    if (convergence->parsed()) {
      const odi::ErrorReport report = odi::run_convergence(cfg);
      odi::save_convergence(cfg, report);
      for (odi::Scheme s : cfg.schemes) {
        std::cout << odi::to_string(s) << " slope " << odi::format_double(report.slope(s)) << '\n';
      }
      write_report_csv(std::cout, report);
    } else if (attractor->parsed()) {
      const auto reports = odi::run_attractor(cfg);
      auto os = open(cfg.out_dir / "report.csv");
      odi::write_attractor_csv(os, reports);
      odi::write_attractor_csv(std::cout, reports);
    } else if (reach->parsed()) {
      const odi::ReachTube tube = odi::run_reach(cfg);
      odi::save_tube(cfg.out_dir, tube);
      std::cout << "wrote " << tube.sets.size() << " nodes to " << cfg.out_dir.string() << '\n';
    } else if (cost->parsed()) {
      const auto rows = odi::run_cost(cfg);
      auto os = open(cfg.out_dir / "report.csv");
      odi::write_cost_csv(os, rows);
      odi::write_cost_csv(std::cout, rows);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
