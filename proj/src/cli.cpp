#include "streamnav/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

#include "streamnav/bench.hpp"
#include "streamnav/config_io.hpp"
#include "streamnav/errors.hpp"
#include "streamnav/field_export.hpp"
#include "streamnav/log_io.hpp"
#include "streamnav/safety_analysis.hpp"
#include "streamnav/stats.hpp"

namespace streamnav::cli {

namespace {

std::string fixed(double v, int digits) {
  if (std::abs(v) < kBoundaryTolerance) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct Preflight {
  std::optional<SafetyReport> theorem1;
  std::optional<SafetyReport> theorem2;
  std::optional<double> d_min0;
  std::size_t failures = 0;
  std::size_t healthy = 0;
};

/// Both conditions on the initial layout, with every scripted failure frozen
/// at its starting position.
Preflight preflight(const ConfigFile& cfg, bool want_theorem1) {
  const Scenario& s = cfg.scenario;
  std::set<int> failed_ids;
  for (const auto& f : s.failures) failed_ids.insert(f.agent_id);

  std::vector<Vec2> healthy;
  std::vector<Obstacle> obstacles;
  for (const auto& a : s.agents) {
    if (failed_ids.count(a.id)) {
      obstacles.push_back(Obstacle::failed_agent(a.position, s.margins));
    } else {
      healthy.push_back(a.position);
    }
  }
  Preflight p;
  p.failures = obstacles.size();
  p.healthy = healthy.size();
  if (healthy.size() >= 2) p.d_min0 = min_pairwise_distance(healthy);
  if (obstacles.empty() || healthy.size() < 2) return p;

  const FlowField field(obstacles);
  if (obstacles.size() == 1) p.theorem2 = check_theorem2(healthy, field, s.margins);
  if (want_theorem1) {
    const Box domain = cfg.check.lambda_domain.value_or(default_lambda_domain(s));
    Theorem1Options opts;
    opts.grid_step = cfg.check.grid_step;
    p.theorem1 = check_theorem1(healthy, field, s.margins, domain, opts);
  }
  return p;
}

/// Loads the config; reports parse problems separately from scenario problems.
std::optional<ConfigFile> load(const std::filesystem::path& path, std::ostream& err) {
  try {
    ConfigFile cfg = load_config(path);
    apply_seed_override(cfg);
    return cfg;
  } catch (const ConfigParseError& e) {
    err << "config parse error: " << e.what() << '\n';
  }
  return std::nullopt;
}

}  // namespace

int simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  auto cfg = load(opts.config, err);
  if (!cfg) return kExitError;
  Scenario& s = cfg->scenario;
  if (opts.seed) {
    s.seed = *opts.seed;
    s.solver.rng_seed = *opts.seed;
  }

  std::vector<std::string> warnings;
  ScenarioLog log;
  try {
    s.validate();
    if (s.failures.size() >= 2) {
      const Preflight p = preflight(*cfg, true);
      if (p.theorem1 && p.theorem1->theorem1 == Verdict::Fail) {
        warnings.push_back("theorem 1 check failed: p_min,0^2 / lambda_max = " +
                           fixed(p.theorem1->p_min0 * p.theorem1->p_min0 / p.theorem1->lambda_max, 6) +
                           " < 4(delta + epsilon)^2 = " +
                           fixed(4.0 * s.margins.sum() * s.margins.sum(), 6));
      }
    }
    log = run_scenario(s, !opts.realtime);
  } catch (const Error& e) {
    err << "scenario error: " << e.what() << '\n';
    return kExitError;
  }
  warnings.insert(warnings.end(), log.warnings.begin(), log.warnings.end());

  const auto samples = monitor_separations(log, s.margins);
  const SeparationSummary summary = summarize(samples, s.margins);
  if (!summary.separation_ok) {
    warnings.push_back("commanded separation fell below 2(delta + epsilon) = " +
                       fixed(s.margins.separation_floor(), 2) + " m");
  }
  if (!summary.clearance_ok) {
    warnings.push_back("no-fly clearance fell below epsilon = " + fixed(s.margins.epsilon, 2) + " m");
  }

  try {
    std::filesystem::create_directories(opts.out_dir);
    std::ofstream steps(opts.out_dir / "steps.jsonl", std::ios::binary);
    std::ofstream csv(opts.out_dir / "summary.csv", std::ios::binary);
    if (!steps || !csv) {
      err << "io error: cannot write to " << opts.out_dir.string() << '\n';
      return kExitError;
    }
    write_step_log(steps, log);
    write_summary_csv(csv, log, samples);
    if (!steps || !csv) {
      err << "io error: write failed in " << opts.out_dir.string() << '\n';
      return kExitError;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    err << "io error: " << e.what() << '\n';
    return kExitError;
  }

  out << "scenario: " << s.name << " (seed " << s.seed << ")\n";
  out << "steps: " << log.steps.size() << '\n';
  if (summary.min_d_commanded) out << "min commanded separation: " << fixed(*summary.min_d_commanded, 4) << " m\n";
  if (summary.min_d_actual) out << "min actual separation: " << fixed(*summary.min_d_actual, 4) << " m\n";
  if (summary.min_clearance_actual) {
    out << "min actual clearance from a_f: " << fixed(*summary.min_clearance_actual, 4) << " m\n";
  }
  out << "step runtime p50/p99: " << fixed(percentile(log.runtime_ns, 50.0) / 1e6, 3) << " / "
      << fixed(percentile(log.runtime_ns, 99.0) / 1e6, 3) << " ms, deadline misses: "
      << log.deadline_misses << '\n';
  out << "wrote " << (opts.out_dir / "steps.jsonl").string() << " and "
      << (opts.out_dir / "summary.csv").string() << '\n';
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return warnings.empty() ? kExitOk : kExitSafetyWarning;
}

int check(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
  auto cfg = load(config, err);
  if (!cfg) return kExitError;
  const Scenario& s = cfg->scenario;
  Preflight p;
  try {
    s.validate();
    p = preflight(*cfg, true);
  } catch (const Error& e) {
    err << "scenario error: " << e.what() << '\n';
    return kExitError;
  }

  const double a_f = s.margins.sum();
  const double a_p = Obstacle::failed_agent({}, s.margins).planned_radius();
  out << "scenario: " << s.name << '\n';
  out << "margins: delta = " << fixed(s.margins.delta, 2) << " m, epsilon = " << fixed(s.margins.epsilon, 2)
      << " m, a_f = " << fixed(a_f, 2) << " m, a_p = " << fixed(a_p, 2) << " m\n";
  out << "failures: " << p.failures << ", healthy agents: " << p.healthy << '\n';
  if (p.d_min0) out << "d_min,0 = " << fixed(*p.d_min0, 6) << " m\n";
  if (p.theorem1) {
    out << "p_min,0 = " << fixed(p.theorem1->p_min0, 6) << '\n';
    out << "lambda_max = " << fixed(p.theorem1->lambda_max, 6) << '\n';
  }

  if (p.theorem2) {
    out << "theorem 2 (single obstacle, d_min,0 >= 2(delta + epsilon) + a_p = "
        << fixed(s.margins.separation_floor() + a_p, 2) << " m): " << to_string(p.theorem2->theorem2)
        << " (margin " << fixed(*p.theorem2->theorem2_margin, 2) << " m)\n";
  } else {
    out << "theorem 2 (single obstacle): not-applicable"
        << (p.failures == 0 ? " (no failures scripted)" : p.failures > 1 ? " (more than one failure)" : "")
        << '\n';
  }
  if (p.theorem1) {
    out << "theorem 1 (general, p_min,0^2 / lambda_max >= 4(delta + epsilon)^2): "
        << to_string(p.theorem1->theorem1) << " (margin " << fixed(*p.theorem1->theorem1_margin, 2)
        << " m)\n";
  } else {
    out << "theorem 1 (general): not-applicable"
        << (p.failures == 0 ? " (no failures scripted)" : " (fewer than two healthy agents)") << '\n';
  }

  const bool warn = (p.failures == 1 && p.theorem2 && p.theorem2->theorem2 == Verdict::Fail) ||
                    (p.failures > 1 && p.theorem1 && p.theorem1->theorem1 == Verdict::Fail);
  return warn ? kExitSafetyWarning : kExitOk;
}

int field(const FieldOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const FlowField f(parse_obstacle_spec(opts.obstacles));
    const FieldGridExport grid = sample_field_grid(f, parse_bbox(opts.bbox), opts.step);
    if (opts.out.empty()) {
      write_field_csv(out, grid);
      return kExitOk;
    }
    std::ofstream file(opts.out, std::ios::binary);
    if (!file) {
      err << "io error: cannot write " << opts.out.string() << '\n';
      return kExitError;
    }
    write_field_csv(file, grid);
    out << "wrote " << grid.rows.size() << " rows (" << grid.nx << " x " << grid.ny << ") to "
        << opts.out.string() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    err << "field error: " << e.what() << '\n';
    return kExitError;
  }
}

int bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.steps == 0) {
    out << "no steps requested; empty report\n";
    return kExitOk;
  }
  std::vector<BenchReport> reports;
  try {
    for (int k : opts.k_values) {
      BenchConfig cfg;
      cfg.agents = opts.agents;
      cfg.k_passes = k;
      cfg.steps = opts.steps;
      cfg.seed = opts.seed;
      reports.push_back(run_bench(cfg));
    }
  } catch (const Error& e) {
    err << "bench error: " << e.what() << '\n';
    return kExitError;
  }
  out << "agents,k,steps,p50_ms,p99_ms,mean_ms,max_ms,deadline_misses\n";
  for (const auto& r : reports) {
    out << r.agents << ',' << r.k_passes << ',' << r.steps << ',' << fixed(r.p50_ns / 1e6, 4) << ','
        << fixed(r.p99_ns / 1e6, 4) << ',' << fixed(r.mean_ns / 1e6, 4) << ','
        << fixed(r.max_ns / 1e6, 4) << ',' << r.deadline_misses << '\n';
  }
  return kExitOk;
}

}  // namespace streamnav::cli
