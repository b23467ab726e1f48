// Benchmark driver: runs solver grids, tabulates and plots recorded traces,
// and re-checks runtime invariants plus theory diagnostics.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irerm/check.hpp"
#include "irerm/harness.hpp"
#include "irerm/theory.hpp"
#include "irerm/trace_io.hpp"

namespace {

using namespace irerm;

struct RunCli {
  ExperimentConfig cfg;
  std::string problems_spec = "all";
  std::string config_file;
};

void apply_config_file(CLI::App* cmd, RunCli& rc) {
  if (rc.config_file.empty()) return;
  const auto kv = io::read_kv_file(rc.config_file);
  auto set_if_default = [&](const char* flag, const std::string& key, auto& field) {
    const auto it = kv.find(key);
    if (it == kv.end() || cmd->count(flag) > 0) return;
    std::istringstream is(it->second);
    is >> field;
    if (is.fail()) throw CLI::ValidationError(key, "bad value in config file");
  };
  set_if_default("--solver", "solver", rc.cfg.solver);
  set_if_default("--variant", "variant", rc.cfg.variant);
  set_if_default("--problems", "problems", rc.problems_spec);
  set_if_default("--runs", "runs", rc.cfg.runs);
  set_if_default("--sigma", "sigma", rc.cfg.sigma);
  set_if_default("--seed", "seed", rc.cfg.base_seed);
  set_if_default("--budget-mult", "budget_mult", rc.cfg.budget_mult);
  set_if_default("--kmax", "kmax", rc.cfg.kmax);
  set_if_default("--out", "out", rc.cfg.out_dir);
  set_if_default("--jobs", "jobs", rc.cfg.jobs);
  set_if_default("--dim", "dim", rc.cfg.n);
  set_if_default("--eta1", "eta1", rc.cfg.irerm.eta1);
  set_if_default("--eta2", "eta2", rc.cfg.irerm.eta2);
  set_if_default("--theta0", "theta0", rc.cfg.irerm.theta0);
  set_if_default("--theta-min", "theta_min", rc.cfg.irerm.theta_min);
  set_if_default("--restore-frac", "r", rc.cfg.irerm.r);
  set_if_default("--mu", "mu", rc.cfg.irerm.mu);
  set_if_default("--gamma", "gamma", rc.cfg.irerm.gamma);
  set_if_default("--delta0", "delta0", rc.cfg.irerm.delta0);
  set_if_default("--delta-max", "delta_max", rc.cfg.irerm.delta_max);
  set_if_default("--y0", "y0", rc.cfg.irerm.y0);
  set_if_default("--sample-cap", "sample_cap", rc.cfg.irerm.sample_cap);
}

int cmd_run(RunCli& rc) {
  rc.cfg.problems = expand_problem_ids(rc.problems_spec);
  // keep the storm knobs in sync with the shared flags
  rc.cfg.storm.eta1 = rc.cfg.irerm.eta1;
  rc.cfg.storm.eta2 = rc.cfg.irerm.eta2;
  rc.cfg.storm.gamma = rc.cfg.irerm.gamma;
  rc.cfg.storm.delta0 = rc.cfg.irerm.delta0;
  rc.cfg.storm.delta_max = rc.cfg.irerm.delta_max;
  rc.cfg.storm.sample_cap = rc.cfg.irerm.sample_cap;
  const int failures = run_experiment(rc.cfg);
  std::printf("wrote %zu trace file(s) to %s\n",
              rc.cfg.problems.size() * static_cast<std::size_t>(rc.cfg.runs),
              rc.cfg.out_dir.c_str());
  if (failures > 0) {
    std::fprintf(stderr, "%d run(s) ended with a failure reason\n", failures);
    return 1;
  }
  return 0;
}

int cmd_table(const std::string& dir, const std::string& format) {
  const auto finals = scan_run_finals(dir);
  if (finals.empty()) {
    std::fprintf(stderr, "no trace files found in %s\n", dir.c_str());
    return 1;
  }
  const auto rows = aggregate(finals);
  if (format == "md")
    write_aggregate_md(std::cout, rows);
  else
    write_aggregate_csv(std::cout, rows);
  return 0;
}

int cmd_plot(const std::string& dir) {
  emit_plot_files(dir);
  std::printf("plot data and SVG files written to %s\n", dir.c_str());
  return 0;
}

struct CheckCli {
  std::string dir;
  double kappa = -1.0;
  double epsilon = 1e-3;
  double pi = 0.9;
  double lipschitz = -1.0;  // <= 0: estimate from the trajectory
  int jobs = 1;
};

int cmd_check(const CheckCli& cc) {
  const auto finals = scan_run_finals(cc.dir);
  if (finals.empty()) {
    std::fprintf(stderr, "no trace files found in %s\n", cc.dir.c_str());
    return 1;
  }
  struct Rerun {
    RunTrace trace;
    io::MetaMap meta;
    IrermConfig icfg;
    StormConfig scfg;
    bool is_irerm = false;
    std::vector<std::string> problems_violations;
  };
  std::vector<Rerun> reruns(finals.size());
  std::vector<std::string> violations;
  std::mutex mu;

  parallel_for(finals.size(), cc.jobs, [&](std::size_t i) {
    const auto tf = io::read_trace_file(finals[i].path);
    Rerun rr;
    rr.meta = tf.meta;
    rr.is_irerm = io::meta_str(tf.meta, "solver") == "irerm";
    const auto problem = luksan::make_problem(io::meta_str(tf.meta, "problem"),
                                              static_cast<int>(io::meta_u64(tf.meta, "n")));
    const std::uint64_t seed = io::meta_u64(tf.meta, "seed");
    const NoiseSpec noise{io::meta_double(tf.meta, "sigma"), seed};
    CheckResult res;
    if (rr.is_irerm) {
      rr.icfg = io::irerm_config_from_meta(tf.meta);
      MultiplicativeNoiseOracle oracle(*problem, noise, rr.icfg.sample_cap);
      rr.trace = IrermSolver(oracle, rr.icfg).run(seed, true);
      res = check_trace(rr.trace, rr.icfg);
    } else {
      rr.scfg = io::storm_config_from_meta(tf.meta);
      MultiplicativeNoiseOracle oracle(*problem, noise, rr.scfg.sample_cap);
      rr.trace = StormSolver(oracle, rr.scfg).run(seed, true);
      res = check_trace(rr.trace, rr.scfg);
    }
    rr.trace.run_index = static_cast<int>(io::meta_u64(tf.meta, "run_index"));
    // integrity: the stored trace must match the deterministic re-run
    if (rr.trace.final_state.cost != io::meta_u64(tf.meta, "final_cost") ||
        io::fmt_g17(rr.trace.final_exact_f) != io::meta_str(tf.meta, "final_exact_f") ||
        rr.trace.records.size() != io::meta_u64(tf.meta, "iterations"))
      res.violations.push_back(finals[i].path + ": stored trace differs from re-run");
    std::lock_guard<std::mutex> lock(mu);
    for (auto& v : res.violations) violations.push_back(v);
    reruns[i] = std::move(rr);
  });

  std::printf("invariant suite: %zu trace(s), %zu violation(s)\n", reruns.size(),
              violations.size());
  for (const auto& v : violations) std::printf("  VIOLATION %s\n", v.c_str());

  // Theory diagnostics on the irerm traces, grouped by problem.
  std::map<std::string, std::vector<const Rerun*>> by_problem;
  for (const auto& rr : reruns)
    if (rr.is_irerm && !rr.trace.records.empty())
      by_problem[rr.trace.problem_id].push_back(&rr);

  for (const auto& [pid, group] : by_problem) {
    const auto& cfg0 = group.front()->icfg;
    const auto problem = luksan::make_problem(pid, group.front()->trace.n);
    double L = cc.lipschitz;
    if (L <= 0.0) {
      RandomStream ls(1234567);
      L = 0.0;
      for (const auto* rr : group)
        L = std::max(L, theory::estimate_lipschitz(*problem, rr->trace.iterates, ls));
    }
    theory::TheoryParams params;
    try {
      params = theory::TheoryParams::derive(cfg0, L, cc.epsilon, cc.pi,
                                            cc.kappa > 0.0 ? cc.kappa : -1.0);
    } catch (const std::exception& e) {
      std::printf("%s: theory parameters invalid (%s)\n", pid.c_str(), e.what());
      continue;
    }
    std::printf("\n%s theory diagnostics (kappa=%.3e, L=%.3e, zeta=%.3e, v=%.9f, "
                "pi=%.3f%s)\n",
                pid.c_str(), params.kappa, params.L, params.zeta, params.v, params.pi,
                params.pi_ok ? "" : " [pi conditions NOT satisfied]");
    double mean_hit = 0.0;
    int hits = 0;
    std::size_t lemma_violations = 0;
    double psi0 = 0.0;
    for (const auto* rr : group) {
      const auto& t = rr->trace;
      const auto rep = theory::lyapunov_decrease_report(t, params);
      std::size_t true_count = rep.n_true_success + rep.n_true_unsuccess;
      const auto hit = theory::hitting_time(t, cc.epsilon);
      const auto lemma = theory::lemma_succ_check(t, params, rr->icfg);
      lemma_violations += lemma.size();
      if (hit) {
        mean_hit += static_cast<double>(*hit);
        ++hits;
      }
      const auto& first = t.records.front();
      psi0 = theory::lyapunov(first.exact_f, first.h_yk, first.theta, first.delta,
                              params);
      std::printf("  run %d: mean d(psi)/delta^2 = %+.6e (%s), true iters %zu/%zu, "
                  "hit(eps=%.1e) = %s, lemma-succ violations = %zu\n",
                  t.run_index, rep.overall_mean,
                  rep.overall_negative ? "negative" : "NOT negative", true_count,
                  rep.transitions, cc.epsilon,
                  hit ? std::to_string(*hit).c_str() : "not hit", lemma.size());
    }
    if (hits > 0)
      std::printf("  empirical mean hitting time over %d hitting run(s): %.1f\n", hits,
                  mean_hit / hits);
    std::printf("  hitting-time ceiling pi/(2pi-1) psi0 xi^2/(sigma eps^2) + 1 = %.3e "
                "(psi0=%.3e, xi_eff=%.3e, sigma=%.3e%s)\n",
                theory::expected_hitting_bound(params, psi0), psi0, params.xi_effective,
                params.sigma_decrease,
                params.delta_eps_snapped ? ", delta_eps snapped to radius lattice" : "");
    if (lemma_violations > 0)
      std::printf("  WARNING: %zu lemma-succ violation(s) across runs\n",
                  lemma_violations);
  }
  return violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic trust-region benchmark harness"};
  app.require_subcommand(1);

  RunCli rc;
  auto* run = app.add_subcommand("run", "run a solver grid and write trace CSVs");
  run->add_option("--solver", rc.cfg.solver, "irerm | storm")->capture_default_str();
  run->add_option("--variant", rc.cfg.variant, "v1 | v2")->capture_default_str();
  run->add_option("--problems", rc.problems_spec, "comma-separated ids or 'all'")
      ->capture_default_str();
  run->add_option("--runs", rc.cfg.runs, "runs per problem")->capture_default_str();
  run->add_option("--sigma", rc.cfg.sigma, "multiplicative noise half-width")
      ->capture_default_str();
  run->add_option("--seed", rc.cfg.base_seed, "base seed; run i uses seed+i")
      ->capture_default_str();
  run->add_option("--out", rc.cfg.out_dir, "output directory")->required();
  run->add_option("--budget-mult", rc.cfg.budget_mult,
                  "budget = mult*(n+1) samples; default 1e5 (v1) / 1e4 (v2)");
  run->add_option("--kmax", rc.cfg.kmax, "iteration cap")->capture_default_str();
  run->add_option("--jobs", rc.cfg.jobs, "concurrent runs")->capture_default_str();
  run->add_option("--dim", rc.cfg.n, "problem dimension")->capture_default_str();
  run->add_option("--config", rc.config_file, "key=value config file (CLI overrides)");
  run->add_option("--eta1", rc.cfg.irerm.eta1, "acceptance fraction")
      ->capture_default_str();
  run->add_option("--eta2", rc.cfg.irerm.eta2, "gradient/radius threshold")
      ->capture_default_str();
  run->add_option("--theta0", rc.cfg.irerm.theta0, "initial penalty")
      ->capture_default_str();
  run->add_option("--theta-min", rc.cfg.irerm.theta_min, "penalty floor")
      ->capture_default_str();
  run->add_option("--restore-frac", rc.cfg.irerm.r, "restoration fraction r")
      ->capture_default_str();
  run->add_option("--mu", rc.cfg.irerm.mu, "accuracy bound factor")
      ->capture_default_str();
  run->add_option("--gamma", rc.cfg.irerm.gamma, "radius update factor")
      ->capture_default_str();
  run->add_option("--delta0", rc.cfg.irerm.delta0, "initial radius")
      ->capture_default_str();
  run->add_option("--delta-max", rc.cfg.irerm.delta_max, "radius cap")
      ->capture_default_str();
  run->add_option("--y0", rc.cfg.irerm.y0, "initial accuracy variable")
      ->capture_default_str();
  run->add_option("--sample-cap", rc.cfg.irerm.sample_cap, "per-estimate sample cap")
      ->capture_default_str();

  std::string table_dir, table_format = "csv";
  auto* table = app.add_subcommand("table", "aggregate final values per cell");
  table->add_option("--in", table_dir, "directory of trace CSVs")->required();
  table->add_option("--format", table_format, "csv | md")->capture_default_str();

  std::string plot_dir;
  auto* plot = app.add_subcommand("plot", "emit best-run plot data and SVGs");
  plot->add_option("--in", plot_dir, "directory of trace CSVs")->required();

  CheckCli cc;
  auto* check = app.add_subcommand("check", "invariant suite + theory diagnostics");
  check->add_option("--in", cc.dir, "directory of trace CSVs")->required();
  check->add_option("--kappa", cc.kappa, "truth tolerance (default from config bound)");
  check->add_option("--epsilon", cc.epsilon, "hitting-time threshold")
      ->capture_default_str();
  check->add_option("--pi", cc.pi, "declared true-iteration probability")
      ->capture_default_str();
  check->add_option("--lipschitz", cc.lipschitz,
                    "L with Lip(grad f) = 2L; <=0 estimates it");
  check->add_option("--jobs", cc.jobs, "concurrent re-runs")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      apply_config_file(run, rc);
      return cmd_run(rc);
    }
    if (table->parsed()) return cmd_table(table_dir, table_format);
    if (plot->parsed()) return cmd_plot(plot_dir);
    if (check->parsed()) return cmd_check(cc);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
