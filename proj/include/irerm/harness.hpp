#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "irerm/check.hpp"
#include "irerm/luksan.hpp"
#include "irerm/oracle.hpp"
#include "irerm/solver_irerm.hpp"
#include "irerm/solver_storm.hpp"
#include "irerm/svg_plot.hpp"
#include "irerm/trace_io.hpp"

namespace irerm {

// One benchmark grid: solver x variant x problems x runs, seeded
// base_seed + run_index, budget = budget_mult * (n + 1) samples.
struct ExperimentConfig {
  std::string solver = "irerm";  // "irerm" | "storm"
  std::string variant = "v2";
  std::vector<std::string> problems;
  int runs = 10;
  double sigma = 0.1;
  std::uint64_t base_seed = 42;
  double budget_mult = -1.0;  // < 0: 1e5 for v1, 1e4 for v2
  std::int64_t kmax = 500;
  std::string out_dir;
  int jobs = 1;
  int n = 100;

  // Algorithm knobs shared by every cell (budget/kmax/variant are filled in
  // per cell from the fields above).
  IrermConfig irerm;
  StormConfig storm;

  double resolved_budget_mult() const {
    if (budget_mult > 0.0) return budget_mult;
    return variant == "v1" ? 1e5 : 1e4;
  }
  std::uint64_t budget_for(int dim) const {
    return static_cast<std::uint64_t>(
        std::llround(resolved_budget_mult() * static_cast<double>(dim + 1)));
  }
  void validate() const {
    if (solver != "irerm" && solver != "storm")
      throw std::invalid_argument("solver must be irerm or storm");
    variant_from_string(variant);
    if (runs < 1) throw std::invalid_argument("runs >= 1");
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma >= 0");
    if (problems.empty()) throw std::invalid_argument("no problems selected");
    if (jobs < 1) throw std::invalid_argument("jobs >= 1");
    if (!(resolved_budget_mult() > 0.0)) throw std::invalid_argument("budget > 0");
  }
};

inline std::vector<std::string> expand_problem_ids(const std::string& spec) {
  if (spec == "all") return luksan::problem_ids();
  std::vector<std::string> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

inline void parallel_for(std::size_t count, int jobs,
                         const std::function<void(std::size_t)>& fn) {
  jobs = static_cast<int>(std::min<std::size_t>(std::max(jobs, 1), count));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (err) std::rethrow_exception(err);
}

inline RunTrace run_single(const ExperimentConfig& cfg, const std::string& problem_id,
                           int run_index, bool collect_iterates = false) {
  const auto problem = luksan::make_problem(problem_id, cfg.n);
  const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(run_index);
  const NoiseSpec noise{cfg.sigma, seed};
  RunTrace trace;
  if (cfg.solver == "irerm") {
    IrermConfig sc = cfg.irerm;
    sc.variant = variant_from_string(cfg.variant);
    sc.kmax = cfg.kmax;
    sc.budget = cfg.budget_for(problem->dim());
    MultiplicativeNoiseOracle oracle(*problem, noise, sc.sample_cap);
    trace = IrermSolver(oracle, sc).run(seed, collect_iterates);
  } else {
    StormConfig sc = cfg.storm;
    sc.variant = variant_from_string(cfg.variant);
    sc.kmax = cfg.kmax;
    sc.budget = cfg.budget_for(problem->dim());
    MultiplicativeNoiseOracle oracle(*problem, noise, sc.sample_cap);
    trace = StormSolver(oracle, sc).run(seed, collect_iterates);
  }
  trace.run_index = run_index;
  return trace;
}

inline std::string trace_filename(const std::string& solver, const std::string& variant,
                                  const std::string& problem, int run_index) {
  return "trace_" + solver + "_" + variant + "_" + problem + "_run" +
         std::to_string(run_index) + ".csv";
}

inline void write_trace_file(const ExperimentConfig& cfg, const RunTrace& trace) {
  namespace fs = std::filesystem;
  const fs::path path = fs::path(cfg.out_dir) /
                        trace_filename(trace.solver, trace.variant, trace.problem_id,
                                       trace.run_index);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write trace file: " + path.string());
  io::MetaMap extra;
  if (cfg.solver == "irerm") {
    IrermConfig sc = cfg.irerm;
    io::append_meta(extra, sc);
  } else {
    StormConfig sc = cfg.storm;
    io::append_meta(extra, sc);
  }
  io::write_trace_csv(os, trace, extra);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

// Runs the whole grid, one trace file per (problem, run).  Individual run
// failures are recorded in the trace's termination reason; the grid
// continues.  Returns the number of runs whose termination reason was an
// invariant violation or numerical failure.
inline int run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  struct Cell {
    std::string problem;
    int run_index;
  };
  std::vector<Cell> cells;
  for (const auto& pid : cfg.problems)
    for (int run = 0; run < cfg.runs; ++run) cells.push_back({pid, run});
  std::atomic<int> failures{0};
  parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
    const auto trace = run_single(cfg, cells[i].problem, cells[i].run_index);
    if (trace.reason == Termination::invariant_violation ||
        trace.reason == Termination::numerical_failure)
      failures.fetch_add(1);
    write_trace_file(cfg, trace);
  });
  return failures.load();
}

// ---- aggregation over trace files ----

struct RunFinal {
  std::string problem, solver, variant;
  int run_index = 0;
  double final_f = 0.0;
  std::uint64_t final_cost = 0;
  std::string termination;
  std::string path;
};

inline std::vector<RunFinal> scan_run_finals(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind("trace_", 0) == 0 &&
        e.path().extension() == ".csv")
      files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunFinal> out;
  for (const auto& f : files) {
    const auto tf = io::read_trace_file(f);
    RunFinal r;
    r.problem = io::meta_str(tf.meta, "problem");
    r.solver = io::meta_str(tf.meta, "solver");
    r.variant = io::meta_str(tf.meta, "variant");
    r.run_index = static_cast<int>(io::meta_u64(tf.meta, "run_index"));
    r.final_f = io::meta_double(tf.meta, "final_exact_f");
    r.final_cost = io::meta_u64(tf.meta, "final_cost");
    r.termination = io::meta_str(tf.meta, "termination");
    r.path = f;
    out.push_back(r);
  }
  return out;
}

struct AggregateRow {
  std::string problem, solver, variant;
  int runs = 0;
  double min_f = 0.0, mean_f = 0.0, std_f = 0.0;
  bool single_run = false;
};

// min / mean / sample standard deviation (divisor runs-1) of the final exact
// f per (problem, solver, variant) cell.
inline std::vector<AggregateRow> aggregate(const std::vector<RunFinal>& finals) {
  std::map<std::string, std::vector<const RunFinal*>> cells;
  for (const auto& r : finals)
    cells[r.problem + "\x1f" + r.solver + "\x1f" + r.variant].push_back(&r);
  std::vector<AggregateRow> rows;
  for (const auto& [key, runs] : cells) {
    AggregateRow row;
    row.problem = runs.front()->problem;
    row.solver = runs.front()->solver;
    row.variant = runs.front()->variant;
    row.runs = static_cast<int>(runs.size());
    double mn = runs.front()->final_f, sum = 0.0;
    for (const auto* r : runs) {
      mn = std::min(mn, r->final_f);
      sum += r->final_f;
    }
    row.min_f = mn;
    row.mean_f = sum / static_cast<double>(runs.size());
    if (runs.size() > 1) {
      double ss = 0.0;
      for (const auto* r : runs) {
        const double d = r->final_f - row.mean_f;
        ss += d * d;
      }
      row.std_f = std::sqrt(ss / static_cast<double>(runs.size() - 1));
    } else {
      row.std_f = 0.0;
      row.single_run = true;
    }
    rows.push_back(row);
  }
  auto problem_key = [](const std::string& p) {
    return p.size() > 1 && p[0] == 'p' ? std::stoi(p.substr(1)) : 0;
  };
  std::sort(rows.begin(), rows.end(), [&](const AggregateRow& a, const AggregateRow& b) {
    if (problem_key(a.problem) != problem_key(b.problem))
      return problem_key(a.problem) < problem_key(b.problem);
    if (a.solver != b.solver) return a.solver < b.solver;
    return a.variant < b.variant;
  });
  return rows;
}

inline void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "problem,solver,variant,runs,min_final_f,mean_final_f,std_final_f\n";
  for (const auto& r : rows) {
    os << r.problem << ',' << r.solver << ',' << r.variant << ',' << r.runs << ','
       << io::fmt_e12(r.min_f) << ',' << io::fmt_e12(r.mean_f) << ','
       << io::fmt_e12(r.std_f);
    if (r.single_run) os << ",single-run";
    os << "\n";
  }
}

inline void write_aggregate_md(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "| problem | solver | variant | runs | min f | mean f | std f |\n";
  os << "|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    os << "| " << r.problem << " | " << r.solver << " | " << r.variant << " | "
       << r.runs << (r.single_run ? " (single)" : "") << " | " << io::fmt_e12(r.min_f)
       << " | " << io::fmt_e12(r.mean_f) << " | " << io::fmt_e12(r.std_f) << " |\n";
  }
}

// ---- plot data: best run per (problem, variant, solver) ----

// Best run: smallest final exact f, ties broken by lower final cost.
inline const RunFinal* best_run(const std::vector<RunFinal>& finals,
                                const std::string& problem, const std::string& solver,
                                const std::string& variant) {
  const RunFinal* best = nullptr;
  for (const auto& r : finals) {
    if (r.problem != problem || r.solver != solver || r.variant != variant) continue;
    if (!best || r.final_f < best->final_f ||
        (r.final_f == best->final_f && r.final_cost < best->final_cost))
      best = &r;
  }
  return best;
}

inline void emit_plot_files(const std::string& dir) {
  namespace fs = std::filesystem;
  const auto finals = scan_run_finals(dir);
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> groups;
  for (const auto& r : finals) {
    auto& solvers = groups[{r.problem, r.variant}];
    if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end())
      solvers.push_back(r.solver);
  }
  for (const auto& [key, solvers] : groups) {
    const auto& [problem, variant] = key;
    std::vector<io::PlotSeries> f_series, d_series;
    for (const auto& solver : solvers) {
      const auto* best = best_run(finals, problem, solver, variant);
      if (!best) continue;
      const auto tf = io::read_trace_file(best->path);
      io::PlotSeries fs_ser{solver + "_" + variant, {}}, ds_ser{solver + "_" + variant, {}};
      const auto stem = "plot_" + solver + "_" + variant + "_" + problem;
      std::ofstream fcsv(fs::path(dir) / (stem + "_f.csv"));
      std::ofstream dcsv(fs::path(dir) / (stem + "_delta.csv"));
      fcsv << "cost,exact_f\n";
      dcsv << "cost,delta\n";
      for (const auto& row : tf.rows) {
        fcsv << row.cost << ',' << io::fmt_e12(row.exact_f) << "\n";
        dcsv << row.cost << ',' << io::fmt_e12(row.delta) << "\n";
        fs_ser.points.emplace_back(static_cast<double>(row.cost), row.exact_f);
        ds_ser.points.emplace_back(static_cast<double>(row.cost), row.delta);
      }
      f_series.push_back(std::move(fs_ser));
      d_series.push_back(std::move(ds_ser));
    }
    if (f_series.empty()) continue;
    {
      std::ofstream svg(fs::path(dir) / ("fig_" + problem + "_" + variant + "_f.svg"));
      io::write_svg_plot(svg, problem + " (" + variant + "): exact f vs cost", "cost",
                         "exact f", f_series, true);
    }
    {
      std::ofstream svg(fs::path(dir) /
                        ("fig_" + problem + "_" + variant + "_delta.svg"));
      io::write_svg_plot(svg, problem + " (" + variant + "): radius vs cost", "cost",
                         "delta", d_series, true);
    }
  }
}

}  // namespace irerm
