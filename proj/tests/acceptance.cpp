// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Budgets, tolerances and seeds are fixed here, not tunable.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "irerm/check.hpp"
#include "irerm/harness.hpp"
#include "irerm/theory.hpp"
#include "test_util.hpp"

using namespace irerm;
namespace fs = std::filesystem;

namespace {

bool g_all_ok = true;

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) g_all_ok = false;
}

int jobs() {
  return std::max(2u, std::min(10u, std::thread::hardware_concurrency()));
}

constexpr std::uint64_t kBaseSeed = 42;

// ---- 1. hard invariant suite on recorded runs ----
void criterion1() {
  std::size_t traces = 0;
  std::vector<std::string> violations;
  for (const std::string solver : {"irerm", "storm"}) {
    for (const std::string variant : {"v1", "v2"}) {
      for (const std::string pid : {"p1", "p5", "p13"}) {
        for (int run = 0; run < 2; ++run) {
          ExperimentConfig cfg;
          cfg.solver = solver;
          cfg.variant = variant;
          cfg.problems = {pid};
          cfg.base_seed = kBaseSeed;
          cfg.budget_mult = 2000.0;  // 202k samples keeps this criterion fast
          const auto trace = run_single(cfg, pid, run);
          ++traces;
          CheckResult res;
          if (solver == "irerm") {
            IrermConfig sc = cfg.irerm;
            sc.variant = variant_from_string(variant);
            sc.kmax = cfg.kmax;
            sc.budget = cfg.budget_for(100);
            res = check_trace(trace, sc);
          } else {
            StormConfig sc = cfg.storm;
            sc.variant = variant_from_string(variant);
            sc.kmax = cfg.kmax;
            sc.budget = cfg.budget_for(100);
            res = check_trace(trace, sc);
          }
          for (const auto& v : res.violations) violations.push_back(v);
        }
      }
    }
  }
  std::ostringstream os;
  os << "invariant suite (theta, Pred, Ared, step norm, radius discipline, "
        "accuracy bounds, cost) over "
     << traces << " runs: " << violations.size() << " violation(s)";
  for (const auto& v : violations) os << "\n       " << v;
  report(1, violations.empty(), os.str());
}

// ---- 2. gradient correctness on all 17 problems ----
void criterion2() {
  double worst = 0.0;
  std::string worst_id;
  for (const auto& id : luksan::problem_ids()) {
    const auto p = luksan::make_problem(id);
    const double box = id == "p4" ? 0.4 : 1.0;
    const double err = testutil::max_gradient_error(*p, 20, box, 0xACCE55 + id.size());
    if (err > worst) {
      worst = err;
      worst_id = id;
    }
  }
  std::ostringstream os;
  os << "analytic vs central-difference gradients, 17 problems x 20 points: "
     << "max rel err = " << worst << " (" << worst_id << "), tolerance 1e-6";
  report(2, worst <= 1e-6, os.str());
}

// ---- 3. estimator bias law ----
void criterion3() {
  const double sigma = 0.1;
  const double factor = 1.0 + sigma * sigma / 3.0;
  bool ok = true;
  std::ostringstream os;
  os << "single-sample estimator bias vs (1+sigma^2/3): ";
  for (const std::string pid : {"p1", "p5", "p13"}) {
    const auto p = luksan::make_problem(pid);
    const auto x0 = p->start();
    MultiplicativeNoiseOracle oracle(*p, NoiseSpec{sigma, 1});
    RandomStream stream(0xB1A5 + pid.size());

    const int K = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int k = 0; k < K; ++k) {
      const double v = oracle.value(x0, level_from_samples(1), stream).value;
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / K;
    const double se = std::sqrt((sumsq - K * mean * mean) / (K - 1) / K);
    const double target = factor * p->value(x0);
    const double dev_f = std::abs(mean - target) / se;
    ok = ok && dev_f <= 4.0;

    const int n = p->dim();
    const int Kg = 1000;
    std::vector<double> gsum(static_cast<std::size_t>(n), 0.0), gsumsq(gsum);
    for (int k = 0; k < Kg; ++k) {
      const auto g = oracle.gradient(x0, level_from_samples(1), stream);
      for (int i = 0; i < n; ++i) {
        gsum[i] += g.gradient[i];
        gsumsq[i] += g.gradient[i] * g.gradient[i];
      }
    }
    const auto exact = p->gradient(x0);
    double dev_g = 0.0;
    for (int i = 0; i < n; ++i) {
      const double mean_i = gsum[i] / Kg;
      const double var_i = (gsumsq[i] - Kg * mean_i * mean_i) / (Kg - 1);
      const double se_i = std::sqrt(std::max(var_i, 1e-300) / Kg);
      dev_g = std::max(dev_g, std::abs(mean_i - factor * exact[i]) / se_i);
    }
    ok = ok && dev_g <= 4.0;
    os << pid << " f-dev " << dev_f << " se, grad-dev " << dev_g << " se; ";
  }
  os << "band 4 se";
  report(3, ok, os.str());
}

// ---- 4. deterministic limit on the separable quadratic toy ----
void criterion4() {
  testutil::ToyQuadratic toy(10);
  bool ok = true;
  std::ostringstream os;
  os << "sigma = 0 toy (n=10): ";
  for (const auto variant : {Variant::v1, Variant::v2}) {
    MultiplicativeNoiseOracle oracle(toy, NoiseSpec{0.0, 0});
    IrermConfig cfg;
    cfg.variant = variant;
    cfg.kmax = 200;
    cfg.budget = 1'000'000;
    const auto trace = IrermSolver(oracle, cfg).run(kBaseSeed);
    const auto hit = theory::hitting_time(trace, 1e-6);
    bool theta_fixed = trace.final_state.theta == cfg.theta0;
    for (const auto& rec : trace.records) theta_fixed = theta_fixed && rec.theta == cfg.theta0;
    ok = ok && hit.has_value() && *hit <= 200 && theta_fixed;
    os << "irerm_" << to_string(variant) << " hit "
       << (hit ? std::to_string(*hit) : std::string("never")) << " theta "
       << (theta_fixed ? "fixed" : "MOVED") << "; ";
  }
  for (const auto variant : {Variant::v1, Variant::v2}) {
    MultiplicativeNoiseOracle oracle(toy, NoiseSpec{0.0, 0});
    StormConfig cfg;
    cfg.variant = variant;
    cfg.kmax = 200;
    cfg.budget = 1'000'000;
    const auto trace = StormSolver(oracle, cfg).run(kBaseSeed);
    const auto hit = theory::hitting_time(trace, 1e-6);
    ok = ok && hit.has_value() && *hit <= 200;
    os << "storm_" << to_string(variant) << " hit "
       << (hit ? std::to_string(*hit) : std::string("never")) << "; ";
  }
  os << "target: gradient norm below 1e-6 within 200 iterations";
  report(4, ok, os.str());
}

// ---- 5. experiment reproduction at paper budgets ----
struct CellResult {
  double best = 1e300;
  std::vector<RunTrace> traces;
};

CellResult run_cell(const std::string& solver, const std::string& variant,
                    const std::string& pid, bool keep = false) {
  ExperimentConfig cfg;
  cfg.solver = solver;
  cfg.variant = variant;
  cfg.problems = {pid};
  cfg.base_seed = kBaseSeed;
  CellResult out;
  out.traces.resize(10);
  std::vector<double> finals(10);
  parallel_for(10, jobs(), [&](std::size_t i) {
    auto trace = run_single(cfg, pid, static_cast<int>(i), keep);
    finals[i] = trace.final_exact_f;
    if (keep) out.traces[i] = std::move(trace);
  });
  for (double f : finals) out.best = std::min(out.best, f);
  if (!keep) out.traces.clear();
  return out;
}

CellResult g_v1_p5;  // reused by criterion 6

void criterion5() {
  struct Spec {
    const char* solver;
    const char* variant;
    const char* pid;
    double tol;
  };
  const Spec cells[] = {
      {"irerm", "v2", "p5", 1e-4},  {"irerm", "v2", "p6", 1e-4},
      {"irerm", "v2", "p11", 1e-4}, {"irerm", "v1", "p5", 1e-2},
      {"storm", "v2", "p5", 1e-3},
  };
  bool ok = true;
  std::ostringstream os;
  os << "best-of-10 final exact f at paper budgets (sigma=0.1): ";
  for (const auto& c : cells) {
    const bool keep = std::string(c.solver) == "irerm" &&
                      std::string(c.variant) == "v1" && std::string(c.pid) == "p5";
    auto res = run_cell(c.solver, c.variant, c.pid, keep);
    const bool cell_ok = res.best <= c.tol;
    ok = ok && cell_ok;
    os << c.solver << "_" << c.variant << " " << c.pid << " = " << res.best
       << (cell_ok ? " <= " : " > ") << c.tol << "; ";
    if (keep) g_v1_p5 = std::move(res);
  }
  report(5, ok, os.str());
}

// ---- 6. theory diagnostics on the irerm_v1 p5 traces ----
void criterion6() {
  if (g_v1_p5.traces.empty()) {
    report(6, false, "no irerm_v1 p5 traces available from criterion 5");
    return;
  }
  IrermConfig cfg;
  cfg.variant = Variant::v1;
  cfg.budget = 10'100'000;
  const auto problem = luksan::make_problem("p5");
  RandomStream lstream(987321);
  double L = 0.0;
  for (const auto& t : g_v1_p5.traces)
    L = std::max(L, theory::estimate_lipschitz(*problem, t.iterates, lstream, 100));
  const auto params = theory::TheoryParams::derive(cfg, L, 1e-3, 0.9);

  bool all_negative = true;
  std::size_t lemma_violations = 0;
  double mean_of_means = 0.0;
  for (const auto& t : g_v1_p5.traces) {
    const auto rep = theory::lyapunov_decrease_report(t, params);
    all_negative = all_negative && rep.overall_negative;
    mean_of_means += rep.overall_mean / static_cast<double>(g_v1_p5.traces.size());
    lemma_violations += theory::lemma_succ_check(t, params, cfg).size();
  }
  std::ostringstream os;
  os << "irerm_v1 p5, 10 seeds: Lyapunov mean d(psi)/delta^2 negative on all runs "
     << "(avg " << mean_of_means << "), lemma-succ violations = " << lemma_violations
     << " (L = " << L << ", kappa = " << params.kappa << ")";
  report(6, all_negative && lemma_violations == 0, os.str());
}

// ---- 7. byte-identical grid reruns ----
void criterion7() {
  const auto base = fs::temp_directory_path() / "irerm_acceptance";
  fs::remove_all(base);
  const auto dir_a = base / "a";
  const auto dir_b = base / "b";
  auto make = [&](const fs::path& dir) {
    ExperimentConfig cfg;
    cfg.solver = "irerm";
    cfg.variant = "v2";
    cfg.problems = {"p5"};
    cfg.runs = 2;
    cfg.budget_mult = 1000.0;
    cfg.base_seed = kBaseSeed;
    cfg.jobs = 2;
    cfg.out_dir = dir.string();
    return run_experiment(cfg);
  };
  const int fa = make(dir_a);
  const int fb = make(dir_b);
  bool ok = fa == 0 && fb == 0;
  for (int run = 0; run < 2 && ok; ++run) {
    const auto name = trace_filename("irerm", "v2", "p5", run);
    std::ifstream a(dir_a / name, std::ios::binary), b(dir_b / name, std::ios::binary);
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    ok = ok && !sa.str().empty() && sa.str() == sb.str();
  }
  report(7, ok, "re-running a grid cell with identical config and seed reproduces "
                "byte-identical trace CSVs");
  fs::remove_all(base);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  std::printf("%s\n", g_all_ok ? "acceptance suite: all criteria passed"
                               : "acceptance suite: FAILURES present");
  return g_all_ok ? 0 : 1;
}
