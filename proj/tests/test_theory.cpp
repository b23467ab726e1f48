#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "irerm/luksan.hpp"
#include "irerm/solver_irerm.hpp"
#include "irerm/theory.hpp"
#include "test_util.hpp"

using namespace irerm;

namespace {
RunTrace noise_free_trace(int kmax = 30) {
  const auto p = luksan::make_problem("p1");
  MultiplicativeNoiseOracle oracle(*p, NoiseSpec{0.0, 0});
  IrermConfig cfg;
  cfg.kmax = kmax;
  cfg.budget = 1'000'000;
  return IrermSolver(oracle, cfg).run(1, true);
}

RunTrace noisy_trace(const char* pid = "p5", std::uint64_t seed = 7,
                     Variant variant = Variant::v2) {
  const auto p = luksan::make_problem(pid);
  MultiplicativeNoiseOracle oracle(*p, NoiseSpec{0.1, seed});
  IrermConfig cfg;
  cfg.variant = variant;
  cfg.budget = 200'000;
  return IrermSolver(oracle, cfg).run(seed, true);
}

IrermConfig default_cfg() { return IrermConfig{}; }
}  // namespace

TEST_CASE("derived constants satisfy their definitions") {
  const auto cfg = default_cfg();
  const auto p = theory::TheoryParams::derive(cfg, 12.0, 1e-3, 0.9);
  CHECK(p.kappa > 0.0);
  CHECK(p.kappa < theory::TheoryParams::kappa_upper_bound(cfg));
  CHECK(p.C1 > 0.0);
  CHECK(p.C3 > 0.0);
  CHECK(p.v > 0.0);
  CHECK(p.v < 1.0);
  CHECK(p.sigma_decrease > 0.0);
  CHECK(p.lambda == std::log(cfg.gamma));
  CHECK(p.delta_dagger > 0.0);
  // delta_eps sits on the radius lattice at or below epsilon/xi
  CHECK(p.delta_eps <= p.epsilon / p.xi * (1.0 + 1e-12));
  CHECK(p.j_eps <= 0);
  const double lattice = cfg.delta0 * std::pow(cfg.gamma, static_cast<double>(p.j_eps));
  CHECK(p.delta_eps == Catch::Approx(lattice).epsilon(1e-14));

  CHECK_THROWS_AS(theory::TheoryParams::derive(cfg, 12.0, 1e-3, 0.9, /*kappa=*/1.0),
                  std::invalid_argument);
}

TEST_CASE("noise-free iterations are true for every positive kappa") {
  const auto trace = noise_free_trace();
  REQUIRE(!trace.records.empty());
  for (const auto& rec : trace.records) {
    if (rec.zero_gradient) continue;
    for (const double kappa : {1e-9, 1e-3, 1.0}) {
      const auto label = theory::classify_true(rec, kappa);
      CHECK(label.true_iteration());
      CHECK(label.w() == 1);
    }
  }
}

TEST_CASE("walk variable over a trace") {
  const auto exact = noise_free_trace(10);
  const auto w_exact = theory::w_sequence(exact, 1e-6);
  REQUIRE(w_exact.size() == exact.records.size() + 1);
  for (int wi : w_exact) CHECK(wi == 1);

  const auto noisy = noisy_trace();
  const auto w_noisy = theory::w_sequence(noisy, 0.0);
  CHECK(w_noisy.front() == 1);
  for (std::size_t i = 1; i < w_noisy.size(); ++i) CHECK(w_noisy[i] == -1);
}

TEST_CASE("zero tolerance classifies noisy iterations as false") {
  const auto trace = noisy_trace();
  REQUIRE(!trace.records.empty());
  std::size_t true_count = 0;
  for (const auto& rec : trace.records) {
    if (rec.zero_gradient) continue;
    if (theory::classify_true(rec, 0.0).true_iteration()) ++true_count;
  }
  CHECK(true_count == 0);
}

TEST_CASE("hand-built record hits the event bounds") {
  IterationRecord rec;
  rec.delta = 0.5;
  rec.h_yk = 1.0;  // h > delta^2, so the f tolerance is kappa delta^2
  rec.exact_f = 2.0;
  rec.exact_gradnorm = 1.0;
  rec.exact_grad_err = 10.0;  // fails G3
  rec.exact_f_trial = 1.0;
  const double kappa = 0.8;
  rec.fbar_star = 2.0 + kappa * 0.25 / 2.0;  // |f - fbar*| = kappa delta^2 / 2
  rec.fbar_dagger = 5.0;                     // fails G1
  rec.fbar_p = 1.0;
  const auto label = theory::classify_true(rec, kappa);
  CHECK(label.g2);
  CHECK(label.g4);
  CHECK_FALSE(label.g1);
  CHECK_FALSE(label.g3);
  CHECK_FALSE(label.true_iteration());
  CHECK(label.w() == -1);

  IterationRecord missing;
  CHECK_THROWS_AS(theory::classify_true(missing, 1.0), std::invalid_argument);
}

TEST_CASE("Lyapunov value matches an independent factoring") {
  const auto params = theory::TheoryParams::derive(default_cfg(), 5.0, 1e-3, 0.9);
  RandomStream stream(77);
  for (int t = 0; t < 200; ++t) {
    const double f = 10.0 * stream.next_unit();
    const double h = stream.next_unit();
    const double theta = stream.next_unit();
    const double delta = 0.1 + stream.next_unit();
    const double lhs = theory::lyapunov(f, h, theta, delta, params);
    const double rhs = params.v * theta * (f + params.Sigma) +
                       params.v * (1.0 - theta) * h + (1.0 - params.v) * delta * delta;
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
  }
  // v = 1/2, theta = 1 collapses to (f + Sigma)/2 + delta^2/2
  theory::TheoryParams half = params;
  half.v = 0.5;
  half.Sigma = 3.0;
  CHECK(theory::lyapunov(2.0, 0.9, 1.0, 2.0, half) ==
        Catch::Approx((2.0 + 3.0) / 2.0 + 2.0).epsilon(1e-14));
}

TEST_CASE("unsuccessful iterations shrink the Lyapunov function") {
  const auto trace = noisy_trace();
  const auto cfg = default_cfg();
  const auto params = theory::TheoryParams::derive(cfg, 12.0, 1e-3, 0.9);
  const double g2 = cfg.gamma * cfg.gamma;
  for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
    const auto& a = trace.records[k];
    if (a.success || a.aborted) continue;
    const auto& b = trace.records[k + 1];
    const double psi_a = theory::lyapunov(a.exact_f, a.h_yk, a.theta, a.delta, params);
    const double psi_b = theory::lyapunov(b.exact_f, b.h_yk, b.theta, b.delta, params);
    const double bound = (1.0 - params.v) * (1.0 - g2) / g2 * a.delta * a.delta;
    CHECK(psi_b - psi_a <= bound + 1e-12 * std::max(1.0, std::abs(psi_a)));
  }
}

TEST_CASE("noise-free descent yields a negative Lyapunov trend") {
  const auto trace = noise_free_trace();
  const auto params = theory::TheoryParams::derive(default_cfg(), 12.0, 1e-3, 0.9);
  const auto rep = theory::lyapunov_decrease_report(trace, params);
  CHECK(rep.transitions == trace.records.size());
  CHECK(rep.overall_negative);
  CHECK(rep.sigma_condition_violations == 0);
  CHECK(rep.n_false_success + rep.n_false_unsuccess == 0);
}

TEST_CASE("empty traces give empty reports") {
  testutil::ToyQuadratic toy(10);
  MultiplicativeNoiseOracle oracle(toy, NoiseSpec{0.1, 0});
  IrermConfig cfg;
  cfg.budget = 0;
  const auto trace = IrermSolver(oracle, cfg).run(1);
  const auto params = theory::TheoryParams::derive(cfg, 2.0, 1e-3, 0.9);
  const auto rep = theory::lyapunov_decrease_report(trace, params);
  CHECK(rep.transitions == 0);
  CHECK(theory::lemma_succ_check(trace, params, cfg).empty());
}

TEST_CASE("hitting time") {
  RunTrace synth;
  for (double gn : {3.0, 2.0, 1.0, 0.5}) {
    IterationRecord rec;
    rec.exact_gradnorm = gn;
    synth.records.push_back(rec);
  }
  synth.final_exact_gradnorm = 0.4;
  CHECK(theory::hitting_time(synth, 1.0).value() == 2);
  CHECK(theory::hitting_time(synth, 3.5).value() == 0);
  CHECK(theory::hitting_time(synth, 0.45).value() == 4);
  CHECK_FALSE(theory::hitting_time(synth, 0.0).has_value());

  // monotone in epsilon
  const auto trace = noisy_trace();
  RandomStream stream(3);
  for (int t = 0; t < 100; ++t) {
    const double e1 = 5.0 * stream.next_unit();
    const double e2 = e1 + 5.0 * stream.next_unit();
    const auto h1 = theory::hitting_time(trace, e1);
    const auto h2 = theory::hitting_time(trace, e2);
    const auto v1 = h1 ? *h1 : std::numeric_limits<std::int64_t>::max();
    const auto v2 = h2 ? *h2 : std::numeric_limits<std::int64_t>::max();
    CHECK(v1 >= v2);
  }
}

TEST_CASE("success lemma check is clean on noise-free traces") {
  const auto trace = noise_free_trace();
  const auto p = luksan::make_problem("p1");
  RandomStream stream(5);
  const double L = theory::estimate_lipschitz(*p, trace.iterates, stream, 500);
  REQUIRE(L > 0.0);
  const auto params = theory::TheoryParams::derive(default_cfg(), L, 1e-3, 0.9);
  CHECK(theory::lemma_succ_check(trace, params, default_cfg()).empty());
}

TEST_CASE("success lemma check flags a broken acceptance") {
  // a true iteration with delta far inside the success bound, rejected
  RunTrace synth;
  IterationRecord rec;
  rec.k = 0;
  rec.delta = 1e-12;
  rec.theta = 0.9;
  rec.h_yk = 1.0;
  rec.exact_f = 2.0;
  rec.exact_f_trial = 1.9;
  rec.exact_gradnorm = 1.0;
  rec.exact_grad_err = 0.0;
  rec.fbar_dagger = 2.0;
  rec.fbar_star = 2.0;
  rec.fbar_p = 1.9;
  rec.gnorm = 1.0;
  rec.success = false;
  synth.records.push_back(rec);
  synth.final_state.delta = rec.delta / 2.0;
  synth.final_state.theta = rec.theta;
  synth.final_exact_f = rec.exact_f;
  synth.final_exact_gradnorm = rec.exact_gradnorm;
  const auto params = theory::TheoryParams::derive(default_cfg(), 10.0, 1e-3, 0.9);
  const auto violations = theory::lemma_succ_check(synth, params, default_cfg());
  REQUIRE(violations.size() == 1);
  CHECK(violations[0] == 0);
}

TEST_CASE("Lipschitz estimate brackets the toy curvature") {
  testutil::ToyQuadratic toy(10);
  MultiplicativeNoiseOracle oracle(toy, NoiseSpec{0.0, 0});
  IrermConfig cfg;
  cfg.kmax = 20;
  cfg.budget = 1'000'000;
  const auto trace = IrermSolver(oracle, cfg).run(1, true);
  RandomStream stream(9);
  const double L = theory::estimate_lipschitz(toy, trace.iterates, stream, 200);
  // grad f = 2(x - 1): the difference ratio is exactly 2
  CHECK(L == Catch::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("hitting bound is finite and positive") {
  const auto params = theory::TheoryParams::derive(default_cfg(), 12.0, 1e-3,
                                                   1.0 - 1e-12);
  const double bound = theory::expected_hitting_bound(params, 100.0);
  CHECK(bound > 1.0);
  CHECK(std::isfinite(bound));
}
