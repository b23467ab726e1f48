#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "irerm/accuracy.hpp"
#include "irerm/oracle.hpp"
#include "irerm/record.hpp"
#include "irerm/rng.hpp"
#include "irerm/solver_irerm.hpp"

namespace irerm {

// First-order trust-region baseline with sampled models.  v1 draws
// ceil(1/delta^4) samples per function estimate and ceil(1/delta^2) per
// gradient estimate; v2 uses max{10+k, ceil(1/delta^2)} for both.  Two
// function estimates and one gradient estimate are charged per iteration.
struct StormConfig {
  double eta1 = 0.1;
  double eta2 = 1e-3;
  double gamma = 2.0;
  double delta_max = 10.0;
  double delta0 = 1.0;
  Variant variant = Variant::v2;
  std::int64_t kmax = 500;
  std::uint64_t budget = 1'010'000;
  std::int64_t sample_cap = MultiplicativeNoiseOracle::kDefaultSampleCap;

  void validate() const {
    if (!(eta1 > 0.0 && eta1 < 1.0)) throw std::invalid_argument("eta1 in (0,1)");
    if (!(eta2 > 0.0)) throw std::invalid_argument("eta2 > 0");
    if (!(gamma > 1.0)) throw std::invalid_argument("gamma > 1");
    if (!(delta_max > 0.0)) throw std::invalid_argument("delta_max > 0");
    if (!(delta0 > 0.0 && delta0 <= delta_max))
      throw std::invalid_argument("delta0 in (0,delta_max]");
    if (kmax < 0) throw std::invalid_argument("kmax >= 0");
    if (sample_cap < 1) throw std::invalid_argument("sample_cap >= 1");
  }
};

struct StormSampleSizes {
  std::int64_t function_samples;
  std::int64_t gradient_samples;
};

inline StormSampleSizes storm_sample_sizes(double delta, std::int64_t k, Variant variant) {
  const double d2 = std::min(std::ceil(1.0 / (delta * delta)), 9.0e18);
  if (variant == Variant::v1) {
    const double d4 = std::min(std::ceil(1.0 / (delta * delta * delta * delta)), 9.0e18);
    return {static_cast<std::int64_t>(d4), static_cast<std::int64_t>(d2)};
  }
  const double p = std::max(static_cast<double>(10 + k), d2);
  return {static_cast<std::int64_t>(p), static_cast<std::int64_t>(p)};
}

class StormSolver {
 public:
  StormSolver(const MultiplicativeNoiseOracle& oracle, StormConfig cfg)
      : oracle_(oracle), cfg_(cfg) {
    cfg_.validate();
  }

  const StormConfig& config() const { return cfg_; }

  TrustRegionState initial_state() const {
    TrustRegionState s;
    s.x = oracle_.problem().start();
    s.delta = cfg_.delta0;
    s.theta = kNaN;
    return s;
  }

  void step(TrustRegionState& s, IterationRecord& rec, RandomStream& stream) const {
    const auto& problem = oracle_.problem();
    rec.k = s.k;
    rec.delta = s.delta;
    rec.cost_after = s.cost;
    rec.exact_f = problem.value(s.x);
    const auto exact_grad = problem.gradient(s.x);
    rec.exact_gradnorm = norm(exact_grad);

    const auto sizes = storm_sample_sizes(s.delta, s.k, cfg_.variant);
    const auto level_f = level_from_samples(sizes.function_samples);
    const auto level_g = level_from_samples(sizes.gradient_samples);
    rec.y_t = level_f;
    rec.y_g = level_g;

    const auto f0 = oracle_.value(s.x, level_f, stream);
    charge(s, rec, f0.samples_used);
    rec.fbar_dagger = f0.value;

    const auto gest = oracle_.gradient(s.x, level_g, stream);
    charge(s, rec, gest.samples_used);
    rec.gnorm = norm(gest.gradient);
    rec.exact_grad_err = diff_norm(exact_grad, gest.gradient);

    if (rec.gnorm < kZeroGradientFloor) {
      rec.zero_gradient = true;
      rec.success = false;
      s.delta = s.delta / cfg_.gamma;
      s.k += 1;
      return;
    }

    std::vector<double> trial(s.x.size());
    double pnorm2 = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double pi = -s.delta * gest.gradient[i] / rec.gnorm;
      trial[i] = s.x[i] + pi;
      pnorm2 += pi * pi;
    }
    rec.pnorm = std::sqrt(pnorm2);
    rec.model_at_step = f0.value - s.delta * rec.gnorm;
    rec.exact_f_trial = problem.value(trial);

    const auto f1 = oracle_.value(trial, level_f, stream);
    charge(s, rec, f1.samples_used);
    rec.fbar_p = f1.value;

    rec.rho = (f0.value - f1.value) / (s.delta * rec.gnorm);
    rec.success = rec.rho >= cfg_.eta1 && rec.gnorm >= cfg_.eta2 * s.delta;
    if (rec.success) {
      s.x = std::move(trial);
      s.delta = std::min(cfg_.gamma * s.delta, cfg_.delta_max);
    } else {
      s.delta = s.delta / cfg_.gamma;
    }
    s.k += 1;
  }

  RunTrace run(std::uint64_t seed, bool collect_iterates = false) const {
    RandomStream stream(seed);
    RunTrace trace;
    const auto& problem = oracle_.problem();
    trace.solver = "storm";
    trace.variant = to_string(cfg_.variant);
    trace.problem_id = problem.id();
    trace.n = problem.dim();
    trace.m = problem.residual_dim();
    trace.seed = seed;
    trace.sigma = oracle_.sigma();
    trace.budget = cfg_.budget;
    trace.kmax = cfg_.kmax;

    TrustRegionState s = initial_state();
    if (collect_iterates) trace.iterates.push_back(s.x);
    trace.reason = Termination::max_iterations;
    while (true) {
      if (s.cost >= cfg_.budget) {
        trace.reason = Termination::budget;
        break;
      }
      if (s.k >= cfg_.kmax) {
        trace.reason = Termination::max_iterations;
        break;
      }
      IterationRecord rec;
      try {
        step(s, rec, stream);
      } catch (const SampleCapExceeded&) {
        rec.aborted = true;
        trace.records.push_back(rec);
        trace.reason = Termination::sample_cap;
        break;
      } catch (const NumericalFailure&) {
        rec.aborted = true;
        trace.records.push_back(rec);
        trace.reason = Termination::numerical_failure;
        break;
      }
      trace.records.push_back(rec);
      if (collect_iterates) trace.iterates.push_back(s.x);
    }
    trace.final_state = s;
    trace.final_exact_f = problem.value(s.x);
    trace.final_exact_gradnorm = problem.gradient_norm(s.x);
    return trace;
  }

 private:
  static double norm(std::span<const double> v) {
    double s = 0.0;
    for (double vi : v) s += vi * vi;
    return std::sqrt(s);
  }
  static double diff_norm(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
  static void charge(TrustRegionState& s, IterationRecord& rec, std::uint64_t samples) {
    s.cost += samples;
    rec.samples_charged += samples;
    rec.cost_after = s.cost;
  }

  const MultiplicativeNoiseOracle& oracle_;
  StormConfig cfg_;
};

}  // namespace irerm
