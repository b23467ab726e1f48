#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "irerm/accuracy.hpp"
#include "irerm/oracle.hpp"
#include "irerm/record.hpp"
#include "irerm/rng.hpp"

namespace irerm {

enum class Variant { v1, v2 };

inline const char* to_string(Variant v) { return v == Variant::v1 ? "v1" : "v2"; }

inline Variant variant_from_string(const std::string& s) {
  if (s == "v1") return Variant::v1;
  if (s == "v2") return Variant::v2;
  throw std::invalid_argument("unknown variant: " + s);
}

// Inexact-restoration trust-region solver with sampled first-order models.
// v1 follows the theoretical accuracy schedule; v2 uses the heuristic
// sample sizes max{10+k, ceil(1/delta^2)}.
struct IrermConfig {
  double eta1 = 0.1;
  double eta2 = 1e-3;
  double theta0 = 0.9;
  double theta_min = 1e-8;
  // The restoration fraction is not pinned by the algorithm; 0.99 keeps the
  // acceptance test permissive enough that the radius stays in the cheap
  // sampling regime, which is what reproduces the published benchmark
  // magnitudes.
  double r = 0.99;
  double mu = 0.99;
  double gamma = 2.0;
  double delta_max = 10.0;
  double delta0 = 1.0;
  double y0 = 1.0;
  Variant variant = Variant::v2;
  std::int64_t kmax = 500;
  std::uint64_t budget = 1'010'000;
  std::int64_t sample_cap = MultiplicativeNoiseOracle::kDefaultSampleCap;

  void validate() const {
    if (!(eta1 > 0.0 && eta1 < 1.0)) throw std::invalid_argument("eta1 in (0,1)");
    if (!(eta2 > 0.0)) throw std::invalid_argument("eta2 > 0");
    if (!(theta0 > 0.0 && theta0 < 1.0)) throw std::invalid_argument("theta0 in (0,1)");
    if (!(theta_min > 0.0 && theta_min < theta0))
      throw std::invalid_argument("theta_min in (0,theta0)");
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r in (0,1)");
    if (!(mu > 0.0)) throw std::invalid_argument("mu > 0");
    if (!(gamma > 1.0)) throw std::invalid_argument("gamma > 1");
    if (!(delta_max > 0.0)) throw std::invalid_argument("delta_max > 0");
    if (!(delta0 > 0.0 && delta0 <= delta_max))
      throw std::invalid_argument("delta0 in (0,delta_max]");
    if (!(y0 >= 0.0 && y0 <= 1.0)) throw std::invalid_argument("y0 in [0,1]");
    if (kmax < 0) throw std::invalid_argument("kmax >= 0");
    if (sample_cap < 1) throw std::invalid_argument("sample_cap >= 1");
  }
};

inline constexpr double kZeroGradientFloor = 1e-30;

struct AccuracyVariables {
  AccuracyLevel y_tilde, y_t, y_g;
};

// Step 1: pick the accuracy variables for this iteration.  v1 enforces
//   h(y~) <= r h(y_k),  h(y^t) <= mu min{delta^2, h(y_k)},  h(y^g) <= mu delta
// at the cheapest admissible levels; v2 sets the sample count for y^t = y^g
// to max{10+k, ceil(1/delta^2)} and keeps the v1 rule for y~ only.
inline AccuracyVariables choose_accuracy_variables(double h_yk, double delta,
                                                   std::int64_t k,
                                                   const IrermConfig& cfg,
                                                   AccuracyMode mode = AccuracyMode::expectation,
                                                   std::int64_t N = 0) {
  AccuracyVariables out;
  out.y_tilde = level_for_h_bound(cfg.r * h_yk, mode, N);
  if (cfg.variant == Variant::v1) {
    out.y_t = level_for_h_bound(cfg.mu * std::min(delta * delta, h_yk), mode, N);
    out.y_g = level_for_h_bound(cfg.mu * delta, mode, N);
  } else {
    const double by_delta = std::ceil(1.0 / (delta * delta));
    const double p = std::max(static_cast<double>(10 + k),
                              std::min(by_delta, 9.0e18));
    const auto samples = static_cast<std::int64_t>(p);
    out.y_t = mode == AccuracyMode::expectation
                  ? level_from_samples(samples)
                  : level_from_samples(std::min(samples, N), mode, N);
    out.y_g = out.y_t;
  }
  return out;
}

// Predicted reduction at penalty theta:
//   Pred(theta) = theta (fbar* - m(p)) + (1 - theta)(h(y_k) - h(y~)).
inline double compute_pred(double theta, double fbar_star, double model_at_step,
                           double h_yk, double h_ytilde) {
  return theta * (fbar_star - model_at_step) + (1.0 - theta) * (h_yk - h_ytilde);
}

// Penalty update: keep theta_k when Pred(theta_k) >= theta_k delta ||g||,
// otherwise the largest theta making that inequality hold.
inline double update_penalty(double theta_k, double fbar_dagger, double fbar_star,
                             double h_yk, double h_ytilde, double delta, double gnorm) {
  const double model_at_step = fbar_dagger - delta * gnorm;
  const double pred_k = compute_pred(theta_k, fbar_star, model_at_step, h_yk, h_ytilde);
  if (pred_k >= theta_k * delta * gnorm) return theta_k;
  const double num = h_yk - h_ytilde;
  const double den = fbar_dagger - fbar_star + num;
  if (!(den > 0.0))
    throw InvariantViolation{"penalty update hit a nonpositive denominator"};
  return num / den;
}

// Actual reduction at penalty theta:
//   Ared(theta) = theta (fbar* - fbar^p) + (1 - theta)(h(y_k) - h(y^t)).
inline double compute_ared(double theta, double fbar_star, double fbar_p, double h_yk,
                           double h_yt) {
  return theta * (fbar_star - fbar_p) + (1.0 - theta) * (h_yk - h_yt);
}

inline bool acceptance_test(double ared, double pred_theta_t, double gnorm,
                            double delta, double theta_t, const IrermConfig& cfg) {
  return ared >= cfg.eta1 * pred_theta_t && gnorm >= cfg.eta2 * delta &&
         theta_t >= cfg.theta_min;
}

class IrermSolver {
 public:
  IrermSolver(const MultiplicativeNoiseOracle& oracle, IrermConfig cfg)
      : oracle_(oracle), cfg_(cfg) {
    cfg_.validate();
  }

  const IrermConfig& config() const { return cfg_; }

  TrustRegionState initial_state() const {
    TrustRegionState s;
    s.x = oracle_.problem().start();
    s.y.mode = AccuracyMode::expectation;
    s.y.y = cfg_.y0;
    s.delta = cfg_.delta0;
    s.theta = cfg_.theta0;
    return s;
  }

  // One full iteration (Steps 1-4).  Signals (SampleCapExceeded,
  // NumericalFailure, InvariantViolation) propagate to the caller with the
  // partial record left in `rec`.
  void step(TrustRegionState& s, IterationRecord& rec, RandomStream& stream) const {
    const auto& problem = oracle_.problem();
    rec.k = s.k;
    rec.delta = s.delta;
    rec.theta = s.theta;
    rec.cost_after = s.cost;
    rec.exact_f = problem.value(s.x);
    const auto exact_grad = problem.gradient(s.x);
    rec.exact_gradnorm = norm(exact_grad);
    rec.h_yk = h_value(s.y);

    const auto acc = choose_accuracy_variables(rec.h_yk, s.delta, s.k, cfg_,
                                               s.y.mode, s.y.N);
    rec.y_tilde = acc.y_tilde;
    rec.y_t = acc.y_t;
    rec.y_g = acc.y_g;
    rec.h_ytilde = h_value(acc.y_tilde);
    rec.h_yt = h_value(acc.y_t);
    rec.h_yg = h_value(acc.y_g);

    // Step 2: model estimates and the normalized step.
    const auto fdag = oracle_.value(s.x, acc.y_t, stream);
    charge(s, rec, fdag.samples_used);
    rec.fbar_dagger = fdag.value;

    const auto gest = oracle_.gradient(s.x, acc.y_g, stream);
    charge(s, rec, gest.samples_used);
    rec.gnorm = norm(gest.gradient);
    rec.exact_grad_err = diff_norm(exact_grad, gest.gradient);

    if (rec.gnorm < kZeroGradientFloor) {
      // The step direction is undefined; declare the iteration unsuccessful
      // and shrink the radius.
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
    rec.model_at_step = fdag.value - s.delta * rec.gnorm;
    rec.exact_f_trial = problem.value(trial);

    // Step 3: penalty parameter.
    const auto fstar = oracle_.value(s.x, acc.y_t, stream);
    charge(s, rec, fstar.samples_used);
    rec.fbar_star = fstar.value;
    rec.theta_t = update_penalty(s.theta, fdag.value, fstar.value, rec.h_yk,
                                 rec.h_ytilde, s.delta, rec.gnorm);

    // Step 4: acceptance test.
    const auto fp = oracle_.value(trial, acc.y_t, stream);
    charge(s, rec, fp.samples_used);
    rec.fbar_p = fp.value;
    rec.ared = compute_ared(rec.theta_t, fstar.value, fp.value, rec.h_yk, rec.h_yt);
    rec.pred_theta_t = compute_pred(rec.theta_t, fstar.value, rec.model_at_step,
                                    rec.h_yk, rec.h_ytilde);
    rec.success = acceptance_test(rec.ared, rec.pred_theta_t, rec.gnorm, s.delta,
                                  rec.theta_t, cfg_);
    if (rec.success) {
      s.x = std::move(trial);
      s.y = acc.y_t;
      s.delta = std::min(cfg_.gamma * s.delta, cfg_.delta_max);
      s.theta = rec.theta_t;
    } else {
      s.delta = s.delta / cfg_.gamma;
    }
    s.k += 1;
  }

  RunTrace run(std::uint64_t seed, bool collect_iterates = false) const {
    RandomStream stream(seed);
    RunTrace trace;
    const auto& problem = oracle_.problem();
    trace.solver = "irerm";
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
      } catch (const InvariantViolation&) {
        rec.aborted = true;
        trace.records.push_back(rec);
        trace.reason = Termination::invariant_violation;
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
  IrermConfig cfg_;
};

}  // namespace irerm
