#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "irerm/accuracy.hpp"

namespace irerm {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Termination {
  budget,
  max_iterations,
  sample_cap,
  numerical_failure,
  invariant_violation,
};

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::budget: return "budget";
    case Termination::max_iterations: return "kmax";
    case Termination::sample_cap: return "sample cap";
    case Termination::numerical_failure: return "numerical failure";
    case Termination::invariant_violation: return "invariant violation";
  }
  return "unknown";
}

struct TrustRegionState {
  std::vector<double> x;
  AccuracyLevel y;
  double delta = 1.0;
  double theta = 0.9;  // unused by the storm baseline
  std::int64_t k = 0;
  std::uint64_t cost = 0;
};

// Everything observed during one iteration.  The exact_* fields are
// diagnostics computed out of band; the solver never reads them and they are
// not charged to the cost counter.
struct IterationRecord {
  std::int64_t k = 0;
  double delta = kNaN;  // delta_k on entry
  double theta = kNaN;  // theta_k on entry

  AccuracyLevel y_tilde, y_t, y_g;
  double h_yk = kNaN, h_ytilde = kNaN, h_yt = kNaN, h_yg = kNaN;

  double fbar_dagger = kNaN, fbar_star = kNaN, fbar_p = kNaN;
  double gnorm = kNaN, pnorm = kNaN, model_at_step = kNaN;
  double pred_theta_t = kNaN, theta_t = kNaN, ared = kNaN;
  double rho = kNaN;  // storm acceptance ratio

  bool success = false;
  bool zero_gradient = false;
  bool aborted = false;  // iteration cut short by a terminating signal

  std::uint64_t samples_charged = 0;
  std::uint64_t cost_after = 0;

  double exact_f = kNaN;         // f(x_k)
  double exact_f_trial = kNaN;   // f(x_k + p_k)
  double exact_gradnorm = kNaN;  // ||grad f(x_k)||
  double exact_grad_err = kNaN;  // ||grad f(x_k) - g_k||
};

struct RunTrace {
  std::string solver;   // "irerm" | "storm"
  std::string variant;  // "v1" | "v2"
  std::string problem_id;
  int n = 0, m = 0;
  int run_index = 0;
  std::uint64_t seed = 0;
  double sigma = 0.0;
  std::uint64_t budget = 0;
  std::int64_t kmax = 0;

  std::vector<IterationRecord> records;
  TrustRegionState final_state;
  Termination reason = Termination::budget;
  double final_exact_f = kNaN;
  double final_exact_gradnorm = kNaN;

  // Iterate snapshots x_0, ..., x_K; populated only when requested.
  std::vector<std::vector<double>> iterates;
};

}  // namespace irerm
