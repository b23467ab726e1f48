#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "irerm/record.hpp"
#include "irerm/solver_irerm.hpp"
#include "irerm/solver_storm.hpp"

namespace irerm {

// Hard invariant suite evaluated on recorded traces.  Comparisons allow a
// 1e-12 * max(1, |.|) slack where sqrt/ceil rounding makes exact equality
// unattainable; everything else is compared exactly.
struct CheckResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {
inline double slack(double ref) { return 1e-12 * std::max(1.0, std::abs(ref)); }

inline void fail(CheckResult& res, const RunTrace& trace, std::int64_t k,
                 const std::string& what) {
  std::ostringstream os;
  os << trace.solver << "_" << trace.variant << " " << trace.problem_id << " run "
     << trace.run_index << " seed " << trace.seed << " k=" << k << ": " << what;
  res.violations.push_back(os.str());
}

inline void check_radius_and_cost(const RunTrace& trace, double gamma,
                                  double delta_max, CheckResult& res) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& rec = trace.records[i];
    total += rec.samples_charged;
    if (rec.aborted) continue;
    if (!(rec.delta <= delta_max)) fail(res, trace, rec.k, "delta exceeds delta_max");
    if (!rec.zero_gradient &&
        std::abs(rec.pnorm - rec.delta) > slack(rec.delta))
      fail(res, trace, rec.k, "step norm differs from delta");
    const double next = i + 1 < trace.records.size() ? trace.records[i + 1].delta
                                                     : trace.final_state.delta;
    const double expected = rec.success ? std::min(gamma * rec.delta, delta_max)
                                        : rec.delta / gamma;
    if (next != expected) fail(res, trace, rec.k, "radius update off the discipline");
  }
  if (total != trace.final_state.cost)
    fail(res, trace, -1, "cost differs from the sum of per-iteration charges");
  if (trace.reason == Termination::budget) {
    const std::uint64_t last =
        trace.records.empty() ? 0 : trace.records.back().samples_charged;
    if (trace.final_state.cost > trace.budget + last)
      fail(res, trace, -1, "cost overshoots the budget by more than one iteration");
  }
}
}  // namespace detail

inline CheckResult check_trace(const RunTrace& trace, const IrermConfig& cfg) {
  CheckResult res;
  detail::check_radius_and_cost(trace, cfg.gamma, cfg.delta_max, res);
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& rec = trace.records[i];
    if (rec.aborted) continue;
    if (!(rec.theta >= cfg.theta_min))
      detail::fail(res, trace, rec.k, "theta fell below theta_min");
    const double theta_next = i + 1 < trace.records.size()
                                  ? trace.records[i + 1].theta
                                  : trace.final_state.theta;
    if (theta_next > rec.theta + detail::slack(rec.theta))
      detail::fail(res, trace, rec.k, "theta increased");
    if (!rec.zero_gradient) {
      if (rec.theta_t > rec.theta + detail::slack(rec.theta))
        detail::fail(res, trace, rec.k, "trial theta exceeds theta");
      const double bound = rec.theta_t * rec.delta * rec.gnorm;
      if (rec.pred_theta_t < bound - detail::slack(rec.pred_theta_t))
        detail::fail(res, trace, rec.k, "predicted reduction below theta*delta*gnorm");
      if (rec.success) {
        if (theta_next != rec.theta_t)
          detail::fail(res, trace, rec.k, "success did not adopt the trial theta");
        const double ared_bound =
            cfg.eta1 * cfg.eta2 * theta_next * rec.delta * rec.delta;
        if (rec.ared < ared_bound - detail::slack(rec.ared))
          detail::fail(res, trace, rec.k, "actual reduction below the success bound");
      }
    }
    if (cfg.variant == Variant::v1) {
      const double b1 = cfg.r * rec.h_yk;
      const double b2 = cfg.mu * std::min(rec.delta * rec.delta, rec.h_yk);
      const double b3 = cfg.mu * rec.delta;
      if (rec.h_ytilde > b1 + detail::slack(b1))
        detail::fail(res, trace, rec.k, "h(y~) violates the restoration bound");
      if (rec.h_yt > b2 + detail::slack(b2))
        detail::fail(res, trace, rec.k, "h(y^t) violates its accuracy bound");
      if (rec.h_yg > b3 + detail::slack(b3))
        detail::fail(res, trace, rec.k, "h(y^g) violates its accuracy bound");
    }
  }
  return res;
}

inline CheckResult check_trace(const RunTrace& trace, const StormConfig& cfg) {
  CheckResult res;
  detail::check_radius_and_cost(trace, cfg.gamma, cfg.delta_max, res);
  for (const auto& rec : trace.records) {
    if (rec.aborted || rec.zero_gradient) continue;
    const bool expect =
        rec.rho >= cfg.eta1 && rec.gnorm >= cfg.eta2 * rec.delta;
    if (rec.success != expect)
      detail::fail(res, trace, rec.k, "acceptance flag disagrees with the ratio test");
  }
  return res;
}

}  // namespace irerm
