#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "irerm/problems.hpp"
#include "irerm/record.hpp"
#include "irerm/rng.hpp"
#include "irerm/solver_irerm.hpp"

namespace irerm::theory {

// Constants for the post-hoc diagnostics.  kappa bounds the estimate errors
// that make an iteration "true"; the remaining constants feed the Lyapunov
// decrease and hitting-time ceilings.  The gradient of f is assumed
// Lipschitz with constant 2L.
struct TheoryParams {
  double kappa = 0.0;
  double zeta = 0.0;
  double v = 0.0;
  double Sigma = 0.0;
  double pi = 0.0;
  double L = 0.0;
  double epsilon = 0.0;
  double f_low = 0.0;
  double h_up = 1.0;
  double mu_bar_up = 1.0;

  double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0;
  double lambda = 0.0;          // log(gamma)
  double sigma_decrease = 0.0;  // expected Lyapunov decrease rate
  double delta_dagger = 0.0;    // radius below which true iterations succeed
  double delta_eps = 0.0;       // epsilon / xi, snapped down to the radius lattice
  double xi = 0.0;              // scale factor before lattice snapping
  double xi_effective = 0.0;    // epsilon / delta_eps after snapping
  std::int64_t j_eps = 0;
  bool delta_eps_snapped = false;
  bool pi_ok = false;

  static double kappa_upper_bound(const IrermConfig& cfg) {
    return std::min((1.0 - cfg.r - cfg.theta_min) / (2.0 * cfg.theta_min),
                    cfg.eta1 * cfg.eta2 / 2.0);
  }

  static TheoryParams derive(const IrermConfig& cfg, double L, double epsilon,
                             double pi, double kappa = -1.0, double mu_bar_up = 1.0,
                             double f_low = 0.0, double h_up = 1.0) {
    if (!(L > 0.0)) throw std::invalid_argument("theory: L > 0 required");
    if (!(epsilon > 0.0)) throw std::invalid_argument("theory: epsilon > 0 required");
    TheoryParams p;
    p.L = L;
    p.epsilon = epsilon;
    p.pi = pi;
    p.f_low = f_low;
    p.h_up = h_up;
    p.mu_bar_up = mu_bar_up;
    p.Sigma = -f_low + h_up;

    const double kap_up = kappa_upper_bound(cfg);
    p.kappa = kappa > 0.0 ? kappa : 0.9 * kap_up;
    if (!(p.kappa > 0.0 && p.kappa < kap_up))
      throw std::invalid_argument("theory: kappa violates its upper bound");

    const double zeta_low =
        p.kappa + std::max({cfg.eta2,
                            (cfg.theta0 * (3.0 * p.kappa + L) + p.kappa * mu_bar_up) /
                                (cfg.theta_min * (1.0 - cfg.eta1)),
                            p.kappa * (2.0 + cfg.eta1) / cfg.eta1});
    p.zeta = zeta_low * (1.0 + 1e-6);

    p.C1 = cfg.theta_min *
           (cfg.eta1 * (1.0 - p.kappa / p.zeta) - 2.0 * p.kappa / p.zeta);
    p.C2 = 1.0 + (L + p.kappa * mu_bar_up) / p.zeta;
    p.C3 = cfg.theta_min * (cfg.eta1 * cfg.eta2 - 2.0 * p.kappa);
    p.C4 = L + p.zeta + p.kappa * mu_bar_up;
    if (!(p.C1 > 0.0 && p.C3 > 0.0))
      throw std::invalid_argument("theory: C1, C3 must be positive");

    const double g2 = cfg.gamma * cfg.gamma;
    const double M = std::max(4.0 * g2 / (p.zeta * p.C1), 2.0 * g2 / p.C3);
    p.v = M / (1.0 + M);
    p.lambda = std::log(cfg.gamma);
    p.sigma_decrease = 0.5 * (1.0 - p.v) * (g2 - 1.0) / g2;

    p.delta_dagger = std::min({epsilon / (2.0 * p.kappa), epsilon / (2.0 * cfg.eta2),
                               cfg.theta_min * epsilon * (1.0 - cfg.eta1) /
                                   (2.0 * cfg.theta0 * (3.0 * p.kappa + L))});

    p.xi = std::max({2.0 * p.kappa, 2.0 * cfg.eta2,
                     2.0 * cfg.theta0 * (3.0 * p.kappa + L) /
                         (cfg.theta_min * (1.0 - cfg.eta1))});
    // Snap delta_eps down onto the radius lattice gamma^j delta0, j <= 0.
    const double raw = epsilon / p.xi;
    double j = std::floor(std::log(raw / cfg.delta0) / p.lambda);
    if (j > 0.0) j = 0.0;
    p.j_eps = static_cast<std::int64_t>(j);
    p.delta_eps = cfg.delta0 * std::pow(cfg.gamma, j);
    p.delta_eps_snapped = p.delta_eps != raw;
    p.xi_effective = epsilon / p.delta_eps;

    const double pi_bound2 =
        (g2 - 1.0) / (2.0 * (g2 * g2 - 1.0) + 2.0 * g2 * p.C4 * M);
    p.pi_ok = pi > 0.5 && pi < 1.0 && (pi - 0.5) / (1.0 - pi) >= p.C2 / p.C1 &&
              (1.0 - pi) <= pi_bound2;
    return p;
  }
};

// The four accuracy events of a true iteration and the +/-1 walk variable.
struct TruthLabel {
  bool g1 = false;  // |f(x_k) - fbar_dagger| <= kappa min{delta^2, h(y_k)}
  bool g2 = false;  // |f(x_k) - fbar_star|   <= kappa min{delta^2, h(y_k)}
  bool g3 = false;  // ||grad f(x_k) - g_k||  <= kappa delta
  bool g4 = false;  // |f(x_k + p_k) - fbar_p| <= kappa delta^2
  bool true_iteration() const { return g1 && g2 && g3 && g4; }
  int w() const { return true_iteration() ? 1 : -1; }
};

inline TruthLabel classify_true(const IterationRecord& rec, double kappa) {
  if (std::isnan(rec.exact_f) || std::isnan(rec.exact_gradnorm) ||
      std::isnan(rec.h_yk))
    throw std::invalid_argument("classify_true: record is missing exact diagnostics");
  const double d2 = rec.delta * rec.delta;
  const double tol_f = kappa * std::min(d2, rec.h_yk);
  TruthLabel t;
  t.g1 = std::abs(rec.exact_f - rec.fbar_dagger) <= tol_f;
  t.g2 = std::abs(rec.exact_f - rec.fbar_star) <= tol_f;
  t.g3 = rec.exact_grad_err <= kappa * rec.delta;
  t.g4 = std::abs(rec.exact_f_trial - rec.fbar_p) <= kappa * d2;
  return t;
}

// Walk variable driven by the truth events: W_0 = 1 and
// W_{k+1} = 2(1(G_k) - 1/2) in {-1, +1}.
inline std::vector<int> w_sequence(const RunTrace& trace, double kappa) {
  std::vector<int> w{1};
  for (const auto& rec : trace.records) {
    if (rec.aborted) break;
    const bool all_four =
        !rec.zero_gradient && classify_true(rec, kappa).true_iteration();
    w.push_back(all_four ? 1 : -1);
  }
  return w;
}

inline double lyapunov(double f, double h, double theta, double delta,
                       const TheoryParams& p) {
  return p.v * (theta * f + (1.0 - theta) * h + theta * p.Sigma) +
         (1.0 - p.v) * delta * delta;
}

namespace detail {
struct StatePoint {
  double f, h, theta, delta;
};

// State tuples (f, h, theta, delta) at k = 0, ..., K; transitions of aborted
// records never happened, so the sequence stops before them.
inline std::vector<StatePoint> state_sequence(const RunTrace& trace) {
  std::vector<StatePoint> seq;
  for (const auto& rec : trace.records) {
    if (rec.aborted) break;
    seq.push_back({rec.exact_f, rec.h_yk, rec.theta, rec.delta});
  }
  const auto& fs = trace.final_state;
  seq.push_back({trace.final_exact_f, h_value(fs.y), fs.theta, fs.delta});
  return seq;
}
}  // namespace detail

struct LyapunovReport {
  std::size_t transitions = 0;
  double overall_mean = 0.0;  // mean of (psi_{k+1} - psi_k) / delta_k^2
  bool overall_negative = false;
  double mean_true_success = 0.0, mean_true_unsuccess = 0.0;
  double mean_false_success = 0.0, mean_false_unsuccess = 0.0;
  std::size_t n_true_success = 0, n_true_unsuccess = 0;
  std::size_t n_false_success = 0, n_false_unsuccess = 0;
  std::size_t sigma_condition_violations = 0;
};

inline LyapunovReport lyapunov_decrease_report(const RunTrace& trace,
                                               const TheoryParams& p) {
  LyapunovReport rep;
  const auto seq = detail::state_sequence(trace);
  if (seq.size() < 2) return rep;
  double sum = 0.0;
  double s_ts = 0.0, s_tu = 0.0, s_fs = 0.0, s_fu = 0.0;
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    const auto& a = seq[k];
    const auto& b = seq[k + 1];
    if (a.f - a.h + p.Sigma < 0.0) ++rep.sigma_condition_violations;
    const double psi_a = lyapunov(a.f, a.h, a.theta, a.delta, p);
    const double psi_b = lyapunov(b.f, b.h, b.theta, b.delta, p);
    const double scaled = (psi_b - psi_a) / (a.delta * a.delta);
    sum += scaled;
    const auto& rec = trace.records[k];
    const bool is_true =
        !rec.zero_gradient && classify_true(rec, p.kappa).true_iteration();
    if (is_true && rec.success) {
      s_ts += scaled;
      ++rep.n_true_success;
    } else if (is_true) {
      s_tu += scaled;
      ++rep.n_true_unsuccess;
    } else if (rec.success) {
      s_fs += scaled;
      ++rep.n_false_success;
    } else {
      s_fu += scaled;
      ++rep.n_false_unsuccess;
    }
  }
  rep.transitions = seq.size() - 1;
  rep.overall_mean = sum / static_cast<double>(rep.transitions);
  rep.overall_negative = rep.overall_mean < 0.0;
  if (rep.n_true_success) rep.mean_true_success = s_ts / rep.n_true_success;
  if (rep.n_true_unsuccess) rep.mean_true_unsuccess = s_tu / rep.n_true_unsuccess;
  if (rep.n_false_success) rep.mean_false_success = s_fs / rep.n_false_success;
  if (rep.n_false_unsuccess) rep.mean_false_unsuccess = s_fu / rep.n_false_unsuccess;
  return rep;
}

// First k with ||grad f(x_k)|| <= eps, scanning the iterate sequence
// including the final state; nullopt when the threshold is never hit.
inline std::optional<std::int64_t> hitting_time(const RunTrace& trace, double eps) {
  std::int64_t k = 0;
  for (const auto& rec : trace.records) {
    if (rec.aborted) break;
    if (!std::isnan(rec.exact_gradnorm) && rec.exact_gradnorm <= eps) return k;
    ++k;
  }
  if (trace.final_exact_gradnorm <= eps) return k;
  return std::nullopt;
}

// Iterations that are true and have delta within the bound that provably
// forces success, yet failed; each entry is a falsification candidate.
inline std::vector<std::int64_t> lemma_succ_check(const RunTrace& trace,
                                                  const TheoryParams& p,
                                                  const IrermConfig& cfg) {
  std::vector<std::int64_t> violations;
  for (const auto& rec : trace.records) {
    if (rec.aborted || rec.zero_gradient) continue;
    if (!classify_true(rec, p.kappa).true_iteration()) continue;
    const double bound =
        std::min(rec.gnorm / cfg.eta2,
                 cfg.theta_min * (1.0 - cfg.eta1) * rec.gnorm /
                     (cfg.theta0 * (3.0 * p.kappa + p.L) + cfg.mu));
    if (rec.delta <= bound && !rec.success) violations.push_back(rec.k);
  }
  return violations;
}

// Hitting-time ceiling E[K_eps] <= pi/(2pi-1) * psi_0 xi^2 / (sigma eps^2) + 1.
inline double expected_hitting_bound(const TheoryParams& p, double psi0) {
  return p.pi / (2.0 * p.pi - 1.0) * psi0 * p.xi_effective * p.xi_effective /
             (p.sigma_decrease * p.epsilon * p.epsilon) +
         1.0;
}

// Sampled estimate of L (gradient Lipschitz constant 2L): max of
// ||grad f(a) - grad f(b)|| / ||a - b|| over random pairs near the recorded
// iterates estimates 2L; the safety doubling cancels the division by two.
inline double estimate_lipschitz(const LeastSquaresProblem& problem,
                                 const std::vector<std::vector<double>>& iterates,
                                 RandomStream& stream, int pairs = 1000,
                                 double radius = 0.5) {
  if (iterates.empty())
    throw std::invalid_argument("estimate_lipschitz: no iterates recorded");
  const int n = problem.dim();
  std::vector<double> a(static_cast<std::size_t>(n)), b(a), ga(a), gb(a);
  double best = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const auto& x =
        iterates[stream.next_below(static_cast<std::uint64_t>(iterates.size()))];
    double dist2 = 0.0;
    for (int i = 0; i < n; ++i) {
      a[i] = x[i] + stream.next_symmetric(radius);
      b[i] = x[i] + stream.next_symmetric(radius);
      const double d = a[i] - b[i];
      dist2 += d * d;
    }
    const double dist = std::sqrt(dist2);
    if (dist < 1e-12) continue;
    problem.gradient(a, ga);
    problem.gradient(b, gb);
    double diff2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = ga[i] - gb[i];
      diff2 += d * d;
    }
    best = std::max(best, std::sqrt(diff2) / dist);
  }
  return best;
}

}  // namespace irerm::theory
