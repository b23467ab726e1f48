#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace irerm {

// The accuracy (restoration) variable y.  Two estimator families are
// supported: sample averaging of an expectation objective, where
// y in [0,1], h(y) = sqrt(y) and p(y) = ceil(1/y) samples are drawn, and
// finite-sum subsampling, where y in {1,...,N} is the subsample size and
// h(y) = sqrt(N/y) for y < N, h(N) = 0.  In both families h(y) = 0 marks an
// exact evaluation.
enum class AccuracyMode { expectation, finite_sum };

struct AccuracyLevel {
  double y = 1.0;
  AccuracyMode mode = AccuracyMode::expectation;
  std::int64_t N = 0;  // finite-sum size; unused in expectation mode

  // Set when the level was derived from a sample count, so that
  // samples_for() inverts exactly despite the rounding in y = 1/p.
  std::int64_t cached_samples = -1;

  bool exact() const {
    return mode == AccuracyMode::expectation ? y == 0.0
                                             : static_cast<std::int64_t>(y) == N;
  }
};

inline void validate(const AccuracyLevel& a) {
  if (a.mode == AccuracyMode::expectation) {
    if (!(a.y >= 0.0 && a.y <= 1.0))
      throw std::domain_error("accuracy level: expectation mode needs y in [0,1]");
  } else {
    if (a.N < 1) throw std::domain_error("accuracy level: finite-sum needs N >= 1");
    const double yi = std::floor(a.y);
    if (!(yi == a.y && yi >= 1.0 && yi <= static_cast<double>(a.N)))
      throw std::domain_error("accuracy level: finite-sum needs integer y in {1,...,N}");
  }
}

// Infeasibility measure h(y); nonnegative, zero exactly at exact levels.
inline double h_value(const AccuracyLevel& a) {
  validate(a);
  if (a.mode == AccuracyMode::expectation) return std::sqrt(a.y);
  const auto y = static_cast<std::int64_t>(a.y);
  if (y == a.N) return 0.0;
  return std::sqrt(static_cast<double>(a.N) / static_cast<double>(y));
}

inline double h_upper_bound(AccuracyMode mode, std::int64_t N = 0) {
  return mode == AccuracyMode::expectation ? 1.0 : std::sqrt(static_cast<double>(N));
}

// Cheapest level with h(y) <= bound: largest admissible y in expectation
// mode, smallest subsample in finite-sum mode.  bound = 0 forces the exact
// level.
inline AccuracyLevel level_for_h_bound(double bound, AccuracyMode mode,
                                       std::int64_t N = 0) {
  if (!(bound >= 0.0)) throw std::domain_error("level_for_h_bound: bound must be >= 0");
  AccuracyLevel a;
  a.mode = mode;
  a.N = N;
  if (mode == AccuracyMode::expectation) {
    a.y = bound >= 1.0 ? 1.0 : bound * bound;
    // sqrt(bound^2) may land one ulp above bound; nudge down so that
    // h(level_for_h_bound(b)) <= b holds exactly.
    while (a.y > 0.0 && std::sqrt(a.y) > bound)
      a.y = std::nextafter(a.y, 0.0);
    return a;
  }
  if (N < 1) throw std::domain_error("level_for_h_bound: finite-sum needs N >= 1");
  if (bound == 0.0) {
    a.y = static_cast<double>(N);
    return a;
  }
  const double req = std::ceil(static_cast<double>(N) / (bound * bound));
  a.y = req >= static_cast<double>(N) ? static_cast<double>(N) : req;
  while (a.y < static_cast<double>(N) && h_value(a) > bound) a.y += 1.0;
  return a;
}

// Level whose estimator draws exactly `samples` realizations (expectation
// mode: y = 1/samples, the unique inverse of p(y) = ceil(1/y) on integers).
inline AccuracyLevel level_from_samples(std::int64_t samples,
                                        AccuracyMode mode = AccuracyMode::expectation,
                                        std::int64_t N = 0) {
  if (samples < 1) throw std::domain_error("level_from_samples: samples must be >= 1");
  AccuracyLevel a;
  a.mode = mode;
  a.N = N;
  if (mode == AccuracyMode::expectation) {
    a.y = 1.0 / static_cast<double>(samples);
    a.cached_samples = samples;
  } else {
    if (samples > N) throw std::domain_error("level_from_samples: samples must be <= N");
    a.y = static_cast<double>(samples);
  }
  return a;
}

// Sample count p(y).  Exact levels carry no sample count; callers take the
// exact-evaluation branch instead.  Saturates at int64 max so that callers
// can test against a per-call cap without overflow.
inline std::int64_t samples_for(const AccuracyLevel& a) {
  validate(a);
  if (a.mode == AccuracyMode::finite_sum) return static_cast<std::int64_t>(a.y);
  if (a.y == 0.0) throw std::domain_error("samples_for: y = 0 is an exact evaluation");
  if (a.cached_samples >= 1) return a.cached_samples;
  const double q = std::ceil(1.0 / a.y);
  if (q >= 9.0e18) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(q);
}

// Accuracy-versus-probability contract: requesting |estimate - exact| <= rho
// with probability >= alpha under a variance bound V.
struct ProbabilisticAccuracySpec {
  double alpha;  // probability level in (0, 1]
  double rho;    // accuracy radius > 0
  double V;      // variance bound > 0
};

// Cheapest level whose sample count meets the Chebyshev bound
// ceil(V / ((1-alpha) rho^2)); clamped to the exact level when the bound
// exceeds N in finite-sum mode.
inline AccuracyLevel required_level_for_probability(const ProbabilisticAccuracySpec& s,
                                                    AccuracyMode mode,
                                                    std::int64_t N = 0) {
  if (!(s.alpha > 0.0 && s.alpha <= 1.0))
    throw std::domain_error("required_level_for_probability: alpha must be in (0,1]");
  if (!(s.rho > 0.0) || !(s.V > 0.0))
    throw std::domain_error("required_level_for_probability: rho and V must be > 0");
  if (s.alpha == 1.0)
    throw std::domain_error("required_level_for_probability: exact evaluation required");
  const double raw = s.V / ((1.0 - s.alpha) * s.rho * s.rho);
  const double q = std::max(1.0, std::ceil(raw));
  if (mode == AccuracyMode::finite_sum) {
    if (N < 1) throw std::domain_error("required_level_for_probability: N >= 1 needed");
    AccuracyLevel a;
    a.mode = mode;
    a.N = N;
    a.y = q >= static_cast<double>(N) ? static_cast<double>(N) : q;
    return a;
  }
  if (q >= 9.0e18)
    throw std::domain_error("required_level_for_probability: sample bound overflows");
  return level_from_samples(static_cast<std::int64_t>(q), mode, N);
}

}  // namespace irerm
