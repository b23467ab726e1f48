#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "irerm/accuracy.hpp"
#include "irerm/problems.hpp"
#include "irerm/rng.hpp"

namespace irerm {

// Multiplicative noise on the residuals: each sample perturbs residual i by
// an independent uniform factor (1 + xi_i), xi_i ~ U[-sigma, sigma).
// sigma = 0 means every draw is exactly zero, i.e. an exact oracle.
struct NoiseSpec {
  double sigma = 0.1;
  std::uint64_t base_seed = 0;
};

struct ValueEstimate {
  double value = 0.0;
  std::uint64_t samples_used = 1;
  AccuracyLevel level;
};

struct GradientEstimate {
  std::vector<double> gradient;
  std::uint64_t samples_used = 1;
  AccuracyLevel level;
};

// Control-flow signals handled by the solver driver.
struct SampleCapExceeded {
  std::int64_t requested;
};
struct NumericalFailure {
  const char* what;
};
struct InvariantViolation {
  const char* what;
};

// Randomized evaluations of f(x) = sum_i r_i(x)^2 under multiplicative
// residual noise, averaged over p(y) independent realizations:
//   value sample:    sum_i ((1 + xi_i) r_i(x))^2
//   gradient sample: sum_i 2 (1 + xi_i)^2 r_i(x) grad r_i(x)
// Exact evaluations (y = 0 or sigma = 0) bypass sampling and charge one
// bookkeeping unit.
class MultiplicativeNoiseOracle {
 public:
  static constexpr std::int64_t kDefaultSampleCap = 10'000'000;

  MultiplicativeNoiseOracle(const LeastSquaresProblem& problem, NoiseSpec noise,
                            std::int64_t sample_cap = kDefaultSampleCap)
      : problem_(problem), noise_(noise), sample_cap_(sample_cap) {
    if (!(noise_.sigma >= 0.0)) throw std::domain_error("noise sigma must be >= 0");
    if (sample_cap_ < 1) throw std::domain_error("sample cap must be >= 1");
  }

  const LeastSquaresProblem& problem() const { return problem_; }
  double sigma() const { return noise_.sigma; }
  std::int64_t sample_cap() const { return sample_cap_; }

  double exact_value(std::span<const double> x) const { return problem_.value(x); }
  std::vector<double> exact_gradient(std::span<const double> x) const {
    return problem_.gradient(x);
  }

  ValueEstimate value(std::span<const double> x, const AccuracyLevel& level,
                      RandomStream& stream) const {
    validate(level);
    const int m = problem_.residual_dim();
    std::vector<double> r(static_cast<std::size_t>(m));
    problem_.residuals(x, r);
    ValueEstimate out;
    out.level = level;
    if (noise_.sigma == 0.0 || level.exact()) {
      out.value = squared_sum(r);
      out.samples_used = 1;
    } else {
      const std::int64_t p = checked_samples(level);
      double acc = 0.0;
      for (std::int64_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
          const double t = (1.0 + stream.next_symmetric(noise_.sigma)) * r[i];
          s += t * t;
        }
        acc += s;
      }
      out.value = acc / static_cast<double>(p);
      out.samples_used = static_cast<std::uint64_t>(p);
    }
    if (!std::isfinite(out.value)) throw NumericalFailure{"non-finite function estimate"};
    return out;
  }

  GradientEstimate gradient(std::span<const double> x, const AccuracyLevel& level,
                            RandomStream& stream) const {
    validate(level);
    const int m = problem_.residual_dim();
    const int n = problem_.dim();
    std::vector<double> r(static_cast<std::size_t>(m));
    problem_.residuals(x, r);
    GradientEstimate out;
    out.level = level;
    out.gradient.assign(static_cast<std::size_t>(n), 0.0);
    if (noise_.sigma == 0.0 || level.exact()) {
      for (double& ri : r) ri *= 2.0;
      problem_.add_jt_product(x, r, out.gradient);
      out.samples_used = 1;
    } else {
      const std::int64_t p = checked_samples(level);
      // mean_j sum_i 2 (1+xi_i^j)^2 r_i grad r_i  ==  J^T w with
      // w_i = 2 r_i mean_j (1+xi_i^j)^2, so accumulate the scale factors.
      std::vector<double> scale(static_cast<std::size_t>(m), 0.0);
      for (std::int64_t j = 0; j < p; ++j) {
        for (int i = 0; i < m; ++i) {
          const double u = 1.0 + stream.next_symmetric(noise_.sigma);
          scale[i] += u * u;
        }
      }
      std::vector<double> w(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i)
        w[i] = 2.0 * r[i] * (scale[i] / static_cast<double>(p));
      problem_.add_jt_product(x, w, out.gradient);
      out.samples_used = static_cast<std::uint64_t>(p);
    }
    for (double gi : out.gradient)
      if (!std::isfinite(gi)) throw NumericalFailure{"non-finite gradient estimate"};
    return out;
  }

 private:
  static double squared_sum(std::span<const double> r) {
    double s = 0.0;
    for (double ri : r) s += ri * ri;
    return s;
  }

  std::int64_t checked_samples(const AccuracyLevel& level) const {
    const std::int64_t p = samples_for(level);
    if (p > sample_cap_) throw SampleCapExceeded{p};
    return p;
  }

  const LeastSquaresProblem& problem_;
  NoiseSpec noise_;
  std::int64_t sample_cap_;
};

// Subsampling estimators for finite-sum objectives: draw an index set of
// cardinality y uniformly without replacement and average over it.  y = N
// returns the exact mean and charges one bookkeeping unit.
inline std::vector<std::int64_t> draw_subsample(std::int64_t N, std::int64_t y,
                                                RandomStream& stream) {
  std::vector<std::int64_t> idx(static_cast<std::size_t>(N));
  std::iota(idx.begin(), idx.end(), std::int64_t{0});
  for (std::int64_t i = 0; i < y; ++i) {
    const auto j = i + static_cast<std::int64_t>(
                           stream.next_below(static_cast<std::uint64_t>(N - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(y));
  return idx;
}

inline ValueEstimate subsample_value(const FiniteSumProblem& problem,
                                     std::span<const double> x,
                                     const AccuracyLevel& level, RandomStream& stream) {
  validate(level);
  if (level.mode != AccuracyMode::finite_sum || level.N != problem.terms())
    throw std::domain_error("subsample_value: level does not match problem");
  const std::int64_t N = problem.terms();
  const auto y = static_cast<std::int64_t>(level.y);
  ValueEstimate out;
  out.level = level;
  double acc = 0.0;
  if (y == N) {
    for (std::int64_t i = 0; i < N; ++i) acc += problem.term_value(i, x);
    out.value = acc / static_cast<double>(N);
    out.samples_used = 1;
  } else {
    const auto idx = draw_subsample(N, y, stream);
    for (auto i : idx) acc += problem.term_value(i, x);
    out.value = acc / static_cast<double>(y);
    out.samples_used = static_cast<std::uint64_t>(y);
  }
  if (!std::isfinite(out.value)) throw NumericalFailure{"non-finite subsample estimate"};
  return out;
}

inline GradientEstimate subsample_gradient(const FiniteSumProblem& problem,
                                           std::span<const double> x,
                                           const AccuracyLevel& level,
                                           RandomStream& stream) {
  validate(level);
  if (level.mode != AccuracyMode::finite_sum || level.N != problem.terms())
    throw std::domain_error("subsample_gradient: level does not match problem");
  const std::int64_t N = problem.terms();
  const auto y = static_cast<std::int64_t>(level.y);
  GradientEstimate out;
  out.level = level;
  out.gradient.assign(static_cast<std::size_t>(problem.dim()), 0.0);
  if (y == N) {
    for (std::int64_t i = 0; i < N; ++i) problem.add_term_gradient(i, x, out.gradient);
    for (double& gi : out.gradient) gi /= static_cast<double>(N);
    out.samples_used = 1;
  } else {
    const auto idx = draw_subsample(N, y, stream);
    for (auto i : idx) problem.add_term_gradient(i, x, out.gradient);
    for (double& gi : out.gradient) gi /= static_cast<double>(y);
    out.samples_used = static_cast<std::uint64_t>(y);
  }
  for (double gi : out.gradient)
    if (!std::isfinite(gi)) throw NumericalFailure{"non-finite subsample gradient"};
  return out;
}

}  // namespace irerm
