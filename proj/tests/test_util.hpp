#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "irerm/problems.hpp"
#include "irerm/rng.hpp"

namespace testutil {

// Central-difference gradient of the exact objective; the independent oracle
// for the analytic gradients.
inline std::vector<double> fd_gradient(const irerm::LeastSquaresProblem& p,
                                       std::span<const double> x, double h = 1e-6) {
  std::vector<double> g(x.size()), xp(x.begin(), x.end()), xm(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + h;
    xm[i] = xi - h;
    g[i] = (p.value(xp) - p.value(xm)) / (2.0 * h);
    xp[i] = xi;
    xm[i] = xi;
  }
  return g;
}

inline double norm(std::span<const double> v) {
  double s = 0.0;
  for (double vi : v) s += vi * vi;
  return std::sqrt(s);
}

inline double diff_norm(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Max over sampled points of ||g_analytic - g_fd|| / max(1, ||g_analytic||),
// with x drawn uniformly from [-box, box]^n.
inline double max_gradient_error(const irerm::LeastSquaresProblem& p, int points,
                                 double box, std::uint64_t seed) {
  irerm::RandomStream stream(seed);
  std::vector<double> x(static_cast<std::size_t>(p.dim()));
  double worst = 0.0;
  for (int t = 0; t < points; ++t) {
    for (auto& xi : x) xi = stream.next_symmetric(box);
    const auto ga = p.gradient(x);
    const auto gf = fd_gradient(p, x);
    worst = std::max(worst, diff_norm(ga, gf) / std::max(1.0, norm(ga)));
  }
  return worst;
}

// Separable quadratic toy: residuals x_i - 1.
class ToyQuadratic final : public irerm::LeastSquaresProblem {
 public:
  explicit ToyQuadratic(int n = 10) : n_(n) {}
  const char* id() const override { return "toy"; }
  const char* name() const override { return "separable quadratic"; }
  int dim() const override { return n_; }
  int residual_dim() const override { return n_; }
  std::vector<double> start() const override {
    return std::vector<double>(static_cast<std::size_t>(n_), 0.0);
  }
  void residuals(std::span<const double> x, std::span<double> r) const override {
    for (int i = 0; i < n_; ++i) r[i] = x[i] - 1.0;
  }
  void add_jt_product(std::span<const double> x, std::span<const double> w,
                      std::span<double> g) const override {
    (void)x;
    for (int i = 0; i < n_; ++i) g[i] += w[i];
  }

 private:
  int n_;
};

}  // namespace testutil
