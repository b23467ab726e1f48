#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace irerm {

// Nonlinear least squares: minimize f(x) = sum_i r_i(x)^2 over R^n.
// Implementations provide the residual vector and an accumulating
// Jacobian-transpose product; value and gradient (2 J^T r) derive from those.
class LeastSquaresProblem {
 public:
  virtual ~LeastSquaresProblem() = default;

  virtual const char* id() const = 0;
  virtual const char* name() const = 0;
  virtual int dim() const = 0;           // n
  virtual int residual_dim() const = 0;  // m
  virtual std::vector<double> start() const = 0;

  // r must have length residual_dim().
  virtual void residuals(std::span<const double> x, std::span<double> r) const = 0;

  // g += sum_i w_i * grad r_i(x); g is not zeroed here.
  virtual void add_jt_product(std::span<const double> x, std::span<const double> w,
                              std::span<double> g) const = 0;

  double value(std::span<const double> x) const {
    std::vector<double> r(static_cast<std::size_t>(residual_dim()));
    residuals(x, r);
    double s = 0.0;
    for (double ri : r) s += ri * ri;
    return s;
  }

  void gradient(std::span<const double> x, std::span<double> g) const {
    std::vector<double> r(static_cast<std::size_t>(residual_dim()));
    residuals(x, r);
    for (double& ri : r) ri *= 2.0;
    for (double& gi : g) gi = 0.0;
    add_jt_product(x, r, g);
  }

  std::vector<double> gradient(std::span<const double> x) const {
    std::vector<double> g(static_cast<std::size_t>(dim()));
    gradient(x, g);
    return g;
  }

  double gradient_norm(std::span<const double> x) const {
    const auto g = gradient(x);
    double s = 0.0;
    for (double gi : g) s += gi * gi;
    return std::sqrt(s);
  }
};

// Finite-sum objective f(x) = (1/N) sum_i phi_i(x), used by the subsampling
// estimators.
class FiniteSumProblem {
 public:
  virtual ~FiniteSumProblem() = default;
  virtual int dim() const = 0;
  virtual std::int64_t terms() const = 0;  // N
  virtual double term_value(std::int64_t i, std::span<const double> x) const = 0;
  // g += grad phi_i(x)
  virtual void add_term_gradient(std::int64_t i, std::span<const double> x,
                                 std::span<double> g) const = 0;
};

}  // namespace irerm
