#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace expgrad {

/// log(sum_i exp(x_i)) shifted by the maximum; -inf for an empty or all -inf input.
inline double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() == 0) return -std::numeric_limits<double>::infinity();
  const double top = x.maxCoeff();
  if (!std::isfinite(top)) return top;
  return top + std::log((x.array() - top).exp().sum());
}

/// e^x - 1 - x without cancellation near zero.
inline double exp_remainder2(double x) {
  if (std::abs(x) < 0.5) {
    double term = x * x / 2.0;
    double sum = term;
    for (int n = 3; n < 30; ++n) {
      term *= x / n;
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::expm1(x) - x;
}

/// e^x (x - 1) + 1 = sum_{n>=2} (n-1) x^n / n!, stable near zero.
inline double exp_ratio_denominator(double x) {
  if (std::abs(x) < 0.5) {
    double power_over_factorial = x * x / 2.0;
    double sum = power_over_factorial;
    for (int n = 3; n < 30; ++n) {
      power_over_factorial *= x / n;
      const double term = (n - 1) * power_over_factorial;
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::exp(x) * (x - 1.0) + 1.0;
}

/// First divided difference of exp: (e^a - e^b) / (a - b), e^a at a == b.
inline double exp_divided_difference(double a, double b) {
  const double lo = std::min(a, b);
  const double t = std::abs(a - b);
  if (t == 0.0) return std::exp(lo);
  if (t > 1.0) return (std::exp(std::max(a, b)) - std::exp(lo)) / t;
  return std::exp(lo) * std::expm1(t) / t;
}

/// Second divided difference of exp at three nodes.
inline double exp_divided_difference(double a, double b, double c) {
  double x[3] = {a, b, c};
  std::sort(x, x + 3);
  const double spread = x[2] - x[0];
  if (spread > 1e-2) {
    return (exp_divided_difference(x[1], x[2]) - exp_divided_difference(x[0], x[1])) / spread;
  }
  // e^m sum_n h_n(y) / (n+2)!, h_n the complete homogeneous symmetric polynomials of y = x - m.
  const double m = (x[0] + x[1] + x[2]) / 3.0;
  const double y0 = x[0] - m, y1 = x[1] - m, y2 = x[2] - m;
  double sum = 0.0;
  double factorial = 2.0;
  for (int n = 0; n <= 10; ++n) {
    double h = 0.0;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; i + j <= n; ++j) {
        h += std::pow(y0, i) * std::pow(y1, j) * std::pow(y2, n - i - j);
      }
    }
    sum += h / factorial;
    factorial *= (n + 3);
  }
  return std::exp(m) * sum;
}

}  // namespace expgrad
