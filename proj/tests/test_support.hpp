#pragma once

#include <cmath>

#include "expgrad/density.hpp"
#include "expgrad/random.hpp"

namespace expgrad::testing {

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).norm(); }

inline HermitianOperator diag(std::initializer_list<double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return HermitianOperator::diagonal(v);
}

inline RealVector vec(std::initializer_list<double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

/// Random traceless Hermitian direction with unit Frobenius norm.
inline HermitianOperator random_traceless(int dim, Rng& rng) {
  HermitianOperator w = random_hermitian(dim, rng);
  const double shift = w.matrix().trace().real() / dim;
  w -= shift * HermitianOperator::identity(dim);
  return w * (1.0 / w.matrix().norm());
}

}  // namespace expgrad::testing
