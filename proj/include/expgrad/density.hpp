#pragma once

#include "expgrad/hermitian.hpp"

namespace expgrad {

inline constexpr double kDefaultEigFloor = 1e-13;

/// Unit-trace positive semi-definite state held in the log domain:
/// rho = exp(H) with H normalized so that tr exp(H) = 1.
///
/// States built from an exponent are non-singular by construction (an
/// eigenvalue may underflow to zero while its logarithm stays finite).
/// States built from a matrix may be singular; those carry -inf log
/// eigenvalues and no usable exponent.
class DensityState {
 public:
  static DensityState from_exponent(const HermitianOperator& exponent, double eig_floor = kDefaultEigFloor);
  /// Accepts a PSD matrix with unit trace (within 1e-10). Throws DomainError
  /// for negative eigenvalues or a trace away from one.
  static DensityState from_matrix(const HermitianOperator& rho, double eig_floor = kDefaultEigFloor);
  static DensityState from_diagonal(const RealVector& probabilities, double eig_floor = kDefaultEigFloor);
  static DensityState maximally_mixed(int dim);

  int dim() const { return static_cast<int>(eigenvalues_.size()); }
  /// log(rho). Throws DomainError for a singular state.
  const HermitianOperator& exponent() const;
  const RealVector& eigenvalues() const { return eigenvalues_; }
  const RealVector& log_eigenvalues() const { return log_eigenvalues_; }
  const ComplexMatrix& eigenvectors() const { return eigenvectors_; }
  const HermitianOperator& matrix() const { return matrix_; }

  double min_eigenvalue() const { return eigenvalues_.minCoeff(); }
  bool singular() const { return singular_; }
  /// Some eigenvalue fell below the floor the state was built with.
  bool floor_clamped() const { return floor_clamped_; }

 private:
  DensityState() = default;
  void finish(double eig_floor);

  HermitianOperator exponent_;
  RealVector eigenvalues_;
  RealVector log_eigenvalues_;
  ComplexMatrix eigenvectors_;
  HermitianOperator matrix_;
  bool singular_ = false;
  bool floor_clamped_ = false;
};

/// Point of the probability simplex, also held in the log domain.
class ProbabilityVector {
 public:
  static ProbabilityVector from_log_weights(const RealVector& log_weights, double eig_floor = kDefaultEigFloor);
  /// Nonnegative entries summing to one within 1e-10; zeros allowed.
  static ProbabilityVector from_values(const RealVector& values, double eig_floor = kDefaultEigFloor);
  static ProbabilityVector uniform(int dim);

  int dim() const { return static_cast<int>(values_.size()); }
  const RealVector& values() const { return values_; }
  const RealVector& log_values() const { return log_values_; }
  double operator[](int i) const { return values_(i); }
  double min_entry() const { return values_.minCoeff(); }
  bool singular() const { return singular_; }
  bool floor_clamped() const { return floor_clamped_; }

  /// diag(p) as a density state.
  DensityState embed() const;

 private:
  ProbabilityVector() = default;

  RealVector values_;
  RealVector log_values_;
  bool singular_ = false;
  bool floor_clamped_ = false;
};

}  // namespace expgrad
