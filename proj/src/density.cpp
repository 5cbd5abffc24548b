#include "expgrad/density.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "expgrad/error.hpp"
#include "expgrad/numeric.hpp"

namespace expgrad {

namespace {

constexpr double kTraceTolerance = 1e-10;
constexpr double kNegativeTolerance = 1e-12;

}  // namespace

void DensityState::finish(double eig_floor) {
  matrix_ = HermitianOperator(eigenvectors_ * eigenvalues_.cast<Complex>().asDiagonal() * eigenvectors_.adjoint());
  floor_clamped_ = eigenvalues_.minCoeff() < eig_floor;
}

DensityState DensityState::from_exponent(const HermitianOperator& exponent, double eig_floor) {
  if (exponent.dim() < 1) throw InvalidInput("density state needs dimension >= 1");
  const SpectralDecomposition spectrum = spectral_decompose(exponent);
  const double shift = log_sum_exp(spectrum.eigenvalues);

  DensityState state;
  state.log_eigenvalues_ = spectrum.eigenvalues.array() - shift;
  state.eigenvalues_ = state.log_eigenvalues_.array().exp();
  state.eigenvectors_ = spectrum.eigenvectors;
  state.exponent_ = exponent - shift * HermitianOperator::identity(exponent.dim());
  state.finish(eig_floor);
  return state;
}

DensityState DensityState::from_matrix(const HermitianOperator& rho, double eig_floor) {
  if (rho.dim() < 1) throw InvalidInput("density state needs dimension >= 1");
  const SpectralDecomposition spectrum = spectral_decompose(rho);
  const double trace = spectrum.eigenvalues.sum();
  if (std::abs(trace - 1.0) > kTraceTolerance) {
    throw DomainError("density matrix trace is " + std::to_string(trace) + ", expected 1");
  }
  if (spectrum.eigenvalues(0) < -kNegativeTolerance) {
    throw DomainError("density matrix has negative eigenvalue " + std::to_string(spectrum.eigenvalues(0)));
  }

  DensityState state;
  state.eigenvalues_ = spectrum.eigenvalues.cwiseMax(0.0) / spectrum.eigenvalues.cwiseMax(0.0).sum();
  state.eigenvectors_ = spectrum.eigenvectors;
  state.log_eigenvalues_ = state.eigenvalues_.array().log();
  state.singular_ = !(state.eigenvalues_.array() > 0.0).all();
  if (!state.singular_) {
    state.exponent_ = HermitianOperator(state.eigenvectors_ * state.log_eigenvalues_.cast<Complex>().asDiagonal() *
                                        state.eigenvectors_.adjoint());
  }
  state.finish(eig_floor);
  return state;
}

DensityState DensityState::from_diagonal(const RealVector& probabilities, double eig_floor) {
  return from_matrix(HermitianOperator::diagonal(probabilities), eig_floor);
}

DensityState DensityState::maximally_mixed(int dim) {
  if (dim < 1) throw InvalidInput("density state needs dimension >= 1");
  return from_exponent(HermitianOperator::zero(dim));
}

const HermitianOperator& DensityState::exponent() const {
  if (singular_) throw DomainError("logarithm of a singular density state");
  return exponent_;
}

ProbabilityVector ProbabilityVector::from_log_weights(const RealVector& log_weights, double eig_floor) {
  if (log_weights.size() < 1) throw InvalidInput("probability vector needs dimension >= 1");
  if (!log_weights.allFinite()) throw InvalidInput("non-finite log weight");
  ProbabilityVector p;
  p.log_values_ = log_weights.array() - log_sum_exp(log_weights);
  p.values_ = p.log_values_.array().exp();
  p.floor_clamped_ = p.values_.minCoeff() < eig_floor;
  return p;
}

ProbabilityVector ProbabilityVector::from_values(const RealVector& values, double eig_floor) {
  if (values.size() < 1) throw InvalidInput("probability vector needs dimension >= 1");
  if (!values.allFinite()) throw InvalidInput("non-finite probability entry");
  if (values.minCoeff() < 0.0) throw DomainError("negative probability entry");
  if (std::abs(values.sum() - 1.0) > kTraceTolerance) {
    throw DomainError("probability entries sum to " + std::to_string(values.sum()) + ", expected 1");
  }
  ProbabilityVector p;
  p.values_ = values / values.sum();
  p.log_values_ = p.values_.array().log();
  p.singular_ = !(p.values_.array() > 0.0).all();
  p.floor_clamped_ = p.values_.minCoeff() < eig_floor;
  return p;
}

ProbabilityVector ProbabilityVector::uniform(int dim) {
  if (dim < 1) throw InvalidInput("probability vector needs dimension >= 1");
  return from_log_weights(RealVector::Zero(dim));
}

DensityState ProbabilityVector::embed() const {
  if (singular_) return DensityState::from_diagonal(values_);
  return DensityState::from_exponent(HermitianOperator::diagonal(log_values_));
}

}  // namespace expgrad
