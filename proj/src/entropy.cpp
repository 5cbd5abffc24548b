#include "expgrad/entropy.hpp"

#include <cmath>

#include "expgrad/error.hpp"

namespace expgrad {

namespace {

// p log p with 0 log 0 = 0, taking log p from the log-domain representation.
double entropy_term(double p, double log_p) { return p > 0.0 ? p * log_p : 0.0; }

}  // namespace

double von_neumann_entropy_neg(const DensityState& rho) {
  if (rho.singular()) throw DomainError("negative entropy of a singular state");
  double sum = 0.0;
  for (int i = 0; i < rho.dim(); ++i) sum += entropy_term(rho.eigenvalues()(i), rho.log_eigenvalues()(i));
  return sum - rho.eigenvalues().sum();
}

double quantum_relative_entropy(const DensityState& rho, const DensityState& sigma) {
  if (rho.dim() != sigma.dim()) throw InvalidInput("relative entropy dimension mismatch");
  const ComplexMatrix overlap = rho.eigenvectors().adjoint() * sigma.eigenvectors();
  const RealVector& p = rho.eigenvalues();
  const RealVector& log_p = rho.log_eigenvalues();
  const RealVector& q = sigma.eigenvalues();
  const RealVector& log_q = sigma.log_eigenvalues();

  double self = 0.0;
  double cross = 0.0;
  for (int i = 0; i < rho.dim(); ++i) {
    if (p(i) <= 0.0) continue;
    self += p(i) * log_p(i);
    for (int j = 0; j < sigma.dim(); ++j) {
      const double weight = std::norm(overlap(i, j));
      if (weight == 0.0) continue;
      if (!std::isfinite(log_q(j))) throw DomainError("relative entropy against a singular state");
      cross += weight * p(i) * log_q(j);
    }
  }
  return self - cross - (p.sum() - q.sum());
}

double classical_relative_entropy(const ProbabilityVector& p, const ProbabilityVector& q) {
  if (p.dim() != q.dim()) throw InvalidInput("relative entropy dimension mismatch");
  double sum = 0.0;
  for (int i = 0; i < p.dim(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) throw DomainError("relative entropy with q_i = 0 < p_i");
    sum += p[i] * (p.log_values()(i) - q.log_values()(i));
  }
  return sum - (p.values().sum() - q.values().sum());
}

double pinsker_gap(const DensityState& rho, const DensityState& sigma) {
  const double divergence = quantum_relative_entropy(rho, sigma);
  const double distance = schatten_norm(rho.matrix() - sigma.matrix(), SchattenOrder::One);
  return divergence - 0.5 * distance * distance;
}

}  // namespace expgrad
