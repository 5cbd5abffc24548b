#pragma once

#include "expgrad/density.hpp"

namespace expgrad {

/// h(rho) = tr(rho log rho) - tr(rho), the negative von Neumann entropy
/// shifted by the trace. Throws DomainError on a singular state.
double von_neumann_entropy_neg(const DensityState& rho);

/// D(rho, sigma) = tr(rho log rho) - tr(rho log sigma) - tr(rho - sigma),
/// evaluated in both eigenbases: tr(rho log sigma) = sum_ij |<u_i, v_j>|^2 p_i log q_j.
/// Zero eigenvalues of rho contribute 0 (0 log 0 = 0); a singular sigma throws DomainError.
double quantum_relative_entropy(const DensityState& rho, const DensityState& sigma);

/// sum p_i log(p_i / q_i) - sum (p_i - q_i).
double classical_relative_entropy(const ProbabilityVector& p, const ProbabilityVector& q);

/// D(rho, sigma) - |rho - sigma|_1^2 / 2; nonnegative by Pinsker's inequality.
double pinsker_gap(const DensityState& rho, const DensityState& sigma);

}  // namespace expgrad
