#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "expgrad/density.hpp"

namespace expgrad {

/// Convex objective on density matrices. `value` returns +inf outside the
/// effective domain; `gradient` throws DomainError there.
struct ObjectiveSpec {
  std::string name;
  int dim = 0;
  std::function<double(const DensityState&)> value;
  std::function<HermitianOperator(const DensityState&)> gradient;
  std::function<bool(const DensityState&)> in_domain;
};

/// Vector analogue on the probability simplex.
struct VectorObjective {
  std::string name;
  int dim = 0;
  std::function<double(const ProbabilityVector&)> value;
  std::function<RealVector(const ProbabilityVector&)> gradient;
  std::function<bool(const ProbabilityVector&)> in_domain;
};

/// PSD measurement operators M_1..M_n of a common dimension.
class MeasurementEnsemble {
 public:
  MeasurementEnsemble(int dim, std::vector<HermitianOperator> operators);

  /// Diagonal operators diag(a_i) from nonnegative rows.
  static MeasurementEnsemble diagonal(const std::vector<RealVector>& rows);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(operators_.size()); }
  const std::vector<HermitianOperator>& operators() const { return operators_; }

 private:
  int dim_;
  std::vector<HermitianOperator> operators_;
};

/// f(rho) = -sum_i log tr(M_i rho).
ObjectiveSpec qst_objective(MeasurementEnsemble ensemble);

/// f(rho) = -sum_i log tr(M_i rho) - lambda log det rho.
ObjectiveSpec hedged_qst_objective(MeasurementEnsemble ensemble, double lambda);

/// f(rho) = -log det rho; the matrix counterpart of the Burg entropy.
ObjectiveSpec log_det_barrier_objective(int dim);

/// f(rho) = (L/2) |rho - center|_F^2, gradient L (rho - center).
ObjectiveSpec quadratic_objective(double lipschitz, HermitianOperator center);

/// b(x) = -sum_i log x_i.
VectorObjective burg_objective(int dim);

/// f(x) = -sum_i log <a_i, x>.
VectorObjective poisson_linear_objective(std::vector<RealVector> rows);

/// Certificate that f(x, y) = -log x - log y is not L-smooth relative to
/// the negative entropy: at the returned x in (0, 1), L/x - 1/x^2 < 0.
struct HardnessWitness {
  double x = 0.0;
  double violation = 0.0;
};

HardnessWitness qst_hardness_witness(double lipschitz);

}  // namespace expgrad
