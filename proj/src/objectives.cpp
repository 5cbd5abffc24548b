#include "expgrad/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "expgrad/error.hpp"

namespace expgrad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPsdTolerance = 1e-10;

void check_dim(int expected, int got) {
  if (expected != got) {
    throw InvalidInput("objective of dimension " + std::to_string(expected) + " evaluated at dimension " +
                       std::to_string(got));
  }
}

// tr(M_i rho) for every operator; negative round-off is clipped to zero.
std::vector<double> measurement_probabilities(const MeasurementEnsemble& ensemble, const DensityState& rho) {
  std::vector<double> out;
  out.reserve(ensemble.operators().size());
  for (const auto& m : ensemble.operators()) {
    out.push_back(std::max(0.0, trace_inner_product(m, rho.matrix())));
  }
  return out;
}

bool all_positive(const std::vector<double>& values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; });
}

HermitianOperator inverse(const DensityState& rho) {
  const RealVector inv = (-rho.log_eigenvalues()).array().exp();
  return HermitianOperator(rho.eigenvectors() * inv.cast<Complex>().asDiagonal() * rho.eigenvectors().adjoint());
}

double log_det(const DensityState& rho) { return rho.log_eigenvalues().sum(); }

}  // namespace

MeasurementEnsemble::MeasurementEnsemble(int dim, std::vector<HermitianOperator> operators)
    : dim_(dim), operators_(std::move(operators)) {
  if (dim_ < 1) throw InvalidInput("measurement ensemble dimension must be >= 1");
  if (operators_.empty()) throw InvalidInput("measurement ensemble has no operators");
  bool any_nonzero = false;
  for (std::size_t i = 0; i < operators_.size(); ++i) {
    const auto& m = operators_[i];
    if (m.dim() != dim_) {
      throw InvalidInput("measurement operator " + std::to_string(i) + " has dimension " + std::to_string(m.dim()));
    }
    if (!m.is_finite()) throw InvalidInput("measurement operator " + std::to_string(i) + " is not finite");
    if (eigen_extremes(m).min < -kPsdTolerance) {
      throw InvalidInput("measurement operator " + std::to_string(i) + " is not positive semi-definite");
    }
    any_nonzero = any_nonzero || m.matrix().norm() > 0.0;
  }
  if (!any_nonzero) throw InvalidInput("all measurement operators are zero");
}

MeasurementEnsemble MeasurementEnsemble::diagonal(const std::vector<RealVector>& rows) {
  if (rows.empty()) throw InvalidInput("no rows for diagonal ensemble");
  std::vector<HermitianOperator> ops;
  ops.reserve(rows.size());
  for (const auto& row : rows) ops.push_back(HermitianOperator::diagonal(row));
  return MeasurementEnsemble(static_cast<int>(rows.front().size()), std::move(ops));
}

ObjectiveSpec qst_objective(MeasurementEnsemble ensemble) {
  ObjectiveSpec f;
  f.name = "qst";
  f.dim = ensemble.dim();
  f.value = [ensemble](const DensityState& rho) {
    check_dim(ensemble.dim(), rho.dim());
    double sum = 0.0;
    for (double p : measurement_probabilities(ensemble, rho)) {
      if (p <= 0.0) return kInf;
      sum -= std::log(p);
    }
    return sum;
  };
  f.gradient = [ensemble](const DensityState& rho) {
    check_dim(ensemble.dim(), rho.dim());
    const auto probs = measurement_probabilities(ensemble, rho);
    HermitianOperator grad = HermitianOperator::zero(ensemble.dim());
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) throw DomainError("QST gradient outside the domain: tr(M_i rho) = 0");
      grad -= ensemble.operators()[i] * (1.0 / probs[i]);
    }
    return grad;
  };
  f.in_domain = [ensemble](const DensityState& rho) {
    return rho.dim() == ensemble.dim() && all_positive(measurement_probabilities(ensemble, rho));
  };
  return f;
}

ObjectiveSpec hedged_qst_objective(MeasurementEnsemble ensemble, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("hedging weight must be positive");
  ObjectiveSpec base = qst_objective(std::move(ensemble));
  ObjectiveSpec f;
  f.name = "hedged-qst";
  f.dim = base.dim;
  f.value = [base, lambda](const DensityState& rho) {
    if (rho.singular()) return kInf;
    const double v = base.value(rho);
    if (!std::isfinite(v)) return kInf;
    return v - lambda * log_det(rho);
  };
  f.gradient = [base, lambda](const DensityState& rho) {
    if (rho.singular()) throw DomainError("hedged QST gradient at a singular state");
    return base.gradient(rho) - lambda * inverse(rho);
  };
  f.in_domain = [base](const DensityState& rho) { return !rho.singular() && base.in_domain(rho); };
  return f;
}

ObjectiveSpec log_det_barrier_objective(int dim) {
  if (dim < 1) throw InvalidInput("barrier dimension must be >= 1");
  ObjectiveSpec f;
  f.name = "log-det";
  f.dim = dim;
  f.value = [dim](const DensityState& rho) {
    check_dim(dim, rho.dim());
    return rho.singular() ? kInf : -log_det(rho);
  };
  f.gradient = [dim](const DensityState& rho) {
    check_dim(dim, rho.dim());
    if (rho.singular()) throw DomainError("log-det gradient at a singular state");
    return -1.0 * inverse(rho);
  };
  f.in_domain = [dim](const DensityState& rho) { return rho.dim() == dim && !rho.singular(); };
  return f;
}

ObjectiveSpec quadratic_objective(double lipschitz, HermitianOperator center) {
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) throw InvalidInput("quadratic scale must be >= 0");
  if (!center.is_finite()) throw InvalidInput("quadratic center is not finite");
  ObjectiveSpec f;
  f.name = "quadratic";
  f.dim = center.dim();
  f.value = [lipschitz, center](const DensityState& rho) {
    check_dim(center.dim(), rho.dim());
    const double norm = (rho.matrix() - center).matrix().norm();
    return 0.5 * lipschitz * norm * norm;
  };
  f.gradient = [lipschitz, center](const DensityState& rho) {
    check_dim(center.dim(), rho.dim());
    return lipschitz * (rho.matrix() - center);
  };
  f.in_domain = [dim = center.dim()](const DensityState& rho) { return rho.dim() == dim; };
  return f;
}

VectorObjective burg_objective(int dim) {
  if (dim < 1) throw InvalidInput("Burg entropy dimension must be >= 1");
  VectorObjective f;
  f.name = "burg";
  f.dim = dim;
  f.value = [dim](const ProbabilityVector& x) {
    check_dim(dim, x.dim());
    return x.singular() ? kInf : -x.log_values().sum();
  };
  f.gradient = [dim](const ProbabilityVector& x) -> RealVector {
    check_dim(dim, x.dim());
    if (x.singular()) throw DomainError("Burg gradient at the simplex boundary");
    return -(-x.log_values()).array().exp();
  };
  f.in_domain = [dim](const ProbabilityVector& x) { return x.dim() == dim && !x.singular(); };
  return f;
}

VectorObjective poisson_linear_objective(std::vector<RealVector> rows) {
  if (rows.empty()) throw InvalidInput("Poisson-linear objective needs at least one row");
  const int dim = static_cast<int>(rows.front().size());
  if (dim < 1) throw InvalidInput("Poisson-linear rows must be non-empty");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) throw InvalidInput("Poisson-linear row " + std::to_string(i) + " has wrong length");
    if (!rows[i].allFinite() || rows[i].minCoeff() < 0.0) {
      throw InvalidInput("Poisson-linear row " + std::to_string(i) + " must be finite and nonnegative");
    }
    if (rows[i].maxCoeff() <= 0.0) throw InvalidInput("Poisson-linear row " + std::to_string(i) + " is zero");
  }
  auto inner = [](const std::vector<RealVector>& a, const ProbabilityVector& x) {
    std::vector<double> out;
    out.reserve(a.size());
    for (const auto& row : a) out.push_back(std::max(0.0, row.dot(x.values())));
    return out;
  };
  VectorObjective f;
  f.name = "poisson";
  f.dim = dim;
  f.value = [rows, inner](const ProbabilityVector& x) {
    check_dim(static_cast<int>(rows.front().size()), x.dim());
    double sum = 0.0;
    for (double p : inner(rows, x)) {
      if (p <= 0.0) return kInf;
      sum -= std::log(p);
    }
    return sum;
  };
  f.gradient = [rows, inner](const ProbabilityVector& x) -> RealVector {
    check_dim(static_cast<int>(rows.front().size()), x.dim());
    const auto probs = inner(rows, x);
    RealVector grad = RealVector::Zero(x.dim());
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) throw DomainError("Poisson-linear gradient outside the domain");
      grad -= rows[i] / probs[i];
    }
    return grad;
  };
  f.in_domain = [rows, inner](const ProbabilityVector& x) {
    return x.dim() == static_cast<int>(rows.front().size()) && all_positive(inner(rows, x));
  };
  return f;
}

HardnessWitness qst_hardness_witness(double lipschitz) {
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) throw InvalidInput("L must be positive");
  // x stays inside (0, 1); below 1/L the curvature condition L/x >= 1/x^2 fails.
  const double x = std::min(0.5 / lipschitz, 0.5);
  return {x, lipschitz / x - 1.0 / (x * x)};
}

}  // namespace expgrad
