#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "expgrad/density.hpp"
#include "expgrad/objectives.hpp"

namespace expgrad {

/// Armijo and stopping parameters. validate() enforces alpha_bar > 0,
/// shrink and tau in (0, 1), positive tolerances and caps.
struct SolverConfig {
  double alpha_bar = 1.0;
  double shrink = 0.5;
  double tau = 0.5;
  int max_iters = 10000;
  int max_backtracks = 60;
  double stop_tol = 1e-10;
  double eig_floor = kDefaultEigFloor;

  void validate() const;
  /// alpha_bar * shrink^backtracks, the only way step sizes are formed.
  double step_size(int backtracks) const;
};

struct IterationRecord {
  int k = 0;
  double f_value = 0.0;
  double alpha = 0.0;
  int backtracks = 0;
  double delta = 0.0;            // spectral width of the gradient at the previous iterate
  double bregman_gap_bar = 0.0;  // D(x_k(alpha_bar), x_k)
  double min_eig = 0.0;
  bool floor_clamped = false;
};

enum class SolveStatus { Converged, MaxIters, BacktrackCapHit, Stationary };

std::string to_string(SolveStatus status);

template <typename State>
struct BasicSolveResult {
  State final_state;
  std::vector<IterationRecord> trace;
  SolveStatus status = SolveStatus::MaxIters;
};

using SolveResult = BasicSolveResult<DensityState>;
using SimplexSolveResult = BasicSolveResult<ProbabilityVector>;

template <typename State>
struct BasicArmijoResult {
  double alpha = 0.0;
  State next;
  double next_value = 0.0;
  int backtracks = 0;
  /// max_backtracks exceeded; `next` is then the last rejected candidate.
  bool cap_hit = false;
};

using ArmijoResult = BasicArmijoResult<DensityState>;
using SimplexArmijoResult = BasicArmijoResult<ProbabilityVector>;

/// Observer called once per iteration with the record and the new iterate.
template <typename State>
using IterationSink = std::function<void(const IterationRecord&, const State&)>;

/// rho(alpha) = exp(log rho - alpha g) / tr exp(log rho - alpha g), formed in
/// the log domain and normalized by log-sum-exp of the exponent eigenvalues.
DensityState eg_step(const DensityState& rho, const HermitianOperator& gradient, double alpha,
                     double eig_floor = kDefaultEigFloor);

/// Element-wise update x_i exp(-alpha g_i) / Z.
ProbabilityVector eg_step(const ProbabilityVector& x, const RealVector& gradient, double alpha,
                          double eig_floor = kDefaultEigFloor);

/// Backtracks alpha = alpha_bar r^j until
/// f(rho(alpha)) <= f(rho) + tau <grad f(rho), rho(alpha) - rho>; +inf fails.
ArmijoResult armijo_search(const DensityState& rho, const ObjectiveSpec& f, const SolverConfig& cfg);
SimplexArmijoResult armijo_search(const ProbabilityVector& x, const VectorObjective& f, const SolverConfig& cfg);

/// EG with Armijo line search from a non-singular starting point in dom f.
SolveResult solve(const DensityState& rho0, const ObjectiveSpec& f, const SolverConfig& cfg,
                  const IterationSink<DensityState>& sink = {});
SimplexSolveResult solve_simplex(const ProbabilityVector& x0, const VectorObjective& f, const SolverConfig& cfg,
                                 const IterationSink<ProbabilityVector>& sink = {});

/// Trace CSV: header `k,f,alpha,backtracks,delta,bregman_gap_bar,min_eig`,
/// floats with 17 significant digits.
void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace);
std::string format_double(double value);

}  // namespace expgrad
