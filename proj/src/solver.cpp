#include "expgrad/solver.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include "expgrad/entropy.hpp"
#include "expgrad/error.hpp"

namespace expgrad {

namespace {

struct MatrixSpace {
  using State = DensityState;
  using Gradient = HermitianOperator;
  using Objective = ObjectiveSpec;

  static State step(const State& s, const Gradient& g, double alpha, double floor) {
    return eg_step(s, g, alpha, floor);
  }
  static double inner_difference(const Gradient& g, const State& a, const State& b) {
    return trace_inner_product(g, a.matrix()) - trace_inner_product(g, b.matrix());
  }
  static double divergence(const State& a, const State& b) { return quantum_relative_entropy(a, b); }
  static double width(const Gradient& g) { return eigen_extremes(g).width(); }
  static double min_entry(const State& s) { return s.min_eigenvalue(); }
};

struct SimplexSpace {
  using State = ProbabilityVector;
  using Gradient = RealVector;
  using Objective = VectorObjective;

  static State step(const State& s, const Gradient& g, double alpha, double floor) {
    return eg_step(s, g, alpha, floor);
  }
  static double inner_difference(const Gradient& g, const State& a, const State& b) {
    return g.dot(a.values()) - g.dot(b.values());
  }
  static double divergence(const State& a, const State& b) { return classical_relative_entropy(a, b); }
  static double width(const Gradient& g) { return g.maxCoeff() - g.minCoeff(); }
  static double min_entry(const State& s) { return s.min_entry(); }
};

template <typename Space>
BasicArmijoResult<typename Space::State> armijo_core(const typename Space::State& current, double current_value,
                                                     const typename Space::Gradient& gradient,
                                                     const typename Space::Objective& f, const SolverConfig& cfg,
                                                     std::optional<typename Space::State> first_candidate) {
  for (int j = 0;; ++j) {
    const double alpha = cfg.step_size(j);
    typename Space::State candidate = (j == 0 && first_candidate)
                                          ? std::move(*first_candidate)
                                          : Space::step(current, gradient, alpha, cfg.eig_floor);
    const double value = f.value(candidate);
    bool accepted = false;
    if (std::isfinite(value)) {
      const double bound = current_value + cfg.tau * Space::inner_difference(gradient, candidate, current);
      // Equality is accepted: the backtracking condition is a strict '>'.
      accepted = value <= bound;
    }
    if (accepted) return {alpha, std::move(candidate), value, j, false};
    if (j >= cfg.max_backtracks) return {alpha, std::move(candidate), value, j, true};
  }
}

template <typename Space>
BasicSolveResult<typename Space::State> run(const typename Space::State& start, const typename Space::Objective& f,
                                            const SolverConfig& cfg,
                                            const IterationSink<typename Space::State>& sink) {
  cfg.validate();
  if (start.singular()) throw DomainError("starting point must be non-singular");
  if (start.dim() != f.dim) throw InvalidInput("starting point dimension does not match the objective");
  if (!f.in_domain(start)) throw DomainError("starting point lies outside the objective's domain");

  typename Space::State state = start;
  double value = f.value(start);
  if (!std::isfinite(value)) throw DomainError("objective is not finite at the starting point");
  typename Space::Gradient gradient = f.gradient(state);

  BasicSolveResult<typename Space::State> result{state, {}, SolveStatus::MaxIters};
  if (cfg.max_iters == 0) return result;
  std::optional<typename Space::State> bar_step = Space::step(state, gradient, cfg.alpha_bar, cfg.eig_floor);

  // Started at a fixed point: report it without a line search, which could
  // only fail on round-off when the predicted decrease is zero.
  const double initial_gap = Space::divergence(*bar_step, state);
  if (initial_gap <= cfg.stop_tol) {
    IterationRecord record;
    record.k = 1;
    record.f_value = value;
    record.alpha = cfg.alpha_bar;
    record.delta = Space::width(gradient);
    record.bregman_gap_bar = initial_gap;
    record.min_eig = Space::min_entry(state);
    record.floor_clamped = state.floor_clamped();
    result.trace.push_back(record);
    if (sink) sink(record, state);
    result.status = SolveStatus::Stationary;
    return result;
  }

  for (int k = 1; k <= cfg.max_iters; ++k) {
    const double delta = Space::width(gradient);
    auto search = armijo_core<Space>(state, value, gradient, f, cfg, std::move(bar_step));
    if (search.cap_hit) {
      result.status = SolveStatus::BacktrackCapHit;
      break;
    }
    const double previous_value = value;
    state = std::move(search.next);
    value = search.next_value;
    gradient = f.gradient(state);
    bar_step = Space::step(state, gradient, cfg.alpha_bar, cfg.eig_floor);

    IterationRecord record;
    record.k = k;
    record.f_value = value;
    record.alpha = search.alpha;
    record.backtracks = search.backtracks;
    record.delta = delta;
    record.bregman_gap_bar = Space::divergence(*bar_step, state);
    record.min_eig = Space::min_entry(state);
    record.floor_clamped = state.floor_clamped();
    result.trace.push_back(record);
    if (sink) sink(record, state);

    if (record.bregman_gap_bar <= cfg.stop_tol) {
      result.status = SolveStatus::Stationary;
      break;
    }
    if (std::abs(previous_value - value) <= cfg.stop_tol * std::max(1.0, std::abs(value))) {
      result.status = SolveStatus::Converged;
      break;
    }
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(alpha_bar > 0.0) || !std::isfinite(alpha_bar)) throw InvalidInput("alpha_bar must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidInput("shrink must lie in (0, 1)");
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidInput("tau must lie in (0, 1)");
  if (max_iters < 0) throw InvalidInput("max_iters must be nonnegative");
  if (max_backtracks < 1) throw InvalidInput("max_backtracks must be positive");
  if (!(stop_tol > 0.0)) throw InvalidInput("stop_tol must be positive");
  if (!(eig_floor > 0.0)) throw InvalidInput("eig_floor must be positive");
}

double SolverConfig::step_size(int backtracks) const { return alpha_bar * std::pow(shrink, backtracks); }

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIters: return "MaxIters";
    case SolveStatus::BacktrackCapHit: return "BacktrackCapHit";
    case SolveStatus::Stationary: return "Stationary";
  }
  return "Unknown";
}

DensityState eg_step(const DensityState& rho, const HermitianOperator& gradient, double alpha, double eig_floor) {
  if (gradient.dim() != rho.dim()) throw InvalidInput("gradient dimension does not match the state");
  if (!(alpha > 0.0)) throw InvalidInput("step size must be positive");
  return DensityState::from_exponent(rho.exponent() - alpha * gradient, eig_floor);
}

ProbabilityVector eg_step(const ProbabilityVector& x, const RealVector& gradient, double alpha, double eig_floor) {
  if (gradient.size() != x.dim()) throw InvalidInput("gradient dimension does not match the state");
  if (!(alpha > 0.0)) throw InvalidInput("step size must be positive");
  if (x.singular()) throw DomainError("EG step from a boundary point");
  return ProbabilityVector::from_log_weights(x.log_values() - alpha * gradient, eig_floor);
}

ArmijoResult armijo_search(const DensityState& rho, const ObjectiveSpec& f, const SolverConfig& cfg) {
  cfg.validate();
  const double value = f.value(rho);
  if (!std::isfinite(value)) throw DomainError("line search from a point outside the domain");
  return armijo_core<MatrixSpace>(rho, value, f.gradient(rho), f, cfg, std::nullopt);
}

SimplexArmijoResult armijo_search(const ProbabilityVector& x, const VectorObjective& f, const SolverConfig& cfg) {
  cfg.validate();
  const double value = f.value(x);
  if (!std::isfinite(value)) throw DomainError("line search from a point outside the domain");
  return armijo_core<SimplexSpace>(x, value, f.gradient(x), f, cfg, std::nullopt);
}

SolveResult solve(const DensityState& rho0, const ObjectiveSpec& f, const SolverConfig& cfg,
                  const IterationSink<DensityState>& sink) {
  return run<MatrixSpace>(rho0, f, cfg, sink);
}

SimplexSolveResult solve_simplex(const ProbabilityVector& x0, const VectorObjective& f, const SolverConfig& cfg,
                                 const IterationSink<ProbabilityVector>& sink) {
  return run<SimplexSpace>(x0, f, cfg, sink);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace) {
  out << "k,f,alpha,backtracks,delta,bregman_gap_bar,min_eig\n";
  for (const auto& r : trace) {
    out << r.k << ',' << format_double(r.f_value) << ',' << format_double(r.alpha) << ',' << r.backtracks << ','
        << format_double(r.delta) << ',' << format_double(r.bregman_gap_bar) << ',' << format_double(r.min_eig)
        << '\n';
  }
}

}  // namespace expgrad
