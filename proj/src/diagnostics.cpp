#include "expgrad/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "expgrad/entropy.hpp"
#include "expgrad/error.hpp"
#include "expgrad/numeric.hpp"
#include "expgrad/solver.hpp"

namespace expgrad {

namespace {

// Eigensystem of H_alpha = log rho + alpha G, eigenvalues shifted so the largest is zero.
struct GibbsSpectrum {
  RealVector shifted;  // w_i - max w
  ComplexMatrix vectors;
  double shift = 0.0;
  RealVector weights;  // e^{w_i} / sum_j e^{w_j}
};

GibbsSpectrum gibbs_spectrum(const LogPartitionProbe& probe, double alpha) {
  const SpectralDecomposition s = spectral_decompose(probe.base().exponent() + alpha * probe.direction());
  GibbsSpectrum out;
  out.shift = s.eigenvalues.maxCoeff();
  out.shifted = s.eigenvalues.array() - out.shift;
  out.vectors = s.eigenvectors;
  out.weights = out.shifted.array().exp();
  out.weights /= out.weights.sum();
  return out;
}

}  // namespace

LogPartitionProbe::LogPartitionProbe(DensityState base, HermitianOperator direction)
    : base_(std::move(base)), direction_(std::move(direction)) {
  if (base_.singular()) throw DomainError("log-partition probe needs a non-singular base state");
  if (direction_.dim() != base_.dim()) throw InvalidInput("probe direction dimension mismatch");
  spectrum_ = spectral_decompose(direction_);
  groups_ = spectrum_.groups();
  delta_ = spectrum_.eigenvalues(spectrum_.dim() - 1) - spectrum_.eigenvalues(0);
}

LogPartitionProbe LogPartitionProbe::from_objective(const DensityState& rho, const ObjectiveSpec& f) {
  return LogPartitionProbe(rho, -1.0 * f.gradient(rho));
}

double phi(const LogPartitionProbe& probe, double alpha) {
  if (!std::isfinite(alpha)) throw InvalidInput("phi needs a finite step");
  const SpectralDecomposition s = spectral_decompose(probe.base().exponent() + alpha * probe.direction());
  return log_sum_exp(s.eigenvalues);
}

EtaDistribution eta_distribution(const LogPartitionProbe& probe, double alpha) {
  const GibbsSpectrum gibbs = gibbs_spectrum(probe, alpha);
  const ComplexMatrix sigma = gibbs.vectors * gibbs.weights.cast<Complex>().asDiagonal() * gibbs.vectors.adjoint();
  const ComplexMatrix& basis = probe.direction_spectrum().eigenvectors;
  EtaDistribution eta;
  for (const auto& group : probe.groups()) {
    double weight = 0.0;
    for (int c = group.first; c < group.first + group.count; ++c) {
      weight += (basis.col(c).adjoint() * sigma * basis.col(c))(0, 0).real();
    }
    eta.values.push_back(group.value);
    eta.weights.push_back(weight);
  }
  return eta;
}

PhiDerivatives eta_moments(const LogPartitionProbe& probe, double alpha) {
  const EtaDistribution eta = eta_distribution(probe, alpha);
  double total = 0.0;
  double mean = 0.0;
  for (std::size_t j = 0; j < eta.values.size(); ++j) {
    total += eta.weights[j];
    mean += eta.weights[j] * eta.values[j];
  }
  mean /= total;
  PhiDerivatives out{mean, 0.0, 0.0};
  for (std::size_t j = 0; j < eta.values.size(); ++j) {
    const double centered = eta.values[j] - mean;
    out.second += eta.weights[j] * centered * centered / total;
    out.third += eta.weights[j] * centered * centered * centered / total;
  }
  return out;
}

PhiDerivatives phi_derivatives(const LogPartitionProbe& probe, double alpha) {
  const GibbsSpectrum gibbs = gibbs_spectrum(probe, alpha);
  const int d = probe.dim();
  ComplexMatrix g = gibbs.vectors.adjoint() * probe.direction().matrix() * gibbs.vectors;
  const double mean = (gibbs.weights.array() * g.diagonal().real().array()).sum();
  // Centering G leaves phi'' and phi''' unchanged and avoids cancellation.
  g.diagonal().array() -= mean;
  const double residual_mean = (gibbs.weights.array() * g.diagonal().real().array()).sum();

  const RealVector& w = gibbs.shifted;
  const double z = w.array().exp().sum();
  double second = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) second += std::norm(g(i, j)) * exp_divided_difference(w(i), w(j));
  }
  second /= z;
  double third = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        third += (g(i, j) * g(j, k) * g(k, i)).real() * exp_divided_difference(w(i), w(j), w(k));
      }
    }
  }
  third = 2.0 * third / z;

  const double m = residual_mean;
  return {mean + m, second - m * m, third - 3.0 * second * m + 2.0 * m * m * m};
}

double bregman_gap(const LogPartitionProbe& probe, double alpha) {
  return phi(probe, 0.0) - phi(probe, alpha) + alpha * eta_moments(probe, alpha).first;
}

SandwichResult sandwich_check(const LogPartitionProbe& probe, double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("sandwich check needs a positive step");
  if (probe.degenerate()) return {0.0, 0.0, 0.0, true};
  const double delta = probe.delta();
  const double curvature = phi_derivatives(probe, alpha).second;
  const double x = delta * alpha;
  SandwichResult out;
  out.lower = exp_remainder2(-x) / (delta * delta) * curvature;
  out.gap = bregman_gap(probe, alpha);
  out.upper = exp_remainder2(x) / (delta * delta) * curvature;
  return out;
}

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidInput("empty step grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw InvalidInput("grid points must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidInput("grid must be strictly ascending");
  }
}

}  // namespace

GridCheck ratio_monotonicity_check(const LogPartitionProbe& probe, const std::vector<double>& alpha_grid) {
  check_grid(alpha_grid);
  GridCheck out;
  if (probe.degenerate()) {
    out.degenerate = true;
    return out;
  }
  const double delta = probe.delta();
  bool denominators_positive = true;
  for (double a : alpha_grid) {
    const double denominator = exp_ratio_denominator(delta * a);
    denominators_positive = denominators_positive && denominator > 0.0;
    out.values.push_back(bregman_gap(probe, a) / denominator);
  }
  out.worst = alpha_grid.size() > 1 ? -std::numeric_limits<double>::infinity() : 0.0;
  if (!denominators_positive) out.worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < out.values.size(); ++i) {
    const double excess = out.values[i] - (out.values[i - 1] * (1.0 + 1e-8) + 1e-12);
    out.worst = std::max(out.worst, excess);
  }
  out.pass = out.worst <= 0.0;
  return out;
}

double kappa(double delta, double alpha_bar) {
  return delta * delta / (2.0 * exp_ratio_denominator(delta * alpha_bar));
}

GridCheck kappa_bound_check(const LogPartitionProbe& probe, double alpha_bar, const std::vector<double>& alpha_grid) {
  check_grid(alpha_grid);
  if (!(alpha_bar > 0.0)) throw InvalidInput("alpha_bar must be positive");
  if (alpha_grid.back() > alpha_bar) throw InvalidInput("kappa grid must lie in (0, alpha_bar]");
  GridCheck out;
  if (probe.degenerate()) {
    out.degenerate = true;
    return out;
  }
  const double rhs = kappa(probe.delta(), alpha_bar) * bregman_gap(probe, alpha_bar);
  out.worst = -std::numeric_limits<double>::infinity();
  for (double a : alpha_grid) {
    const double lhs = bregman_gap(probe, a) / (a * a);
    out.values.push_back(lhs);
    // Violation measured relative to the right-hand side.
    out.worst = std::max(out.worst, rhs * (1.0 - 1e-9) - lhs);
  }
  out.pass = out.worst <= 0.0;
  return out;
}

double inner_product_check(const DensityState& rho, const HermitianOperator& gradient, double alpha) {
  const DensityState next = eg_step(rho, gradient, alpha);
  const double divergence = quantum_relative_entropy(next, rho);
  const double inner = trace_inner_product(gradient, next.matrix()) - trace_inner_product(gradient, rho.matrix());
  return -divergence / alpha - inner;
}

double inner_product_check(const DensityState& rho, const ObjectiveSpec& f, double alpha) {
  return inner_product_check(rho, f.gradient(rho), alpha);
}

FixedPointResult fixed_point_check(const DensityState& rho, const ObjectiveSpec& f,
                                   const std::vector<double>& alpha_grid, Rng& rng, int samples) {
  check_grid(alpha_grid);
  const HermitianOperator gradient = f.gradient(rho);
  FixedPointResult out;
  for (double a : alpha_grid) {
    const DensityState next = eg_step(rho, gradient, a);
    out.movement = std::max(out.movement, schatten_norm(next.matrix() - rho.matrix(), SchattenOrder::One));
  }
  out.fixed = out.movement <= 1e-10;
  if (!out.fixed) return out;

  const double at_rho = trace_inner_product(gradient, rho.matrix());
  out.optimality_margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    HermitianOperator sigma;
    if (s % 2 == 0) {
      sigma = random_density(rho.dim(), rng, 1.0 + 4.0 * (s % 4 == 0)).matrix();
    } else {
      // Pure states probe the boundary of the feasible set.
      const ComplexMatrix u = random_unitary(rho.dim(), rng);
      sigma = HermitianOperator(u.col(0) * u.col(0).adjoint());
    }
    out.optimality_margin = std::min(out.optimality_margin, trace_inner_product(gradient, sigma) - at_rho);
  }
  return out;
}

SelfConcordanceResult self_concordance_check(const LogPartitionProbe& probe, const std::vector<double>& alpha_grid) {
  check_grid(alpha_grid);
  SelfConcordanceResult out;
  out.worst = -std::numeric_limits<double>::infinity();
  const double delta = probe.delta();
  for (double a : alpha_grid) {
    for (const PhiDerivatives& d : {phi_derivatives(probe, a), eta_moments(probe, a)}) {
      const double bound = delta * d.second;
      out.worst = std::max(out.worst, (std::abs(d.third) - bound) / std::max(1.0, bound));
    }
  }
  out.pass = out.worst <= 1e-10;
  return out;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw InvalidInput("invalid geometric grid");
  std::vector<double> grid(count);
  const double ratio = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) grid[i] = lo * std::exp(ratio * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::string to_string(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::RandomHermitian: return "random-hermitian";
    case ProbeKind::QstGradient: return "qst-gradient";
    case ProbeKind::Commuting: return "commuting";
  }
  return "unknown";
}

ProbeCase make_probe(std::uint64_t seed, std::uint64_t index) {
  static constexpr std::array<int, 4> kDims{2, 3, 5, 8};
  Rng rng = substream(seed, index);
  const int d = kDims[index % kDims.size()];
  const auto kind = static_cast<ProbeKind>(index % 3);
  switch (kind) {
    case ProbeKind::RandomHermitian: {
      DensityState rho = random_density(d, rng);
      HermitianOperator g = random_hermitian(d, rng);
      return {seed, index, kind, LogPartitionProbe(std::move(rho), std::move(g))};
    }
    case ProbeKind::QstGradient: {
      DensityState rho = random_density(d, rng, 2.0);
      std::vector<HermitianOperator> ops;
      for (int i = 0; i < d + 1; ++i) ops.push_back(random_psd(d, rng));
      const HermitianOperator grad = qst_objective(MeasurementEnsemble(d, std::move(ops))).gradient(rho);
      // Positive rescaling of f only reparametrizes the step size.
      HermitianOperator g = (-1.0 / grad.matrix().norm()) * grad;
      return {seed, index, kind, LogPartitionProbe(std::move(rho), std::move(g))};
    }
    case ProbeKind::Commuting: {
      const ComplexMatrix u = random_unitary(d, rng);
      RealVector log_p(d), g_diag(d);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int i = 0; i < d; ++i) {
        log_p(i) = 0.5 * normal(rng);
        g_diag(i) = normal(rng);
      }
      g_diag /= g_diag.norm();
      const auto rotate = [&u](const RealVector& v) {
        return HermitianOperator(u * v.cast<Complex>().asDiagonal() * u.adjoint());
      };
      return {seed, index, kind, LogPartitionProbe(DensityState::from_exponent(rotate(log_p)), rotate(g_diag))};
    }
  }
  throw InvalidInput("unknown probe kind");
}

std::vector<ProbeCase> make_probe_suite(std::uint64_t seed, int samples) {
  if (samples < 1) throw InvalidInput("probe suite needs at least one sample");
  std::vector<ProbeCase> suite;
  suite.reserve(samples);
  for (int i = 0; i < samples; ++i) suite.push_back(make_probe(seed, static_cast<std::uint64_t>(i)));
  return suite;
}

}  // namespace expgrad
