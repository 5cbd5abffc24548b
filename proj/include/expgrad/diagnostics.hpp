#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "expgrad/density.hpp"
#include "expgrad/objectives.hpp"
#include "expgrad/random.hpp"

namespace expgrad {

/// Log-partition function phi(alpha) = log tr exp(log rho + alpha G) of the
/// EG step from rho along G := -grad f(rho).
class LogPartitionProbe {
 public:
  LogPartitionProbe(DensityState base, HermitianOperator direction);
  static LogPartitionProbe from_objective(const DensityState& rho, const ObjectiveSpec& f);

  const DensityState& base() const { return base_; }
  /// G = -grad f(rho).
  const HermitianOperator& direction() const { return direction_; }
  HermitianOperator gradient() const { return -1.0 * direction_; }
  const SpectralDecomposition& direction_spectrum() const { return spectrum_; }
  const std::vector<EigenGroup>& groups() const { return groups_; }
  /// lambda_max(grad f) - lambda_min(grad f).
  double delta() const { return delta_; }
  /// G is a multiple of the identity (a single eigenvalue group).
  bool degenerate() const { return groups_.size() == 1; }
  int dim() const { return base_.dim(); }

 private:
  DensityState base_;
  HermitianOperator direction_;
  SpectralDecomposition spectrum_;
  std::vector<EigenGroup> groups_;
  double delta_ = 0.0;
};

/// Distribution of eta_alpha: value lambda_j of G with probability
/// tr(P_j exp(H_alpha)) / tr exp(H_alpha).
struct EtaDistribution {
  std::vector<double> values;
  std::vector<double> weights;
};

struct PhiDerivatives {
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;
};

double phi(const LogPartitionProbe& probe, double alpha);

EtaDistribution eta_distribution(const LogPartitionProbe& probe, double alpha);

/// Mean, variance and third central moment of eta_alpha. These are the
/// derivatives of phi when log rho and G commute; otherwise only the mean is.
PhiDerivatives eta_moments(const LogPartitionProbe& probe, double alpha);

/// Exact phi', phi'', phi''' from divided differences of exp in the
/// eigenbasis of H_alpha (second and third Frechet derivatives of tr exp).
PhiDerivatives phi_derivatives(const LogPartitionProbe& probe, double alpha);

/// D(rho(alpha), rho) = phi(0) - phi(alpha) + alpha phi'(alpha).
double bregman_gap(const LogPartitionProbe& probe, double alpha);

struct SandwichResult {
  double lower = 0.0;
  double gap = 0.0;
  double upper = 0.0;
  bool degenerate = false;
  bool holds() const { return lower <= gap + 1e-9 && gap <= upper + 1e-9 && lower >= -1e-12; }
};

/// (e^{-D a} + D a - 1) / D^2 phi''(a) <= gap(a) <= (e^{D a} - D a - 1) / D^2 phi''(a), D = delta.
SandwichResult sandwich_check(const LogPartitionProbe& probe, double alpha);

struct GridCheck {
  bool pass = true;
  bool degenerate = false;
  /// Largest contract violation; <= 0 when the contract holds.
  double worst = 0.0;
  std::vector<double> values;
};

/// gap(a) / (e^{D a}(D a - 1) + 1) must be non-increasing along the grid.
GridCheck ratio_monotonicity_check(const LogPartitionProbe& probe, const std::vector<double>& alpha_grid);

/// kappa = D^2 / (2 [e^{D a_bar}(D a_bar - 1) + 1]).
double kappa(double delta, double alpha_bar);

/// gap(a) / a^2 >= kappa gap(a_bar) for every grid point in (0, a_bar].
GridCheck kappa_bound_check(const LogPartitionProbe& probe, double alpha_bar, const std::vector<double>& alpha_grid);

/// -D(rho(a), rho) / a - <grad, rho(a) - rho>; nonnegative up to round-off.
double inner_product_check(const DensityState& rho, const HermitianOperator& gradient, double alpha);
double inner_product_check(const DensityState& rho, const ObjectiveSpec& f, double alpha);

struct FixedPointResult {
  bool fixed = false;
  double movement = 0.0;           // max over the grid of |rho(a) - rho|_1
  double optimality_margin = 0.0;  // min over sampled sigma of <grad f(rho), sigma - rho>
  bool pass() const { return fixed && optimality_margin >= -1e-8; }
};

/// A state is reported fixed when every grid step moves it by at most 1e-10
/// in trace norm; fixed states are then probed for first-order optimality
/// against `samples` random feasible states.
FixedPointResult fixed_point_check(const DensityState& rho, const ObjectiveSpec& f,
                                   const std::vector<double>& alpha_grid, Rng& rng, int samples = 100);

struct SelfConcordanceResult {
  /// max over grid of (|phi'''| - D phi'') / max(1, D phi'').
  double worst = 0.0;
  bool pass = true;
};

SelfConcordanceResult self_concordance_check(const LogPartitionProbe& probe, const std::vector<double>& alpha_grid);

/// Geometric grid of `count` points from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, int count);

enum class ProbeKind { RandomHermitian, QstGradient, Commuting };

std::string to_string(ProbeKind kind);

struct ProbeCase {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  ProbeKind kind = ProbeKind::RandomHermitian;
  LogPartitionProbe probe;
};

/// Probe i uses substream(seed, i), dimension cycling through {2, 3, 5, 8}
/// and the kinds in turn: unit-norm random Hermitian G, unit-norm QST
/// gradient direction, or (rho, G) diagonal in a shared random basis.
ProbeCase make_probe(std::uint64_t seed, std::uint64_t index);
std::vector<ProbeCase> make_probe_suite(std::uint64_t seed, int samples);

/// One line of a diagnostics report.
struct CheckRecord {
  std::string check;
  std::uint64_t seed = 0;
  int dim = 0;
  bool pass = false;
  double worst_margin = 0.0;
};

inline const std::vector<std::string>& diagnostic_suites() {
  static const std::vector<std::string> names{"sandwich", "ratio",       "moments",          "kappa",
                                              "fixed-point", "self-concordance", "all"};
  return names;
}

/// Runs a named suite over `samples` probes. Throws InvalidInput for an unknown suite.
std::vector<CheckRecord> run_diagnostic_suite(const std::string& suite, int samples, std::uint64_t seed);

}  // namespace expgrad
