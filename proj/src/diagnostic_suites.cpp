#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "expgrad/diagnostics.hpp"
#include "expgrad/entropy.hpp"
#include "expgrad/error.hpp"
#include "expgrad/solver.hpp"

namespace expgrad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CheckRecord record(const std::string& check, const ProbeCase& probe_case, bool pass, double margin) {
  return {check, probe_case.seed, probe_case.probe.dim(), pass, margin};
}

using ExtendedMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

// phi in extended precision, so difference quotients of order three stay
// above round-off.
long double phi_extended(const LogPartitionProbe& probe, long double alpha) {
  const ExtendedMatrix h = probe.base().exponent().matrix().cast<std::complex<long double>>() +
                           probe.direction().matrix().cast<std::complex<long double>>() * alpha;
  Eigen::SelfAdjointEigenSolver<ExtendedMatrix> solver(h, Eigen::EigenvaluesOnly);
  const auto& w = solver.eigenvalues();
  const long double top = w.maxCoeff();
  long double sum = 0.0L;
  for (Eigen::Index i = 0; i < w.size(); ++i) sum += std::exp(w(i) - top);
  return top + std::log(sum);
}

// Five-point central differences of phi at step h.
PhiDerivatives central_differences(const LogPartitionProbe& probe, double alpha, double step) {
  const long double a = alpha, h = step;
  const long double m2 = phi_extended(probe, a - 2 * h), m1 = phi_extended(probe, a - h);
  const long double c = phi_extended(probe, a);
  const long double p1 = phi_extended(probe, a + h), p2 = phi_extended(probe, a + 2 * h);
  return {static_cast<double>((p1 - m1) / (2 * h)), static_cast<double>((p1 - 2 * c + m1) / (h * h)),
          static_cast<double>((p2 - 2 * p1 + 2 * m1 - m2) / (2 * h * h * h))};
}

// Relative error of `value` against central differences at three steps (each
// with a Richardson-extrapolated companion); the best candidate counts. The
// k-th derivative is compared on the scale max(|value|, delta^k / 4), the
// bound on the k-th central moment of a variable of range delta.
PhiDerivatives finite_difference_error(const LogPartitionProbe& probe, double alpha, const PhiDerivatives& value) {
  PhiDerivatives best{kInf, kInf, kInf};
  const double delta = probe.delta();
  const auto scaled = [](double fd, double v, double unit) {
    return std::abs(fd - v) / std::max({std::abs(v), unit / 4.0, 1e-300});
  };
  const auto rel = [&](double fd, double v, int order) { return scaled(fd, v, std::pow(delta, order)); };
  for (double h : {1e-2, 1e-3, 1e-4}) {
    const PhiDerivatives fine = central_differences(probe, alpha, h);
    const PhiDerivatives coarse = central_differences(probe, alpha, 2 * h);
    const PhiDerivatives richardson{(4 * fine.first - coarse.first) / 3, (4 * fine.second - coarse.second) / 3,
                                    (4 * fine.third - coarse.third) / 3};
    for (const PhiDerivatives& fd : {fine, richardson}) {
      best.first = std::min(best.first, rel(fd.first, value.first, 1));
      best.second = std::min(best.second, rel(fd.second, value.second, 2));
      best.third = std::min(best.third, rel(fd.third, value.third, 3));
    }
  }
  return best;
}

void sandwich_suite(const std::vector<ProbeCase>& probes, std::vector<CheckRecord>& out) {
  for (const auto& pc : probes) {
    bool pass = true;
    double margin = kInf;
    for (double a : {0.1, 1.0, 5.0}) {
      const SandwichResult s = sandwich_check(pc.probe, a);
      if (s.degenerate) continue;
      pass = pass && s.holds();
      margin = std::min({margin, s.gap - s.lower, s.upper - s.gap});
    }
    out.push_back(record("sandwich", pc, pass, std::isfinite(margin) ? margin : 0.0));
  }
}

void ratio_suite(const std::vector<ProbeCase>& probes, std::vector<CheckRecord>& out) {
  const auto grid = geometric_grid(1e-3, 1e1, 25);
  for (const auto& pc : probes) {
    const GridCheck g = ratio_monotonicity_check(pc.probe, grid);
    out.push_back(record("ratio", pc, g.pass, -g.worst));
  }
}

void moments_suite(const std::vector<ProbeCase>& probes, std::vector<CheckRecord>& out) {
  for (const auto& pc : probes) {
    const LogPartitionProbe& probe = pc.probe;
    const double delta = probe.delta();
    double fd_worst = 0.0;
    double bound_margin = kInf;
    double identity_worst = 0.0;
    double eta_worst = 0.0;
    for (double a : {0.0, 0.5, 2.0}) {
      const PhiDerivatives exact = phi_derivatives(probe, a);
      const PhiDerivatives eta = eta_moments(probe, a);
      const PhiDerivatives err = finite_difference_error(probe, a, exact);
      fd_worst = std::max({fd_worst, err.first, err.second, err.third});
      bound_margin = std::min({bound_margin, delta * delta / 4 - exact.second, delta * delta / 4 - eta.second});
      identity_worst = std::max(identity_worst, std::abs(exact.first - eta.first) / std::max(1.0, std::abs(eta.first)));
      eta_worst = std::max({eta_worst, std::abs(exact.second - eta.second), std::abs(exact.third - eta.third)});
      if (a > 0.0) {
        const double moment_path = bregman_gap(probe, a);
        const double entropy_path =
            quantum_relative_entropy(eg_step(probe.base(), probe.gradient(), a), probe.base());
        identity_worst =
            std::max(identity_worst, std::abs(moment_path - entropy_path) / std::max(entropy_path, 1e-300));
      }
    }
    out.push_back(record("moments.finite-difference", pc, fd_worst <= 1e-5, 1e-5 - fd_worst));
    out.push_back(record("moments.variance-bound", pc, bound_margin >= -1e-10, bound_margin));
    out.push_back(record("moments.bregman-identity", pc, identity_worst <= 1e-8, 1e-8 - identity_worst));
    if (pc.kind == ProbeKind::Commuting) {
      out.push_back(record("moments.eta-commuting", pc, eta_worst <= 1e-10, 1e-10 - eta_worst));
    }
  }
}

void kappa_suite(const std::vector<ProbeCase>& probes, std::vector<CheckRecord>& out) {
  constexpr double kAlphaBar = 1.0;
  const auto grid = geometric_grid(1e-3 * kAlphaBar, kAlphaBar, 20);
  for (const auto& pc : probes) {
    const GridCheck g = kappa_bound_check(pc.probe, kAlphaBar, grid);
    out.push_back(record("kappa", pc, g.pass, g.degenerate ? 0.0 : -g.worst));
  }
}

void fixed_point_suite(const std::vector<ProbeCase>& probes, std::vector<CheckRecord>& out) {
  const std::vector<double> grid{0.1, 1.0, 10.0};
  for (const auto& pc : probes) {
    Rng rng = substream(pc.seed, 1'000'000 + pc.index);
    const DensityState& rho = pc.probe.base();

    // rho minimizes the quadratic centred at itself.
    const FixedPointResult optimum = fixed_point_check(rho, quadratic_objective(1.0, rho.matrix()), grid, rng);
    out.push_back(record("fixed-point.optimum", pc, optimum.pass(), optimum.optimality_margin));

    // The linear objective <G', rho> with a non-scalar G' has no interior fixed point.
    ObjectiveSpec linear;
    linear.dim = rho.dim();
    const HermitianOperator slope = pc.probe.gradient();
    linear.value = [slope](const DensityState& s) { return trace_inner_product(slope, s.matrix()); };
    linear.gradient = [slope](const DensityState&) { return slope; };
    linear.in_domain = [](const DensityState&) { return true; };
    const FixedPointResult moved = fixed_point_check(rho, linear, grid, rng);
    const bool expect_fixed = pc.probe.degenerate();
    out.push_back(record("fixed-point.perturbed", pc, moved.fixed == expect_fixed, moved.movement));

    double margin = kInf;
    for (double a : {1e-6, 0.1, 1.0}) margin = std::min(margin, inner_product_check(rho, slope, a));
    out.push_back(record("inner-product", pc, margin >= -1e-10, margin));
  }
}

void self_concordance_suite(const std::vector<ProbeCase>& probes, std::vector<CheckRecord>& out) {
  const auto grid = geometric_grid(1e-3, 1e1, 25);
  for (const auto& pc : probes) {
    const SelfConcordanceResult s = self_concordance_check(pc.probe, grid);
    out.push_back(record("self-concordance", pc, s.pass, -s.worst));
  }
}

}  // namespace

std::vector<CheckRecord> run_diagnostic_suite(const std::string& suite, int samples, std::uint64_t seed) {
  const auto& names = diagnostic_suites();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw InvalidInput("unknown diagnostics suite '" + suite + "'");
  }
  const auto probes = make_probe_suite(seed, samples);
  std::vector<CheckRecord> out;
  const bool all = suite == "all";
  if (all || suite == "sandwich") sandwich_suite(probes, out);
  if (all || suite == "ratio") ratio_suite(probes, out);
  if (all || suite == "moments") moments_suite(probes, out);
  if (all || suite == "kappa") kappa_suite(probes, out);
  if (all || suite == "fixed-point") fixed_point_suite(probes, out);
  if (all || suite == "self-concordance") self_concordance_suite(probes, out);
  return out;
}

}  // namespace expgrad
