#include <doctest.h>

#include <cmath>
#include <sstream>

#include "expgrad/entropy.hpp"
#include "expgrad/error.hpp"
#include "expgrad/objectives.hpp"
#include "expgrad/random.hpp"
#include "expgrad/solver.hpp"
#include "test_support.hpp"

using namespace expgrad;
using expgrad::testing::diag;
using expgrad::testing::vec;

namespace {

MeasurementEnsemble random_ensemble(int d, int n, Rng& rng) {
  std::vector<HermitianOperator> ops;
  for (int i = 0; i < n; ++i) ops.push_back(random_psd(d, rng));
  return MeasurementEnsemble(d, ops);
}

MeasurementEnsemble basis_ensemble() {
  return MeasurementEnsemble::diagonal({vec({1.0, 0.0}), vec({0.0, 1.0})});
}

double trace_norm(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  return es.eigenvalues().cwiseAbs().sum();
}

double mirror_objective(const DensityState& sigma, const DensityState& rho, const HermitianOperator& g,
                        double alpha) {
  return trace_inner_product(g, sigma.matrix()) + quantum_relative_entropy(sigma, rho) / alpha;
}

}  // namespace

TEST_CASE("eg_step") {
  Rng rng = substream(41, 0);
  const auto rho = random_density(3, rng, 2.0);
  // Shifting the gradient by a multiple of the identity changes nothing.
  const auto same = eg_step(rho, 7.0 * HermitianOperator::identity(3), 0.8);
  CHECK(testing::frobenius_distance(same.matrix().matrix(), rho.matrix().matrix()) <= 1e-13);

  const auto g = random_hermitian(3, rng);
  const auto a = eg_step(rho, g, 0.4);
  const auto b = eg_step(rho, g + 3.0 * HermitianOperator::identity(3), 0.4);
  CHECK(testing::frobenius_distance(a.matrix().matrix(), b.matrix().matrix()) <= 1e-13);
  CHECK(std::abs(a.matrix().matrix().trace().real() - 1.0) <= 1e-13);

  // diag(1/2, 1/2) with g = diag(1, 0) and alpha = log 2 gives diag(1/3, 2/3).
  const auto two = eg_step(DensityState::maximally_mixed(2), diag({1.0, 0.0}), std::log(2.0));
  CHECK(two.eigenvalues()(0) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(two.eigenvalues()(1) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(std::abs(two.matrix()(0, 0).real() - 1.0 / 3) <= 1e-14);

  // Huge steps stay finite in the log domain.
  const auto extreme = eg_step(DensityState::maximally_mixed(2), diag({1.0, 0.0}), 1e4);
  CHECK(extreme.log_eigenvalues().allFinite());
  CHECK(extreme.floor_clamped());
  CHECK_FALSE(extreme.singular());

  const auto x = eg_step(ProbabilityVector::uniform(3), vec({1.0, 0.0, -1.0}), 1.0);
  const RealVector expected = vec({std::exp(-1.0), 1.0, std::exp(1.0)}) / (std::exp(-1.0) + 1.0 + std::exp(1.0));
  CHECK((x.values() - expected).norm() <= 1e-15);
}

TEST_CASE("eg_step solves the entropic proximal problem") {
  Rng rng = substream(42, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 2 + trial % 3;
    const auto rho = random_density(d, rng, 1.5);
    const auto g = random_hermitian(d, rng);
    for (double alpha : {0.1, 1.0, 3.0}) {
      const auto step = eg_step(rho, g, alpha);
      const double best = mirror_objective(step, rho, g, alpha);
      double worst_margin = 1.0;
      for (int c = 0; c < 50; ++c) {
        const auto cand = random_density(d, rng, 3.0 * (c % 5 + 1) / 5.0);
        worst_margin = std::min(worst_margin, mirror_objective(cand, rho, g, alpha) - best);
      }
      CHECK(worst_margin >= -1e-10);
    }
  }
  // Diagonal case against a fine grid on the segment.
  const auto rho = DensityState::from_diagonal(vec({0.3, 0.7}));
  const auto g = diag({0.4, -0.9});
  const auto step = eg_step(rho, g, 0.7);
  const double best = mirror_objective(step, rho, g, 0.7);
  for (int i = 1; i < 200; ++i) {
    const double p = i / 200.0;
    CHECK(mirror_objective(DensityState::from_diagonal(vec({p, 1 - p})), rho, g, 0.7) >= best - 1e-12);
  }
}

TEST_CASE("solver config") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.step_size(0) == 1.0);
  CHECK(cfg.step_size(3) == 0.125);
  cfg.alpha_bar = 2.0;
  cfg.shrink = 0.3;
  CHECK(cfg.step_size(2) == 2.0 * std::pow(0.3, 2));
  for (auto mutate : std::vector<std::function<void(SolverConfig&)>>{
           [](SolverConfig& c) { c.alpha_bar = 0; }, [](SolverConfig& c) { c.shrink = 1; },
           [](SolverConfig& c) { c.tau = 0; }, [](SolverConfig& c) { c.max_iters = -1; },
           [](SolverConfig& c) { c.stop_tol = -1; }, [](SolverConfig& c) { c.max_backtracks = -1; }}) {
    SolverConfig bad;
    mutate(bad);
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
  }
}

TEST_CASE("armijo_search") {
  SolverConfig cfg;
  Rng rng = substream(43, 0);
  const auto center = random_density(3, rng);
  const auto quad = quadratic_objective(0.5, center.matrix());
  const auto rho = random_density(3, rng);
  const auto res = armijo_search(rho, quad, cfg);
  CHECK(res.backtracks == 0);
  CHECK(res.alpha == 1.0);
  CHECK_FALSE(res.cap_hit);

  // At the minimizer the full step is accepted with both sides equal.
  const auto basis = qst_objective(basis_ensemble());
  const auto mixed = DensityState::maximally_mixed(2);
  const auto at = armijo_search(mixed, basis, cfg);
  CHECK(at.backtracks == 0);
  CHECK(std::abs(at.next_value - basis.value(mixed)) <= 1e-12);
  CHECK(testing::frobenius_distance(at.next.matrix().matrix(), mixed.matrix().matrix()) <= 1e-12);

  // A long first step on a barrier-heavy objective needs backtracking.
  const auto ens = random_ensemble(3, 4, rng);
  SolverConfig aggressive;
  aggressive.alpha_bar = 1e4;
  const auto hedged = hedged_qst_objective(ens, 5.0);
  const auto start = DensityState::from_diagonal(vec({0.8, 0.15, 0.05}));
  const auto bt = armijo_search(start, hedged, aggressive);
  REQUIRE(bt.backtracks >= 2);
  CHECK(std::isfinite(bt.next_value));
  CHECK(bt.alpha == aggressive.step_size(bt.backtracks));
  const double decrease =
      hedged.value(start) + aggressive.tau * trace_inner_product(hedged.gradient(start), bt.next.matrix() - start.matrix());
  CHECK(bt.next_value <= decrease);

  SolverConfig capped = aggressive;
  capped.max_backtracks = bt.backtracks - 1;
  CHECK(armijo_search(start, hedged, capped).cap_hit);
}

TEST_CASE("solve on the two-outcome basis instance") {
  const auto f = qst_objective(basis_ensemble());
  SolverConfig cfg;
  const auto res = solve(DensityState::from_diagonal(vec({0.9, 0.1})), f, cfg);
  CHECK(res.status != SolveStatus::BacktrackCapHit);
  CHECK(res.status != SolveStatus::MaxIters);
  CHECK(trace_norm(res.final_state.matrix().matrix() - 0.5 * ComplexMatrix::Identity(2, 2)) <= 1e-6);
  CHECK(res.trace.back().f_value == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));

  // Already optimal: stops immediately.
  const auto at = solve(DensityState::maximally_mixed(2), f, cfg);
  CHECK(at.status == SolveStatus::Stationary);
  REQUIRE(at.trace.size() == 1);
  CHECK(at.trace[0].k == 1);
  CHECK(at.trace[0].f_value == doctest::Approx(2 * std::log(2.0)));

  // Same for a quadratic centred at the start, where round-off would defeat the line search.
  Rng rng = substream(46, 0);
  const auto center = random_density(3, rng);
  const auto quad_at = solve(center, quadratic_objective(1.0, center.matrix()), cfg);
  CHECK(quad_at.status == SolveStatus::Stationary);
  CHECK(quad_at.trace.size() == 1);

  SolverConfig none;
  none.max_iters = 0;
  const auto zero = solve(DensityState::maximally_mixed(2), f, none);
  CHECK(zero.trace.empty());
  CHECK(zero.status == SolveStatus::MaxIters);
}

TEST_CASE("solve produces monotone feasible iterates") {
  Rng rng = substream(44, 0);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 2 + trial % 3;
    const auto ens = random_ensemble(d, d + 2, rng);
    const auto f = hedged_qst_objective(ens, 0.05);
    SolverConfig cfg;
    cfg.max_iters = 400;
    DensityState prev = DensityState::maximally_mixed(d);
    double prev_f = f.value(prev);
    int count = 0;
    bool composed = true;
    const auto sink = [&](const IterationRecord& rec, const DensityState& next) {
      ++count;
      CHECK(rec.k == count);
      CHECK(rec.alpha == cfg.step_size(rec.backtracks));
      // The iterate is exactly the EG step from the previous one at the recorded alpha.
      const auto expected = eg_step(prev, f.gradient(prev), rec.alpha);
      composed = composed && testing::frobenius_distance(expected.matrix().matrix(), next.matrix().matrix()) <= 1e-10;
      const double d_next = quantum_relative_entropy(next, prev);
      CHECK(rec.f_value <= prev_f - cfg.tau * d_next / rec.alpha + 1e-10 * std::max(1.0, std::abs(prev_f)));
      CHECK(std::abs(next.matrix().matrix().trace().real() - 1.0) <= 1e-12);
      CHECK(next.min_eigenvalue() > 0.0);
      CHECK(rec.min_eig == next.min_eigenvalue());
      CHECK(rec.bregman_gap_bar >= 0.0);
      prev = next;
      prev_f = rec.f_value;
    };
    const auto res = solve(DensityState::maximally_mixed(d), f, cfg, sink);
    CHECK(composed);
    CHECK(static_cast<int>(res.trace.size()) == count);
    CHECK(res.status != SolveStatus::BacktrackCapHit);
    CHECK(res.final_state.min_eigenvalue() > 1e-6);
  }
}

TEST_CASE("simplex solver") {
  const auto burg = burg_objective(3);
  SolverConfig cfg;
  // The gap is quadratic in the distance to the optimum, so 1e-6 in l1 needs a tighter stop.
  cfg.stop_tol = 1e-14;
  const auto res = solve_simplex(ProbabilityVector::from_values(vec({0.7, 0.2, 0.1})), burg, cfg);
  CHECK((res.final_state.values() - RealVector::Constant(3, 1.0 / 3)).lpNorm<1>() <= 1e-6);

  // The simplex iterates match the matrix iterates on diagonal inputs.
  Rng rng = substream(45, 0);
  std::vector<RealVector> rows;
  for (int i = 0; i < 5; ++i) rows.push_back(random_probability(4, rng).values());
  const auto vf = poisson_linear_objective(rows);
  const auto mf = qst_objective(MeasurementEnsemble::diagonal(rows));
  SolverConfig short_cfg;
  short_cfg.max_iters = 30;
  std::vector<RealVector> vector_iterates;
  std::vector<RealVector> matrix_iterates;
  solve_simplex(ProbabilityVector::uniform(4), vf, short_cfg,
                [&](const IterationRecord&, const ProbabilityVector& x) { vector_iterates.push_back(x.values()); });
  solve(DensityState::maximally_mixed(4), mf, short_cfg, [&](const IterationRecord&, const DensityState& r) {
    matrix_iterates.push_back(r.matrix().matrix().diagonal().real());
  });
  REQUIRE(vector_iterates.size() == matrix_iterates.size());
  for (std::size_t k = 0; k < vector_iterates.size(); ++k) {
    CHECK((vector_iterates[k] - matrix_iterates[k]).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("trace csv") {
  IterationRecord rec;
  rec.k = 1;
  rec.f_value = 0.1;
  rec.alpha = 0.5;
  rec.backtracks = 1;
  rec.delta = 2.0;
  rec.bregman_gap_bar = 1e-3;
  rec.min_eig = 0.25;
  std::ostringstream out;
  write_trace_csv(out, {rec});
  CHECK(out.str() ==
        "k,f,alpha,backtracks,delta,bregman_gap_bar,min_eig\n"
        "1,0.10000000000000001,0.5,1,2,0.001,0.25\n");
  CHECK(std::stod(format_double(0.1)) == 0.1);
}
