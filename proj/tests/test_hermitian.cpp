#include <doctest.h>

#include <cmath>

#include "expgrad/error.hpp"
#include "expgrad/hermitian.hpp"
#include "expgrad/io.hpp"
#include "expgrad/numeric.hpp"
#include "test_support.hpp"

using namespace expgrad;
using expgrad::testing::diag;
using expgrad::testing::frobenius_distance;

TEST_CASE("constructor symmetrizes") {
  ComplexMatrix m(2, 2);
  m << Complex(1, 0), Complex(2, 1), Complex(0, 0), Complex(3, 0);
  const HermitianOperator h(m);
  CHECK(std::abs(h(0, 1) - std::conj(h(1, 0))) < 1e-12);
  CHECK(h(0, 1) == Complex(1, 0.5));
  CHECK_THROWS_AS(HermitianOperator(ComplexMatrix::Zero(2, 3)), InvalidInput);
}

TEST_CASE("spectral_decompose") {
  SUBCASE("identity") {
    const auto s = spectral_decompose(HermitianOperator::identity(2));
    CHECK(s.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(s.eigenvalues(1) == doctest::Approx(1.0));
  }
  SUBCASE("diagonal sorted ascending") {
    const auto s = spectral_decompose(diag({3, -1}));
    CHECK(s.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(s.eigenvalues(1) == doctest::Approx(3.0));
  }
  SUBCASE("random reconstruction and unitarity") {
    Rng rng = substream(11, 0);
    for (int trial = 0; trial < 20; ++trial) {
      const HermitianOperator a = 3.0 * random_hermitian(5, rng);
      const auto s = spectral_decompose(a);
      CHECK(frobenius_distance(s.reconstruct().matrix(), a.matrix()) <= 1e-10 * std::max(1.0, a.matrix().norm()));
      CHECK((s.eigenvectors.adjoint() * s.eigenvectors - ComplexMatrix::Identity(5, 5)).norm() <= 1e-10);
      for (int i = 1; i < 5; ++i) CHECK(s.eigenvalues(i) >= s.eigenvalues(i - 1));
    }
  }
  SUBCASE("non-finite input") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = Complex(std::nan(""), 0);
    CHECK_THROWS_AS(spectral_decompose(HermitianOperator(m)), InvalidInput);
  }
}

TEST_CASE("eigenvalue grouping") {
  const auto s = spectral_decompose(diag({1, 1 + 1e-13, 2, 5, 5}));
  const auto groups = s.groups();
  REQUIRE(groups.size() == 3);
  CHECK(groups[0].count == 2);
  CHECK(groups[1].value == doctest::Approx(2.0));
  CHECK(groups[2].count == 2);
  CHECK(frobenius_distance(s.projector(groups[0]).matrix(), diag({1, 1, 0, 0, 0}).matrix()) < 1e-12);
}

TEST_CASE("matrix_function") {
  const auto exp_fn = [](double x) { return std::exp(x); };
  const auto log_fn = [](double x) { return std::log(x); };
  CHECK(frobenius_distance(matrix_function(diag({0, 0}), exp_fn).matrix(), ComplexMatrix::Identity(2, 2)) < 1e-15);
  const auto e = matrix_function(diag({1, 2}), exp_fn);
  CHECK(frobenius_distance(matrix_function(e, log_fn).matrix(), diag({1, 2}).matrix()) < 1e-10);
  const auto r = matrix_function(diag({4, 9}), [](double x) { return std::sqrt(x); });
  CHECK(frobenius_distance(r.matrix(), diag({2, 3}).matrix()) < 1e-14);
  CHECK_THROWS_AS(matrix_function(diag({1, -1}), log_fn), DomainError);
  CHECK_THROWS_AS(matrix_function(diag({1, 0}), log_fn), DomainError);
}

TEST_CASE("matrix_function properties on random inputs") {
  Rng rng = substream(12, 0);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + trial % 6;
    const HermitianOperator a = 2.0 * random_hermitian(d, rng);
    const auto same = matrix_function(a, [](double x) { return x; });
    CHECK(frobenius_distance(same.matrix(), a.matrix()) <= 1e-10);

    const HermitianOperator pd = matrix_function(a, [](double x) { return std::exp(x); });
    const HermitianOperator back = matrix_function(
        matrix_function(pd, [](double x) { return std::log(x); }), [](double x) { return std::exp(x); });
    CHECK(frobenius_distance(back.matrix(), pd.matrix()) <= 1e-9 * pd.matrix().norm());

    const double s1 = schatten_norm(a, SchattenOrder::One);
    const double s2 = schatten_norm(a, SchattenOrder::Two);
    const double sinf = schatten_norm(a, SchattenOrder::Infinity);
    CHECK(s1 >= s2 - 1e-12);
    CHECK(s2 >= sinf - 1e-12);
    CHECK(trace_inner_product(a, a) >= 0.0);
    CHECK(trace_inner_product(a, a) == doctest::Approx(s2 * s2).epsilon(1e-12));
  }
}

TEST_CASE("trace_inner_product") {
  CHECK(trace_inner_product(HermitianOperator::identity(2), HermitianOperator::identity(2)) == 2.0);
  CHECK(trace_inner_product(diag({1, 2}), diag({3, 4})) == 11.0);
  Rng rng = substream(13, 0);
  const auto a = random_hermitian(4, rng);
  const auto b = random_hermitian(4, rng);
  CHECK(trace_inner_product(a, b) == doctest::Approx(trace_inner_product(b, a)).epsilon(1e-14));
  // Independent evaluation as tr(AB) for Hermitian A.
  CHECK(trace_inner_product(a, b) == doctest::Approx((a.matrix() * b.matrix()).trace().real()).epsilon(1e-12));
  CHECK_THROWS_AS(trace_inner_product(a, HermitianOperator::identity(3)), InvalidInput);
}

TEST_CASE("schatten_norm and eigen_extremes") {
  CHECK(schatten_norm(diag({1, -1}), SchattenOrder::One) == doctest::Approx(2.0));
  CHECK(schatten_norm(diag({3, -4}), SchattenOrder::Infinity) == doctest::Approx(4.0));
  CHECK(schatten_norm(diag({3, -4}), SchattenOrder::Two) == doctest::Approx(5.0));
  for (auto p : {SchattenOrder::One, SchattenOrder::Two, SchattenOrder::Infinity}) {
    CHECK(schatten_norm(HermitianOperator::zero(3), p) == 0.0);
  }
  auto e = eigen_extremes(diag({1, 1}));
  CHECK(e.width() == 0.0);
  e = eigen_extremes(diag({-2, 5}));
  CHECK(e.min == doctest::Approx(-2.0));
  CHECK(e.max == doctest::Approx(5.0));

  Rng rng = substream(14, 0);
  const auto a = random_hermitian(6, rng);
  const auto s = spectral_decompose(a);
  e = eigen_extremes(a);
  CHECK(e.min == doctest::Approx(s.eigenvalues(0)).epsilon(1e-12));
  CHECK(e.max == doctest::Approx(s.eigenvalues(5)).epsilon(1e-12));
}

TEST_CASE("numerically stable helpers") {
  CHECK(log_sum_exp(testing::vec({1000.0, 1000.0})) == doctest::Approx(1000.0 + std::log(2.0)));
  CHECK(log_sum_exp(testing::vec({-1000.0, 0.0})) == doctest::Approx(0.0));
  for (double x : {-3.0, -0.4, -1e-3, 1e-6, 0.3, 0.6, 4.0}) {
    // Reference values from the unreduced closed forms in long double.
    const long double xl = x;
    CHECK(exp_remainder2(x) == doctest::Approx(static_cast<double>(std::exp(xl) - 1.0L - xl)).epsilon(1e-9));
    CHECK(exp_ratio_denominator(x) ==
          doctest::Approx(static_cast<double>(std::exp(xl) * (xl - 1.0L) + 1.0L)).epsilon(1e-7));
  }
  CHECK(exp_divided_difference(0.3, 0.3) == doctest::Approx(std::exp(0.3)));
  CHECK(exp_divided_difference(1.0, 3.0) == doctest::Approx((std::exp(3.0) - std::exp(1.0)) / 2.0));
  // f[a,b,c] of exp at nearly coincident nodes tends to exp(a)/2.
  CHECK(exp_divided_difference(0.5, 0.5 + 1e-9, 0.5 - 1e-9) == doctest::Approx(std::exp(0.5) / 2).epsilon(1e-12));
  // Both branches agree across the switch-over spread.
  const double lo = exp_divided_difference(0.0, 0.005, 0.0099);
  const double hi = exp_divided_difference(0.0, 0.005, 0.0101);
  CHECK(lo == doctest::Approx(hi).epsilon(1e-3));
  const double direct = ((std::exp(2.0) - std::exp(1.0)) / 1.0 - (std::exp(1.0) - std::exp(0.0)) / 1.0) / 2.0;
  CHECK(exp_divided_difference(0.0, 1.0, 2.0) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("complex matrix JSON format") {
  ComplexMatrix m(2, 2);
  m << Complex(1, 0), Complex(0.5, -0.25), Complex(0.5, 0.25), Complex(2, 0);
  const Json j = matrix_to_json(m);
  CHECK(j.dump() == "[[[1.0,0.0],[0.5,-0.25]],[[0.5,0.25],[2.0,0.0]]]");
  CHECK(matrix_from_json(j) == m);
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[[1,2],[3,4]]")), InvalidInput);
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[[[1,0]],[[0,0]]]")), InvalidInput);
}
