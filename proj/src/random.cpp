#include "expgrad/random.hpp"

#include <cmath>

#include "expgrad/error.hpp"

namespace expgrad {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ComplexMatrix gaussian_matrix(int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix a(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = Complex(re, im);
    }
  }
  return a;
}

void check_dim(int dim) {
  if (dim < 1) throw InvalidInput("random matrix dimension must be >= 1");
}

}  // namespace

Rng substream(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t mixed = splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(seed)};
  return Rng(seq);
}

HermitianOperator random_hermitian(int dim, Rng& rng) {
  check_dim(dim);
  HermitianOperator h(gaussian_matrix(dim, rng));
  const double norm = h.matrix().norm();
  return norm > 0.0 ? h * (1.0 / norm) : h;
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
  check_dim(dim);
  const ComplexMatrix a = gaussian_matrix(dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

DensityState random_density(int dim, Rng& rng, double scale) {
  return DensityState::from_exponent(scale * random_hermitian(dim, rng));
}

HermitianOperator random_psd(int dim, Rng& rng) {
  check_dim(dim);
  const ComplexMatrix a = gaussian_matrix(dim, rng);
  return HermitianOperator(a.adjoint() * a);
}

ProbabilityVector random_probability(int dim, Rng& rng) {
  check_dim(dim);
  std::exponential_distribution<double> expo(1.0);
  RealVector w(dim);
  for (int i = 0; i < dim; ++i) w(i) = expo(rng) + 0.05;
  return ProbabilityVector::from_values(w / w.sum());
}

}  // namespace expgrad
