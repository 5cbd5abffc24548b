#include "expgrad/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "expgrad/error.hpp"

namespace expgrad {

HermitianOperator::HermitianOperator(ComplexMatrix entries) {
  if (entries.rows() != entries.cols()) {
    throw InvalidInput("Hermitian operator must be square, got " + std::to_string(entries.rows()) + "x" +
                       std::to_string(entries.cols()));
  }
  entries_ = (entries + entries.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(ComplexMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(int dim) { return HermitianOperator(ComplexMatrix::Zero(dim, dim)); }

HermitianOperator HermitianOperator::diagonal(const RealVector& values) {
  return HermitianOperator(values.cast<Complex>().asDiagonal().toDenseMatrix());
}

bool HermitianOperator::is_finite() const {
  return entries_.real().allFinite() && entries_.imag().allFinite();
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& other) {
  if (other.dim() != dim()) throw InvalidInput("dimension mismatch in operator sum");
  entries_ += other.entries_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& other) {
  if (other.dim() != dim()) throw InvalidInput("dimension mismatch in operator difference");
  entries_ -= other.entries_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double scale) {
  entries_ *= scale;
  return *this;
}

HermitianOperator SpectralDecomposition::reconstruct() const {
  return HermitianOperator(eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint());
}

HermitianOperator SpectralDecomposition::projector(const EigenGroup& group) const {
  const auto cols = eigenvectors.middleCols(group.first, group.count);
  return HermitianOperator(cols * cols.adjoint());
}

std::vector<EigenGroup> SpectralDecomposition::groups() const {
  std::vector<EigenGroup> out;
  if (eigenvalues.size() == 0) return out;
  const double tol = 1e-10 * std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
  EigenGroup current{eigenvalues(0), 0, 1};
  double sum = eigenvalues(0);
  for (int i = 1; i < dim(); ++i) {
    if (eigenvalues(i) - eigenvalues(i - 1) <= tol) {
      ++current.count;
      sum += eigenvalues(i);
    } else {
      current.value = sum / current.count;
      out.push_back(current);
      current = EigenGroup{eigenvalues(i), i, 1};
      sum = eigenvalues(i);
    }
  }
  current.value = sum / current.count;
  out.push_back(current);
  return out;
}

SpectralDecomposition spectral_decompose(const HermitianOperator& a) {
  if (!a.is_finite()) throw InvalidInput("spectral decomposition of a non-finite operator");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) throw InvalidInput("Hermitian eigensolver did not converge");
  return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

HermitianOperator matrix_function(const SpectralDecomposition& spectrum, const std::function<double(double)>& g) {
  RealVector mapped(spectrum.dim());
  for (int i = 0; i < spectrum.dim(); ++i) {
    mapped(i) = g(spectrum.eigenvalues(i));
    if (!std::isfinite(mapped(i))) {
      throw DomainError("matrix function undefined at eigenvalue " + std::to_string(spectrum.eigenvalues(i)));
    }
  }
  return HermitianOperator(spectrum.eigenvectors * mapped.cast<Complex>().asDiagonal() *
                           spectrum.eigenvectors.adjoint());
}

HermitianOperator matrix_function(const HermitianOperator& a, const std::function<double(double)>& g) {
  return matrix_function(spectral_decompose(a), g);
}

double trace_inner_product(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw InvalidInput("trace inner product dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                       std::to_string(b.dim()));
  }
  // tr(A^H B) = sum_ij conj(A_ij) B_ij
  return a.matrix().conjugate().cwiseProduct(b.matrix()).sum().real();
}

double schatten_norm(const HermitianOperator& a, SchattenOrder p) {
  if (a.dim() == 0) return 0.0;
  switch (p) {
    case SchattenOrder::Two:
      return a.matrix().norm();
    case SchattenOrder::One:
      return spectral_decompose(a).eigenvalues.cwiseAbs().sum();
    case SchattenOrder::Infinity:
      return spectral_decompose(a).eigenvalues.cwiseAbs().maxCoeff();
  }
  return 0.0;
}

EigenExtremes eigen_extremes(const HermitianOperator& a) {
  if (a.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

}  // namespace expgrad
