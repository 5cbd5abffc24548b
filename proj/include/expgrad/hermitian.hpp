#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace expgrad {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Dense d×d complex Hermitian matrix. Construction symmetrizes the input,
/// A <- (A + A^H) / 2, so round-off from upstream arithmetic is tolerated.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(ComplexMatrix entries);

  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);
  static HermitianOperator diagonal(const RealVector& values);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const ComplexMatrix& matrix() const { return entries_; }
  Complex operator()(int i, int j) const { return entries_(i, j); }
  bool is_finite() const;

  HermitianOperator& operator+=(const HermitianOperator& other);
  HermitianOperator& operator-=(const HermitianOperator& other);
  HermitianOperator& operator*=(double scale);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }

 private:
  ComplexMatrix entries_;
};

/// One group of (numerically) equal eigenvalues; the eigenprojector is
/// spanned by eigenvector columns [first, first + count).
struct EigenGroup {
  double value = 0.0;
  int first = 0;
  int count = 0;
};

struct SpectralDecomposition {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors;  // columns paired with eigenvalues

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  HermitianOperator reconstruct() const;
  HermitianOperator projector(const EigenGroup& group) const;
  /// Eigenvalues within 1e-10 * max(1, |A|_inf) of their neighbour share a group.
  std::vector<EigenGroup> groups() const;
};

SpectralDecomposition spectral_decompose(const HermitianOperator& a);

/// g(A) := sum_j g(lambda_j) P_j. Throws DomainError if g is not finite on
/// the spectrum.
HermitianOperator matrix_function(const HermitianOperator& a, const std::function<double(double)>& g);
HermitianOperator matrix_function(const SpectralDecomposition& spectrum,
                                  const std::function<double(double)>& g);

/// <A, B> := tr(A^H B), real part only.
double trace_inner_product(const HermitianOperator& a, const HermitianOperator& b);

enum class SchattenOrder { One, Two, Infinity };

double schatten_norm(const HermitianOperator& a, SchattenOrder p);

struct EigenExtremes {
  double min = 0.0;
  double max = 0.0;
  double width() const { return max - min; }
};

EigenExtremes eigen_extremes(const HermitianOperator& a);

}  // namespace expgrad
