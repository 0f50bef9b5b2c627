#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pathid {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

enum class DensityChecks {
  kFull,                // Hermitian, unit trace, positive semidefinite
  kHermitianUnitTrace,  // skip the eigenvalue test
};

/// Square Hermitian unit-trace complex matrix with labelled basis states.
///
/// Construction validates the invariants selected by `checks` and throws
/// ValidationError if one fails. Instances are immutable values.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix entries, std::vector<std::string> basis_labels,
                DensityChecks checks = DensityChecks::kFull);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const ComplexMatrix& entries() const noexcept { return entries_; }
  const std::vector<std::string>& basis_labels() const noexcept { return labels_; }
  Complex operator()(std::size_t row, std::size_t col) const {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  double hermiticity_error() const;
  double trace_error() const;
  double min_eigenvalue() const;
  bool is_positive_semidefinite(double tolerance = kPsdTolerance) const {
    return min_eigenvalue() >= -tolerance;
  }

 private:
  ComplexMatrix entries_;
  std::vector<std::string> labels_;
};

double max_abs(const ComplexMatrix& m);

// max |M - M^dagger|
double hermiticity_error(const ComplexMatrix& m);

/// Eigenvalues of a Hermitian matrix, ascending. Throws NumericError when the
/// solver does not converge.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// Traces out the first tensor factor of an (a*b)x(a*b) matrix ordered as a⊗b.
ComplexMatrix trace_out_first(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b);

/// Labels "x y" for every pair in the product basis first⊗second.
std::vector<std::string> product_labels(const std::vector<std::string>& first,
                                        const std::vector<std::string>& second);

}  // namespace pathid
