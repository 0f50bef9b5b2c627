#include "pathid/density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pathid/errors.hpp"

namespace pathid {

IncompletePlanError::IncompletePlanError(std::vector<std::string> missing)
    : std::runtime_error([&] {
        std::string msg = "incomplete scan plan, missing:";
        for (const auto& m : missing) msg += " " + m;
        return msg;
      }()),
      missing_(std::move(missing)) {}

DensityMatrix::DensityMatrix(ComplexMatrix entries, std::vector<std::string> basis_labels,
                             DensityChecks checks)
    : entries_(std::move(entries)), labels_(std::move(basis_labels)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw ValidationError("density matrix must be square and non-empty");
  }
  if (labels_.size() != dim()) {
    throw ValidationError("density matrix needs one basis label per row");
  }
  if (const double h = hermiticity_error(); h > kHermitianTolerance) {
    std::ostringstream os;
    os << "density matrix is not Hermitian (max |M - M^dagger| = " << h << ")";
    throw ValidationError(os.str());
  }
  if (const double t = trace_error(); t > kTraceTolerance) {
    std::ostringstream os;
    os << "density matrix trace differs from 1 by " << t;
    throw ValidationError(os.str());
  }
  if (checks == DensityChecks::kFull) {
    if (const double lo = min_eigenvalue(); lo < -kPsdTolerance) {
      std::ostringstream os;
      os << "density matrix has negative eigenvalue " << lo;
      throw ValidationError(os.str());
    }
  }
}

double DensityMatrix::hermiticity_error() const { return pathid::hermiticity_error(entries_); }

double DensityMatrix::trace_error() const { return std::abs(entries_.trace() - Complex{1.0, 0.0}); }

double DensityMatrix::min_eigenvalue() const { return hermitian_eigenvalues(entries_).front(); }

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_error(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  // Symmetrize so the solver sees an exactly Hermitian input.
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("Hermitian eigensolver did not converge");
  }
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

ComplexMatrix trace_out_first(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b) {
  const auto a = static_cast<Eigen::Index>(dim_a);
  const auto b = static_cast<Eigen::Index>(dim_b);
  if (m.rows() != a * b || m.cols() != a * b) {
    throw ValidationError("partial trace: matrix size does not match the factor dimensions");
  }
  ComplexMatrix out = ComplexMatrix::Zero(b, b);
  for (Eigen::Index k = 0; k < a; ++k) {
    out += m.block(k * b, k * b, b, b);
  }
  return out;
}

std::vector<std::string> product_labels(const std::vector<std::string>& first,
                                        const std::vector<std::string>& second) {
  std::vector<std::string> out;
  out.reserve(first.size() * second.size());
  for (const auto& x : first) {
    for (const auto& y : second) out.push_back(x + " " + y);
  }
  return out;
}

}  // namespace pathid
