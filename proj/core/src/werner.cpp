#include "pathid/werner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pathid/errors.hpp"

namespace pathid {
namespace {

const std::vector<std::string>& two_qubit_labels() {
  static const std::vector<std::string> labels{"H_I H_S", "H_I V_S", "V_I H_S", "V_I V_S"};
  return labels;
}

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ValidationError(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

void require_two_qubit(const ComplexMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4) {
    throw ValidationError("expected a 4x4 two-qubit matrix");
  }
}

// Eigenvalues of rho*rho~ below this magnitude are rounding noise.
constexpr double kSpinFlipClamp = 1e-12;

}  // namespace

GeneralizedWernerParams::GeneralizedWernerParams(double eta, double i_coh, double i_h, double phi)
    : eta_(eta), i_coh_(i_coh), i_h_(i_h), phi_(phi) {
  require_unit_interval(eta, "eta");
  require_unit_interval(i_coh, "icoh");
  require_unit_interval(i_h, "ih");
  if (!std::isfinite(phi)) throw ValidationError("phi must be finite");
}

double GeneralizedWernerParams::coherence() const noexcept {
  return eta_ * i_coh_ * std::sqrt(i_h_ * i_v());
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::kEntangled: return "entangled";
    case Verdict::kSeparable: return "separable";
    case Verdict::kBoundary: return "boundary";
  }
  return "boundary";
}

Verdict classify_alpha1(double alpha1, double band) noexcept {
  if (alpha1 < -band) return Verdict::kEntangled;
  if (alpha1 > band) return Verdict::kSeparable;
  return Verdict::kBoundary;
}

DensityMatrix build_state(const GeneralizedWernerParams& p) {
  const double mix = (1.0 - p.eta()) / 4.0;
  const Complex corner = std::polar(p.coherence(), -p.phi());
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho(0, 0) = p.eta() * p.i_h() + mix;
  rho(1, 1) = mix;
  rho(2, 2) = mix;
  rho(3, 3) = p.eta() * p.i_v() + mix;
  rho(0, 3) = corner;
  rho(3, 0) = std::conj(corner);
  return DensityMatrix(std::move(rho), two_qubit_labels());
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho) {
  require_two_qubit(rho);
  // Index = 2*idler + signal; swap the idler indices of row and column.
  ComplexMatrix out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int s = 0; s < 2; ++s)
      for (int j = 0; j < 2; ++j)
        for (int t = 0; t < 2; ++t) out(2 * i + s, 2 * j + t) = rho(2 * j + s, 2 * i + t);
  return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& rho) { return partial_transpose(rho.entries()); }

PptSpectrum ppt_spectrum_closed(const GeneralizedWernerParams& p) {
  const double eta = p.eta();
  const double four_c = 4.0 * p.coherence();
  return PptSpectrum{
      .alpha1 = (1.0 - eta - four_c) / 4.0,
      .alpha2 = (1.0 - eta + four_c) / 4.0,
      .alpha3 = (1.0 + 3.0 * eta - 4.0 * eta * p.i_h()) / 4.0,
      .alpha4 = (1.0 - eta + 4.0 * eta * p.i_h()) / 4.0,
  };
}

std::array<double, 4> ppt_spectrum_numeric(const DensityMatrix& rho) {
  const auto ev = hermitian_eigenvalues(partial_transpose(rho));
  return {ev[0], ev[1], ev[2], ev[3]};
}

double concurrence_closed(const GeneralizedWernerParams& p) {
  return std::max((p.eta() - 1.0 + 4.0 * p.coherence()) / 2.0, 0.0);
}

std::array<double, 4> lambda_spectrum_closed(const GeneralizedWernerParams& p) {
  const double eta = p.eta();
  const double hv = p.i_h() * p.i_v();
  const double floor = (1.0 - eta) * (1.0 - eta) / 16.0;
  const double c1 = eta * (1.0 - eta) / 4.0 + eta * eta * hv * (1.0 + p.i_coh() * p.i_coh());
  const double radicand = hv * (1.0 + 2.0 * eta - eta * eta * (3.0 - 16.0 * hv));
  const double c2 = eta * p.i_coh() / 2.0 * std::sqrt(std::max(radicand, 0.0));
  return {floor, floor, floor + c1 - c2, floor + c1 + c2};
}

ComplexMatrix spin_flip(const DensityMatrix& rho) {
  require_two_qubit(rho.entries());
  Eigen::Matrix2cd sy;
  sy << Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0};
  Eigen::Matrix4cd yy;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) yy(2 * a + c, 2 * b + d) = sy(a, b) * sy(c, d);
  return yy * rho.entries().conjugate() * yy;
}

std::array<double, 4> rho_spin_flip_eigenvalues(const DensityMatrix& rho) {
  const ComplexMatrix product = rho.entries() * spin_flip(rho);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(product, false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigensolver did not converge on rho * spin_flip(rho)");
  }
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) {
    double v = solver.eigenvalues()(k).real();
    if (v < 0.0 && v > -kSpinFlipClamp) v = 0.0;
    out[static_cast<std::size_t>(k)] = v;
  }
  std::sort(out.begin(), out.end());
  return out;
}

double concurrence_wootters_numeric(const DensityMatrix& rho) {
  require_two_qubit(rho.entries());
  // rho = X X^dagger with X = V sqrt(w). The square roots of the eigenvalues
  // of rho * rho~ are the singular values of X^T (sy⊗sy) X, which avoids
  // taking square roots of eigenvalues that are zero up to rounding.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (rho.entries() + rho.entries().adjoint()));
  if (eig.info() != Eigen::Success) throw NumericError("eigensolver did not converge on rho");
  Eigen::VectorXd w = eig.eigenvalues();
  if (w.minCoeff() < -kPsdTolerance) {
    throw ValidationError("concurrence requires a positive semidefinite density matrix");
  }
  w = w.cwiseMax(0.0);
  const ComplexMatrix x = eig.eigenvectors() * w.cwiseSqrt().asDiagonal();

  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const ComplexMatrix tau = x.transpose() * yy * x;
  Eigen::JacobiSVD<ComplexMatrix> svd(tau);
  const auto& s = svd.singularValues();  // descending
  return std::max(s(0) - s(1) - s(2) - s(3), 0.0);
}

}  // namespace pathid
