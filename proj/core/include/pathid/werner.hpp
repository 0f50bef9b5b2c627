#pragma once

#include <array>
#include <string_view>

#include "pathid/density_matrix.hpp"

namespace pathid {

/// Parameters of the two-qubit generalized Werner state
///
///   rho = eta * (coherent, unbalanced Bell-like part) + (1 - eta) * I/4
///
/// in the idler⊗signal basis (HH, HV, VH, VV). i_v is always 1 - i_h.
class GeneralizedWernerParams {
 public:
  /// Maximally mixed state.
  GeneralizedWernerParams() = default;
  /// Throws ValidationError naming the field when eta, i_coh or i_h lie
  /// outside [0, 1].
  GeneralizedWernerParams(double eta, double i_coh, double i_h, double phi = 0.0);

  double eta() const noexcept { return eta_; }
  double i_coh() const noexcept { return i_coh_; }
  double i_h() const noexcept { return i_h_; }
  double i_v() const noexcept { return 1.0 - i_h_; }
  double phi() const noexcept { return phi_; }

  /// eta * I * sqrt(I_H I_V), the modulus of the corner coherence.
  double coherence() const noexcept;

  GeneralizedWernerParams with_phi(double phi) const { return {eta_, i_coh_, i_h_, phi}; }

 private:
  double eta_ = 0.0;
  double i_coh_ = 0.0;
  double i_h_ = 0.5;
  double phi_ = 0.0;
};

struct PptSpectrum {
  double alpha1 = 0.0;  // the only eigenvalue that can go negative
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  double alpha4 = 0.0;

  double sum() const noexcept { return alpha1 + alpha2 + alpha3 + alpha4; }
  std::array<double, 4> values() const noexcept { return {alpha1, alpha2, alpha3, alpha4}; }
};

enum class Verdict { kEntangled, kSeparable, kBoundary };

std::string_view to_string(Verdict v) noexcept;

/// Margin around alpha1 = 0 inside which exact-mode results are reported as
/// the boundary case.
inline constexpr double kVerdictBand = 1e-9;

/// entangled when alpha1 < -band, separable when alpha1 > band.
Verdict classify_alpha1(double alpha1, double band = kVerdictBand) noexcept;

DensityMatrix build_state(const GeneralizedWernerParams& params);

/// Transpose on the idler (first) factor of a 4x4 idler⊗signal matrix.
/// The result is Hermitian with unit trace but need not be PSD.
ComplexMatrix partial_transpose(const ComplexMatrix& rho);
ComplexMatrix partial_transpose(const DensityMatrix& rho);

PptSpectrum ppt_spectrum_closed(const GeneralizedWernerParams& params);

/// Eigenvalues of partial_transpose(rho), ascending.
std::array<double, 4> ppt_spectrum_numeric(const DensityMatrix& rho);

double concurrence_closed(const GeneralizedWernerParams& params);

/// (lambda_1^2, lambda_2^2, lambda_3^2, lambda_4^2): the spectrum of
/// rho * spin_flip(rho) in closed form, lambda_1 = lambda_2 the mixing floor.
std::array<double, 4> lambda_spectrum_closed(const GeneralizedWernerParams& params);

/// (sigma_y ⊗ sigma_y) rho* (sigma_y ⊗ sigma_y)
ComplexMatrix spin_flip(const DensityMatrix& rho);

/// Eigenvalues of rho * spin_flip(rho), ascending, tiny negatives clamped to 0.
std::array<double, 4> rho_spin_flip_eigenvalues(const DensityMatrix& rho);

/// Wootters concurrence of an arbitrary two-qubit density matrix.
double concurrence_wootters_numeric(const DensityMatrix& rho);

}  // namespace pathid
