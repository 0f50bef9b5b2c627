#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "pathid/density_matrix.hpp"
#include "pathid/werner.hpp"

namespace pathid {

/// Cross-source phases phi^{mu'_2 nu'_2}_{mu_1 nu_1}. Only the orientation
/// with the source-1 ket is stored; the reverse orientation is the negative.
struct PhaseTable {
  double phi_hh = 0.0;     // H1H1 -> H2H2
  double phi_vh = 0.0;     // V1H1 -> V2H2
  double phi_hv = 0.0;     // H1V1 -> H2V2
  double phi_vv = 0.0;     // V1V1 -> V2V2
  double phi_hh_vv = 0.0;  // H1H1 -> V2V2
  double phi_vv_hh = 0.0;  // V1V1 -> H2H2

  double chi() const noexcept { return phi_vh - phi_hh; }
  double chi_prime() const noexcept { return phi_vv_hh - phi_hh_vv; }
  double chi_double_prime() const noexcept { return phi_vv - phi_hv; }

  /// Table for which the joint two-source state is positive semidefinite
  /// for a source with corner phase `state_phi`: the HH and VV cross phases
  /// coincide and the HH<->VV entries follow from them.
  static PhaseTable physical(double state_phi, double phi_hh, double phi_vh, double phi_hv);

  /// True when the joint state built from this table and `state` is a
  /// valid density matrix. Always true when the state has no coherence.
  bool consistent_with(const GeneralizedWernerParams& state, double tolerance = 1e-12) const;
};

enum class Polarization { kH, kV, kD, kA, kR, kL };

std::string_view to_string(Polarization p) noexcept;
/// Accepts H, V, D, A, R, L (case-insensitive). Throws ValidationError.
Polarization parse_polarization(std::string_view label);

struct PolarizationProjector {
  Polarization label = Polarization::kH;
  Complex c_h{1.0, 0.0};
  Complex c_v{0.0, 0.0};

  /// R = (H - iV)/sqrt2, L = (H + iV)/sqrt2.
  static PolarizationProjector of(Polarization p);
};

struct InterferometerConfig {
  GeneralizedWernerParams state;
  double b1_mag = 0.70710678118654752440;
  double b2_mag = 0.70710678118654752440;
  double arg_b1 = 0.0;
  double arg_b2 = 0.0;
  double phi_i = 0.0;
  double phi_s = 0.0;
  PhaseTable phases;
  double theta = 0.0;
  double delta = 0.0;
  double t_h = 1.0;
  double t_v = 1.0;

  double phi_in() const noexcept { return arg_b1 - arg_b2 + phi_i - phi_s; }
  double b1b2() const noexcept { return b1_mag * b2_mag; }

  /// Copy whose phi_s is chosen so that phi_in() == phi_in.
  InterferometerConfig with_phi_in(double phi_in) const;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// U(theta, delta) acting on the idler polarization in the {H, V} basis.
Eigen::Matrix2cd idler_unitary(double theta, double delta);

/// Joint state of both sources before the idlers are aligned, 8x8 in the
/// basis {HH1, HV1, VH1, VV1, HH2, HV2, VH2, VV2} (idler then signal).
DensityMatrix joint_unaligned_state(const InterferometerConfig& config);

/// Aligns idler 2 onto idler 1 through the unitary and the attenuator.
/// Output is 16x16: idler {H_I1, V_I1, H_0, V_0} ⊗ signal {H_S1, V_S1, H_S2, V_S2}.
DensityMatrix apply_alignment(const InterferometerConfig& config, const DensityMatrix& rho8);

/// Traces out the idler and loss modes of a 16x16 aligned state.
DensityMatrix reduce_signal(const DensityMatrix& rho16);

/// reduce_signal(apply_alignment(joint_unaligned_state(config))).
DensityMatrix signal_state(const InterferometerConfig& config);

/// Probability of a signal count behind the beamsplitter and polarizer.
double detection_probability(const InterferometerConfig& config, const PolarizationProjector& projector);
double detection_probability(const DensityMatrix& rho_s, double phi_s, const PolarizationProjector& projector);

/// Count probability with the signal beam of the other source blocked.
/// `which_source` is 1 or 2.
double blocked_arm_probability(const InterferometerConfig& config, const PolarizationProjector& projector,
                               int which_source);

}  // namespace pathid
