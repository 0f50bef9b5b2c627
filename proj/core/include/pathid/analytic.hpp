#pragma once

#include "pathid/interferometer.hpp"

namespace pathid {

/// P(phi_in) = offset + amplitude * sin(phi_in + phase0).
struct FringeModel {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase0 = 0.0;

  double operator()(double phi_in) const noexcept;
  double p_max() const noexcept { return offset + amplitude; }
  double p_min() const noexcept { return offset - amplitude; }
  /// 0 when p_max + p_min < 1e-15.
  double visibility() const noexcept;
};

struct Sinusoid {
  double amplitude = 0.0;
  double beta = 0.0;
};

/// u sin x + v sin(x + alpha) = amplitude * sin(x + beta), amplitude >= 0.
Sinusoid combine_sinusoids(double u, double v, double alpha) noexcept;

/// Closed-form fringe for any theta, delta and attenuator setting.
FringeModel fringe_model(const InterferometerConfig& config, Polarization pol);

/// Visibility from the closed forms valid at the reference settings: theta = 0
/// with cos(chi + 2 delta) = 1 (H) or cos(chi'' + 2 delta) = 1 (V), and
/// theta = pi/4 for D, A, R, L. Throws SettingsError elsewhere.
double visibility_closed(const InterferometerConfig& config, Polarization pol);

enum class DeltaSetting { kH, kV, kHPrime, kVPrime };

/// Wave-plate delta making the H or V fringe cosine +1 (unprimed) or -1
/// (primed). Result in [0, pi).
double delta_star(const PhaseTable& phases, DeltaSetting which) noexcept;

/// delta in [0, pi) with chi' - 2 delta = target (mod 2 pi).
double delta_for_chi_prime(const PhaseTable& phases, double target) noexcept;

/// Reduces an angle to [0, pi).
double wrap_pi(double angle) noexcept;

}  // namespace pathid
