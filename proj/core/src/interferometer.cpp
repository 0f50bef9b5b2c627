#include "pathid/interferometer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "pathid/errors.hpp"

namespace pathid {
namespace {

using std::numbers::sqrt2;

const std::vector<std::string>& signal_labels() {
  static const std::vector<std::string> labels{"H_S1", "V_S1", "H_S2", "V_S2"};
  return labels;
}

const std::vector<std::string>& joint_labels() {
  static const std::vector<std::string> labels = [] {
    auto one = product_labels({"H_I1", "V_I1"}, {"H_S1", "V_S1"});
    auto two = product_labels({"H_I2", "V_I2"}, {"H_S2", "V_S2"});
    one.insert(one.end(), two.begin(), two.end());
    return one;
  }();
  return labels;
}

const std::vector<std::string>& aligned_labels() {
  static const std::vector<std::string> labels =
      product_labels({"H_I1", "V_I1", "H_0", "V_0"}, signal_labels());
  return labels;
}

bool angle_close(double a, double b, double tol) {
  return std::abs(std::remainder(a - b, 2.0 * std::numbers::pi)) <= tol;
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ValidationError(std::string(name) + " must be finite");
}

DensityChecks checks_for(const InterferometerConfig& config) {
  return config.phases.consistent_with(config.state) ? DensityChecks::kFull
                                                     : DensityChecks::kHermitianUnitTrace;
}

// 16x8 map taking the unaligned basis onto the aligned one.
ComplexMatrix alignment_map(const InterferometerConfig& config) {
  const Eigen::Matrix2cd u = idler_unitary(config.theta, config.delta);
  const std::array<double, 2> t{config.t_h, config.t_v};
  const Complex prop = std::polar(1.0, -config.phi_i);
  ComplexMatrix a = ComplexMatrix::Zero(16, 8);
  for (int idler = 0; idler < 2; ++idler) {
    const double r = std::sqrt(std::max(0.0, 1.0 - t[idler] * t[idler]));
    for (int s = 0; s < 2; ++s) {
      a(4 * idler + s, 2 * idler + s) = 1.0;
      const int col = 4 + 2 * idler + s;
      const int sig = 2 + s;
      for (int lambda = 0; lambda < 2; ++lambda) {
        a(4 * lambda + sig, col) = prop * t[idler] * std::conj(u(idler, lambda));
      }
      a(4 * (2 + idler) + sig, col) = prop * r;
    }
  }
  return a;
}

}  // namespace

PhaseTable PhaseTable::physical(double state_phi, double phi_hh, double phi_vh, double phi_hv) {
  return PhaseTable{
      .phi_hh = phi_hh,
      .phi_vh = phi_vh,
      .phi_hv = phi_hv,
      .phi_vv = phi_hh,
      .phi_hh_vv = phi_hh - state_phi,
      .phi_vv_hh = phi_hh + state_phi,
  };
}

bool PhaseTable::consistent_with(const GeneralizedWernerParams& state, double tolerance) const {
  if (state.coherence() <= 0.0) return true;
  return angle_close(phi_vv, phi_hh, tolerance) && angle_close(phi_hh_vv, phi_vv - state.phi(), tolerance) &&
         angle_close(phi_vv_hh, phi_hh + state.phi(), tolerance);
}

std::string_view to_string(Polarization p) noexcept {
  switch (p) {
    case Polarization::kH: return "H";
    case Polarization::kV: return "V";
    case Polarization::kD: return "D";
    case Polarization::kA: return "A";
    case Polarization::kR: return "R";
    case Polarization::kL: return "L";
  }
  return "H";
}

Polarization parse_polarization(std::string_view label) {
  if (label.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(label[0]))) {
      case 'H': return Polarization::kH;
      case 'V': return Polarization::kV;
      case 'D': return Polarization::kD;
      case 'A': return Polarization::kA;
      case 'R': return Polarization::kR;
      case 'L': return Polarization::kL;
      default: break;
    }
  }
  throw ValidationError("unknown polarization '" + std::string(label) + "' (expected H, V, D, A, R or L)");
}

PolarizationProjector PolarizationProjector::of(Polarization p) {
  const double h = 1.0 / sqrt2;
  switch (p) {
    case Polarization::kH: return {p, {1.0, 0.0}, {0.0, 0.0}};
    case Polarization::kV: return {p, {0.0, 0.0}, {1.0, 0.0}};
    case Polarization::kD: return {p, {h, 0.0}, {h, 0.0}};
    case Polarization::kA: return {p, {h, 0.0}, {-h, 0.0}};
    case Polarization::kR: return {p, {h, 0.0}, {0.0, -h}};
    case Polarization::kL: return {p, {h, 0.0}, {0.0, h}};
  }
  return {};
}

InterferometerConfig InterferometerConfig::with_phi_in(double phi_in) const {
  InterferometerConfig out = *this;
  out.phi_s = arg_b1 - arg_b2 + phi_i - phi_in;
  return out;
}

void InterferometerConfig::validate() const {
  if (!(b1_mag >= 0.0 && b1_mag <= 1.0)) throw ValidationError("b1_mag must lie in [0, 1]");
  if (!(b2_mag >= 0.0 && b2_mag <= 1.0)) throw ValidationError("b2_mag must lie in [0, 1]");
  if (std::abs(b1_mag * b1_mag + b2_mag * b2_mag - 1.0) > 1e-12) {
    throw ValidationError("b1_mag^2 + b2_mag^2 must equal 1");
  }
  if (!(t_h > 0.0 && t_h <= 1.0)) throw ValidationError("t_h must lie in (0, 1]");
  if (!(t_v > 0.0 && t_v <= 1.0)) throw ValidationError("t_v must lie in (0, 1]");
  require_finite(arg_b1, "arg_b1");
  require_finite(arg_b2, "arg_b2");
  require_finite(phi_i, "phi_i");
  require_finite(phi_s, "phi_s");
  require_finite(theta, "theta");
  require_finite(delta, "delta");
  require_finite(phases.phi_hh, "phi_hh");
  require_finite(phases.phi_vh, "phi_vh");
  require_finite(phases.phi_hv, "phi_hv");
  require_finite(phases.phi_vv, "phi_vv");
  require_finite(phases.phi_hh_vv, "phi_hh_vv");
  require_finite(phases.phi_vv_hh, "phi_vv_hh");
}

Eigen::Matrix2cd idler_unitary(double theta, double delta) {
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  const Complex em = std::polar(1.0, -delta);
  const Complex ep = std::polar(1.0, delta);
  Eigen::Matrix2cd u;
  u << em * c, em * s, ep * s, -ep * c;
  return u;
}

DensityMatrix joint_unaligned_state(const InterferometerConfig& config) {
  config.validate();
  const ComplexMatrix rho = build_state(config.state).entries();
  const Complex b1 = std::polar(config.b1_mag, config.arg_b1);
  const Complex b2 = std::polar(config.b2_mag, config.arg_b2);
  const PhaseTable& ph = config.phases;
  const double x = config.state.coherence();

  ComplexMatrix cross = ComplexMatrix::Zero(4, 4);
  const std::array<double, 4> diag_phase{ph.phi_hh, ph.phi_hv, ph.phi_vh, ph.phi_vv};
  for (int k = 0; k < 4; ++k) cross(k, k) = rho(k, k).real() * std::polar(1.0, diag_phase[k]);
  cross(0, 3) = x * std::polar(1.0, ph.phi_hh_vv);
  cross(3, 0) = x * std::polar(1.0, ph.phi_vv_hh);
  cross *= b1 * std::conj(b2);

  ComplexMatrix out(8, 8);
  out.topLeftCorner(4, 4) = std::norm(b1) * rho;
  out.bottomRightCorner(4, 4) = std::norm(b2) * rho;
  out.topRightCorner(4, 4) = cross;
  out.bottomLeftCorner(4, 4) = cross.adjoint();
  return DensityMatrix(std::move(out), joint_labels(), checks_for(config));
}

DensityMatrix apply_alignment(const InterferometerConfig& config, const DensityMatrix& rho8) {
  if (rho8.dim() != 8) throw ValidationError("apply_alignment expects an 8x8 joint state");
  config.validate();
  const ComplexMatrix a = alignment_map(config);
  ComplexMatrix out = a * rho8.entries() * a.adjoint();
  return DensityMatrix(std::move(out), aligned_labels(), checks_for(config));
}

DensityMatrix reduce_signal(const DensityMatrix& rho16) {
  if (rho16.dim() != 16) throw ValidationError("reduce_signal expects a 16x16 aligned state");
  return DensityMatrix(trace_out_first(rho16.entries(), 4, 4), signal_labels(), DensityChecks::kHermitianUnitTrace);
}

DensityMatrix signal_state(const InterferometerConfig& config) {
  return reduce_signal(apply_alignment(config, joint_unaligned_state(config)));
}

double detection_probability(const DensityMatrix& rho_s, double phi_s, const PolarizationProjector& projector) {
  if (rho_s.dim() != 4) throw ValidationError("detection_probability expects a 4x4 signal state");
  const Complex arm2 = Complex{0.0, -1.0} * std::polar(1.0, -phi_s);
  ComplexVector f(4);
  f << projector.c_h, projector.c_v, arm2 * projector.c_h, arm2 * projector.c_v;
  f /= sqrt2;
  return (f.adjoint() * rho_s.entries() * f)(0, 0).real();
}

double detection_probability(const InterferometerConfig& config, const PolarizationProjector& projector) {
  return detection_probability(signal_state(config), config.phi_s, projector);
}

double blocked_arm_probability(const InterferometerConfig& config, const PolarizationProjector& projector,
                               int which_source) {
  if (which_source != 1 && which_source != 2) throw ValidationError("which_source must be 1 or 2");
  const DensityMatrix rho_s = signal_state(config);
  const int offset = which_source == 1 ? 0 : 2;
  ComplexVector m(2);
  m << projector.c_h, projector.c_v;
  const ComplexMatrix block = rho_s.entries().block(offset, offset, 2, 2);
  return 0.5 * (m.adjoint() * block * m)(0, 0).real();
}

}  // namespace pathid
