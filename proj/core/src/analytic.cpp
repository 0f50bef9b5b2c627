#include "pathid/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <numbers>
#include <vector>

#include "pathid/errors.hpp"

namespace pathid {
namespace {

using std::numbers::pi;

constexpr double kSettingTolerance = 1e-9;

struct Term {
  double coeff;
  double phase;
};

FringeModel fold(double offset, const std::vector<Term>& terms) {
  FringeModel out{offset, 0.0, 0.0};
  for (const Term& t : terms) {
    const Sinusoid s = combine_sinusoids(out.amplitude, t.coeff, t.phase - out.phase0);
    out.amplitude = s.amplitude;
    out.phase0 += s.beta;
  }
  out.phase0 = std::remainder(out.phase0, 2.0 * pi);
  return out;
}

}  // namespace

double FringeModel::operator()(double phi_in) const noexcept {
  return offset + amplitude * std::sin(phi_in + phase0);
}

double FringeModel::visibility() const noexcept {
  const double sum = p_max() + p_min();
  return sum < 1e-15 ? 0.0 : (p_max() - p_min()) / sum;
}

Sinusoid combine_sinusoids(double u, double v, double alpha) noexcept {
  const double re = u + v * std::cos(alpha);
  const double im = v * std::sin(alpha);
  return {std::hypot(re, im), (re == 0.0 && im == 0.0) ? 0.0 : std::atan2(im, re)};
}

FringeModel fringe_model(const InterferometerConfig& config, Polarization pol) {
  config.validate();
  const auto& st = config.state;
  const auto& ph = config.phases;
  const double eta = st.eta();
  const double n = (1.0 - eta) / 4.0;
  const double m_h = eta * st.i_h() + n;
  const double m_v = eta * st.i_v() + n;
  const double x = st.coherence();
  const double b = config.b1b2();
  const double c = std::cos(2.0 * config.theta);
  const double s = std::sin(2.0 * config.theta);
  const double d = config.delta;
  const double th = config.t_h;
  const double tv = config.t_v;

  switch (pol) {
    case Polarization::kH:
      return fold((1.0 - eta) / 4.0 + eta * st.i_h() / 2.0,
                  {{b * c * th * m_h, ph.phi_hh - d}, {-b * c * tv * n, ph.phi_vh + d}});
    case Polarization::kV:
      return fold((1.0 - eta) / 4.0 + eta * st.i_v() / 2.0,
                  {{b * c * th * n, ph.phi_hv - d}, {-b * c * tv * m_v, ph.phi_vv + d}});
    default: break;
  }

  const double w = b / 2.0 * c;
  std::vector<Term> terms{
      {w * m_h * th, ph.phi_hh - d},
      {-w * n * tv, ph.phi_vh + d},
      {w * n * th, ph.phi_hv - d},
      {-w * m_v * tv, ph.phi_vv + d},
  };
  const double k = b / 2.0 * x * s;
  const double x0 = ph.phi_hh_vv + d;
  const double x1 = ph.phi_vv_hh - d;
  switch (pol) {
    case Polarization::kD:
      terms.push_back({k * tv, x0});
      terms.push_back({k * th, x1});
      break;
    case Polarization::kA:
      terms.push_back({-k * tv, x0});
      terms.push_back({-k * th, x1});
      break;
    case Polarization::kR:
      terms.push_back({-k * tv, x0 + pi / 2.0});
      terms.push_back({k * th, x1 + pi / 2.0});
      break;
    case Polarization::kL:
      terms.push_back({k * tv, x0 + pi / 2.0});
      terms.push_back({-k * th, x1 + pi / 2.0});
      break;
    default: break;
  }
  return fold(0.25, terms);
}

double visibility_closed(const InterferometerConfig& config, Polarization pol) {
  config.validate();
  const auto& st = config.state;
  const auto& ph = config.phases;
  const double eta = st.eta();
  const double b = config.b1b2();
  const double th = config.t_h;
  const double tv = config.t_v;
  const double n = (1.0 - eta) / 4.0;
  const double s2 = std::sin(2.0 * config.theta);
  const double c2 = std::cos(2.0 * config.theta);

  if (pol == Polarization::kH || pol == Polarization::kV) {
    const bool is_h = pol == Polarization::kH;
    const double chi = is_h ? ph.chi() : ph.chi_double_prime();
    if (std::abs(s2) > kSettingTolerance || c2 < 0.0) {
      throw SettingsError(std::string("visibility_closed(") + (is_h ? "H" : "V") + ") requires theta = 0");
    }
    if (std::abs(std::cos(chi + 2.0 * config.delta) - 1.0) > kSettingTolerance) {
      throw SettingsError(std::string("visibility_closed(") + (is_h ? "H" : "V") +
                          ") requires delta = delta_" + (is_h ? "H" : "V"));
    }
    const double i_mu = is_h ? st.i_h() : st.i_v();
    const double t_mu = is_h ? th : tv;
    const double t_nu = is_h ? tv : th;
    // Lossless: 4 b eta I / (2 eta I + 1 - eta).
    const double denom = 2.0 * eta * i_mu + 1.0 - eta;
    if (denom < 1e-15) return 0.0;
    return 4.0 * b * std::abs((t_mu - t_nu) * n + t_mu * eta * i_mu) / denom;
  }

  if (std::abs(c2) > kSettingTolerance) {
    throw SettingsError("visibility_closed(" + std::string(to_string(pol)) + ") requires theta = pi/4");
  }
  const double cos_term = std::cos(ph.chi_prime() - 2.0 * config.delta);
  const double sign = (pol == Polarization::kD || pol == Polarization::kA) ? 1.0 : -1.0;
  const double root = std::sqrt(std::max(0.0, th * th + tv * tv + sign * 2.0 * th * tv * cos_term));
  return 2.0 * b * st.coherence() * root;
}

double wrap_pi(double angle) noexcept {
  double r = std::fmod(angle, pi);
  if (r < 0.0) r += pi;
  if (r >= pi) r -= pi;
  return r;
}

double delta_star(const PhaseTable& phases, DeltaSetting which) noexcept {
  switch (which) {
    case DeltaSetting::kH: return wrap_pi(-phases.chi() / 2.0);
    case DeltaSetting::kV: return wrap_pi(-phases.chi_double_prime() / 2.0);
    case DeltaSetting::kHPrime: return wrap_pi((pi - phases.chi()) / 2.0);
    case DeltaSetting::kVPrime: return wrap_pi((pi - phases.chi_double_prime()) / 2.0);
  }
  return 0.0;
}

double delta_for_chi_prime(const PhaseTable& phases, double target) noexcept {
  return wrap_pi((phases.chi_prime() - target) / 2.0);
}

}  // namespace pathid
