#pragma once

// Test-side reference constructions. Nothing here calls into the engine's
// state builders; only the plain config structs are shared.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <utility>

#include <Eigen/Dense>

#include "pathid/interferometer.hpp"

namespace oracle {

using pathid::Complex;
using pathid::InterferometerConfig;
using pathid::Polarization;

inline constexpr double kPi = std::numbers::pi;
inline const Complex kI{0.0, 1.0};

inline Complex cis(double a) { return std::polar(1.0, a); }

// Polarization kets written out by hand.
inline std::pair<Complex, Complex> ket(Polarization p) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (p) {
    case Polarization::kH: return {1.0, 0.0};
    case Polarization::kV: return {0.0, 1.0};
    case Polarization::kD: return {r, r};
    case Polarization::kA: return {r, -r};
    case Polarization::kR: return {r, -kI * r};
    case Polarization::kL: return {r, kI * r};
  }
  return {1.0, 0.0};
}

inline Eigen::Matrix2cd unitary(double theta, double delta) {
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  Eigen::Matrix2cd u;
  u << cis(-delta) * c, cis(-delta) * s, cis(delta) * s, -cis(delta) * c;
  return u;
}

// Lossy two-source density matrix, one term at a time. Idler modes
// {H_I1, V_I1, H_0, V_0}, signal modes {H_S1, V_S1, H_S2, V_S2},
// row = 4 * idler + signal. Terms that do not depend on a summation index
// are added once.
inline Eigen::MatrixXcd term_joint_state(const InterferometerConfig& c) {
  enum { HI = 0, VI = 1, H0 = 2, V0 = 3 };
  enum { HS1 = 0, VS1 = 1, HS2 = 2, VS2 = 3 };
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(16, 16);
  auto add = [&rho](Complex coef, int ki, int ks, int bi, int bs) { rho(4 * ki + ks, 4 * bi + bs) += coef; };
  auto add_hc = [&add](Complex coef, int ki, int ks, int bi, int bs) {
    add(coef, ki, ks, bi, bs);
    add(std::conj(coef), bi, bs, ki, ks);
  };

  const double eta = c.state.eta();
  const double ih[2] = {c.state.i_h(), c.state.i_v()};
  const double n = (1.0 - eta) / 4.0;
  const double coh = c.state.i_coh() * eta * std::sqrt(ih[0] * ih[1]);
  const double t[2] = {c.t_h, c.t_v};
  const double r[2] = {std::sqrt(1.0 - c.t_h * c.t_h), std::sqrt(1.0 - c.t_v * c.t_v)};
  const Eigen::Matrix2cd u = unitary(c.theta, c.delta);
  const Complex b1 = std::polar(c.b1_mag, c.arg_b1);
  const Complex b2 = std::polar(c.b2_mag, c.arg_b2);
  const double p1 = std::norm(b1);
  const double p2 = std::norm(b2);
  const int lossy[2] = {H0, V0};
  const int sig1[2] = {HS1, VS1};
  const int sig2[2] = {HS2, VS2};
  const Complex corner = coh * cis(-c.state.phi());
  // phase[mu][nu] for mu_1 nu_1 -> mu_2 nu_2
  const double phase[2][2] = {{c.phases.phi_hh, c.phases.phi_hv}, {c.phases.phi_vh, c.phases.phi_vv}};
  // crossed[mu] for mu_1 mu_1 -> nu_2 nu_2, nu != mu
  const double crossed[2] = {c.phases.phi_hh_vv, c.phases.phi_vv_hh};

  // source 1 alone
  for (int mu = 0; mu < 2; ++mu) add(p1 * eta * ih[mu], mu, sig1[mu], mu, sig1[mu]);
  add_hc(p1 * corner, HI, HS1, VI, VS1);
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) add(p1 * n, mu, sig1[nu], mu, sig1[nu]);
  }

  // source 2 alone, idler pushed through the attenuator and U
  auto source2_diag = [&](double w, int mu, int s) {
    for (int l = 0; l < 2; ++l) {
      for (int lp = 0; lp < 2; ++lp) add(w * std::conj(u(mu, l)) * u(mu, lp) * t[mu] * t[mu], l, s, lp, s);
    }
    for (int lp = 0; lp < 2; ++lp) add_hc(w * t[mu] * r[mu] * u(mu, lp), lossy[mu], s, lp, s);
    add(w * r[mu] * r[mu], lossy[mu], s, lossy[mu], s);
  };
  for (int mu = 0; mu < 2; ++mu) source2_diag(p2 * eta * ih[mu], mu, sig2[mu]);
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) source2_diag(p2 * n, mu, sig2[nu]);
  }
  {
    const Complex w = p2 * corner;
    for (int l = 0; l < 2; ++l) {
      for (int lp = 0; lp < 2; ++lp) add_hc(w * std::conj(u(0, l)) * u(1, lp) * t[0] * t[1], l, HS2, lp, VS2);
    }
    for (int l = 0; l < 2; ++l) add_hc(w * std::conj(u(0, l)) * t[0] * r[1], l, HS2, V0, VS2);
    for (int lp = 0; lp < 2; ++lp) add_hc(w * u(1, lp) * r[0] * t[1], H0, HS2, lp, VS2);
    add_hc(w * r[0] * r[1], H0, HS2, V0, VS2);
  }

  // cross terms, ket from source 1 and bra from source 2
  const Complex x = cis(c.phi_i) * b1 * std::conj(b2);
  for (int mu = 0; mu < 2; ++mu) {
    const Complex w = x * eta * ih[mu] * cis(phase[mu][mu]);
    for (int l = 0; l < 2; ++l) add_hc(w * t[mu] * u(mu, l), mu, sig1[mu], l, sig2[mu]);
    add_hc(w * r[mu], mu, sig1[mu], lossy[mu], sig2[mu]);
  }
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) {
      const Complex w = x * n * cis(phase[mu][nu]);
      for (int l = 0; l < 2; ++l) add_hc(w * t[mu] * u(mu, l), mu, sig1[nu], l, sig2[nu]);
      add_hc(w * r[mu], mu, sig1[nu], lossy[mu], sig2[nu]);
    }
  }
  for (int mu = 0; mu < 2; ++mu) {
    const int nu = 1 - mu;
    const Complex w = x * coh * cis(crossed[mu]);
    for (int l = 0; l < 2; ++l) add_hc(w * t[nu] * u(nu, l), mu, sig1[mu], l, sig2[nu]);
    add_hc(w * r[nu], mu, sig1[mu], lossy[nu], sig2[nu]);
  }
  return rho;
}

// Partial trace over the idler and loss modes.
inline Eigen::Matrix4cd trace_idler(const Eigen::MatrixXcd& rho16) {
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) out(a, b) += rho16(4 * i + a, 4 * i + b);
    }
  }
  return out;
}

// Closed-form reduced signal state, basis {H_S1, V_S1, H_S2, V_S2}.
inline Eigen::Matrix4cd closed_signal_state(const InterferometerConfig& c) {
  const double eta = c.state.eta();
  const double ih = c.state.i_h();
  const double iv = c.state.i_v();
  auto k = [eta](double i) { return eta * i + (1.0 - eta) / 2.0; };
  auto m = [eta](double i) { return (4.0 * eta * i + 1.0 - eta) / 4.0; };
  const double n = (1.0 - eta) / 4.0;
  const double p1 = c.b1_mag * c.b1_mag;
  const double p2 = c.b2_mag * c.b2_mag;
  const auto& ph = c.phases;
  const double d = c.delta;
  const Complex l_h = m(ih) * c.t_h * cis(ph.phi_hh - d) - n * c.t_v * cis(ph.phi_vh + d);
  const Complex l_v = n * c.t_h * cis(ph.phi_hv - d) - m(iv) * c.t_v * cis(ph.phi_vv + d);
  const double coh = eta * c.state.i_coh() * std::sqrt(ih * iv);
  const Complex big_phi = cis(ph.phi_hh_vv + d);
  const Complex big_phi_prime = cis(ph.phi_vv_hh - d);
  const Complex x = std::polar(c.b1_mag, c.arg_b1) * std::conj(std::polar(c.b2_mag, c.arg_b2)) * cis(c.phi_i);

  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  rho(0, 0) = k(ih) * p1;
  rho(2, 2) = k(ih) * p2;
  rho(1, 1) = k(iv) * p1;
  rho(3, 3) = k(iv) * p2;
  rho(0, 2) = x * l_h * std::cos(2.0 * c.theta);
  rho(1, 3) = x * l_v * std::cos(2.0 * c.theta);
  rho(0, 3) = x * coh * big_phi * c.t_v * std::sin(2.0 * c.theta);
  rho(1, 2) = x * coh * big_phi_prime * c.t_h * std::sin(2.0 * c.theta);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) rho(b, a) = std::conj(rho(a, b));
  }
  return rho;
}

// <E^- E^+> with E^+ = (a_S1 + i e^{i phi_S} a_S2)/sqrt2 projected onto p.
inline double detect(const Eigen::Matrix4cd& rho_s, double phi_s, Polarization p) {
  const auto [ch, cv] = ket(p);
  Eigen::Vector4cd g;
  g << std::conj(ch), std::conj(cv), kI * cis(phi_s) * std::conj(ch), kI * cis(phi_s) * std::conj(cv);
  g /= std::sqrt(2.0);
  Complex acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) acc += g(a) * rho_s(a, b) * std::conj(g(b));
  }
  return acc.real();
}

// Pure-state route for eta = 1, icoh = 1 with a physical phase table
// (phi_vv = phi_hh, phi_hh_vv = phi_hh - phi, phi_vv_hh = phi_hh + phi).
// Builds the two-photon ket and applies the detector field to it.
inline double pure_ket_probability(const InterferometerConfig& c, Polarization p) {
  const double sh = std::sqrt(c.state.i_h());
  const double sv = std::sqrt(c.state.i_v());
  const Complex b1 = std::polar(c.b1_mag, c.arg_b1);
  const Complex b2 = std::polar(c.b2_mag, c.arg_b2) * cis(-c.phases.phi_hh);
  const Eigen::Matrix2cd u = unitary(c.theta, c.delta);
  const double t[2] = {c.t_h, c.t_v};
  const double r[2] = {std::sqrt(1.0 - c.t_h * c.t_h), std::sqrt(1.0 - c.t_v * c.t_v)};
  // psi(idler, signal), idler {H_I1, V_I1, H_0, V_0}, signal {H_S1, V_S1, H_S2, V_S2}
  Eigen::Matrix4cd psi = Eigen::Matrix4cd::Zero();
  const Complex amp[2] = {sh, sv * cis(c.state.phi())};
  for (int mu = 0; mu < 2; ++mu) {
    psi(mu, mu) += b1 * amp[mu];
    const Complex w = b2 * amp[mu] * cis(-c.phi_i);
    for (int l = 0; l < 2; ++l) psi(l, 2 + mu) += w * t[mu] * std::conj(u(mu, l));
    psi(2 + mu, 2 + mu) += w * r[mu];
  }
  const auto [ch, cv] = ket(p);
  Eigen::Vector4cd g;
  g << std::conj(ch), std::conj(cv), kI * cis(c.phi_s) * std::conj(ch), kI * cis(c.phi_s) * std::conj(cv);
  g /= std::sqrt(2.0);
  double prob = 0.0;
  for (int i = 0; i < 4; ++i) {
    Complex a = 0.0;
    for (int s = 0; s < 4; ++s) a += g(s) * psi(i, s);
    prob += std::norm(a);
  }
  return prob;
}

// Extrema of the closed-form signal probability on a dense phase grid.
inline std::pair<double, double> dense_extrema(const InterferometerConfig& c, Polarization p, int n = 20000) {
  const Eigen::Matrix4cd rho = closed_signal_state(c);
  const double base = c.arg_b1 - c.arg_b2 + c.phi_i;
  double hi = -1.0;
  double lo = 2.0;
  for (int k = 0; k < n; ++k) {
    const double phi_in = 2.0 * kPi * k / n;
    const double v = detect(rho, base - phi_in, p);
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return {hi, lo};
}

struct Draws {
  std::mt19937_64 rng;
  explicit Draws(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double angle() { return uniform(-kPi, kPi); }

  pathid::GeneralizedWernerParams params() { return {uniform(), uniform(), uniform(), angle()}; }

  InterferometerConfig config(bool lossy) {
    InterferometerConfig c;
    c.state = params();
    const double b1 = uniform(0.05, 0.95);
    c.b1_mag = std::sqrt(b1);
    c.b2_mag = std::sqrt(1.0 - b1);
    c.arg_b1 = angle();
    c.arg_b2 = angle();
    c.phi_i = angle();
    c.phi_s = angle();
    c.phases = pathid::PhaseTable::physical(c.state.phi(), angle(), angle(), angle());
    c.theta = uniform(0.0, kPi);
    c.delta = uniform(0.0, 2.0 * kPi);
    if (lossy) {
      c.t_h = uniform();
      c.t_v = uniform();
    }
    return c;
  }

  Polarization polarization() {
    return static_cast<Polarization>(std::uniform_int_distribution<int>(0, 5)(rng));
  }
};

}  // namespace oracle
