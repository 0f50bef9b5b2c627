#include "pathid/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pathid/errors.hpp"

namespace pathid {
namespace {

constexpr double kDivisionGuard = 1e-15;

void require_transmission(double t, const char* name) {
  if (!(t > 0.0 && t <= 1.0)) throw ValidationError(std::string(name) + " must lie in (0, 1]");
}

void require_b1b2(double b1b2) {
  if (!(b1b2 > 0.0)) throw ValidationError("b1b2 must be positive");
}

std::size_t distinct_phases(const PhaseScanRecord& scan) {
  std::vector<double> phases;
  phases.reserve(scan.samples.size());
  for (const ScanSample& s : scan.samples) {
    double p = std::fmod(s.phi_in, 2.0 * std::numbers::pi);
    if (p < 0.0) p += 2.0 * std::numbers::pi;
    phases.push_back(p);
  }
  std::sort(phases.begin(), phases.end());
  std::size_t count = 0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (i == 0 || phases[i] - phases[i - 1] > 1e-12) ++count;
  }
  if (count > 1 && phases.front() + 2.0 * std::numbers::pi - phases.back() <= 1e-12) --count;
  return count;
}

}  // namespace

ExtremaEstimate fit_fringe(const PhaseScanRecord& scan) {
  if (distinct_phases(scan) < 3) {
    throw UnderdeterminedFitError("fringe fit needs at least 3 distinct phases");
  }
  scan.validate();
  const auto n = static_cast<Eigen::Index>(scan.samples.size());
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  Eigen::VectorXd var = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const ScanSample& s = scan.samples[static_cast<std::size_t>(i)];
    x(i, 0) = 1.0;
    x(i, 1) = std::sin(s.phi_in);
    x(i, 2) = std::cos(s.phi_in);
    if (scan.mode == ScanMode::kExact) {
      y(i) = s.probability;
    } else {
      const double shots = static_cast<double>(s.shots);
      y(i) = static_cast<double>(s.counts) / shots;
      var(i) = std::max(static_cast<double>(s.counts), 1.0) / (shots * shots);
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < 3) throw UnderdeterminedFitError("fringe fit design matrix is rank deficient");
  const Eigen::Vector3d c = qr.solve(y);

  ExtremaEstimate out;
  const double r = std::hypot(c(1), c(2));
  out.p_plus = 2.0 * c(0);
  out.p_minus = 2.0 * r;
  out.visibility = out.p_plus > 0.0 ? out.p_minus / out.p_plus : 0.0;
  if (scan.mode == ScanMode::kExact) return out;

  // Sandwich covariance of the coefficients.
  const Eigen::Matrix3d inv = (x.transpose() * x).inverse();
  const Eigen::Matrix3d cov = inv * x.transpose() * var.asDiagonal() * x * inv;
  Eigen::Vector3d g_plus(2.0, 0.0, 0.0);
  Eigen::Vector3d g_minus = Eigen::Vector3d::Zero();
  if (r > 0.0) {
    g_minus << 0.0, 2.0 * c(1) / r, 2.0 * c(2) / r;
  }
  out.sigma_plus = std::sqrt(g_plus.dot(cov * g_plus));
  out.sigma_minus = r > 0.0 ? std::sqrt(g_minus.dot(cov * g_minus)) : 2.0 * std::sqrt(0.5 * (cov(1, 1) + cov(2, 2)));
  out.cov_plus_minus = g_plus.dot(cov * g_minus);
  if (out.p_plus > 0.0) {
    const double dv_dp = 1.0 / out.p_plus;
    const double dv_dq = -out.p_minus / (out.p_plus * out.p_plus);
    const double v = dv_dp * dv_dp * out.sigma_minus * out.sigma_minus + dv_dq * dv_dq * out.sigma_plus * out.sigma_plus +
                     2.0 * dv_dp * dv_dq * out.cov_plus_minus;
    out.sigma_visibility = std::sqrt(std::max(v, 0.0));
  }
  return out;
}

double estimate_b1b2(double p1, double p2) {
  if (!(p1 >= 0.0) || !(p2 >= 0.0)) throw ValidationError("blocked-arm probabilities must be non-negative");
  if (p1 + p2 <= 0.0) throw ValidationError("blocked-arm probabilities are both zero");
  return std::sqrt(p1 * p2) / (p1 + p2);
}

double estimate_eta_lossless(double v_h, double v_v, double b1b2) {
  require_b1b2(b1b2);
  const double denom = 4.0 * b1b2 - v_v - v_h;
  if (std::abs(denom) < kDivisionGuard) throw NumericError("eta from visibilities: vanishing denominator");
  return (v_v + v_h - v_h * v_v / b1b2) / denom;
}

double estimate_eta_prob(double p_minus, double p_plus, double b1b2) {
  require_b1b2(b1b2);
  return p_minus / b1b2 - 2.0 * p_plus + 1.0;
}

double estimate_eta_lossy(const ExtremaEstimate& h, const ExtremaEstimate& v, double b1b2, double t_h, double t_v) {
  require_b1b2(b1b2);
  require_transmission(t_h, "t_h");
  require_transmission(t_v, "t_v");
  const double sum = t_h + t_v;
  if (t_h >= t_v) return (2.0 * h.p_minus + b1b2 * (sum - 4.0 * h.p_plus * t_h)) / (b1b2 * sum);
  return (2.0 * v.p_minus + b1b2 * (sum - 4.0 * v.p_plus * t_v)) / (b1b2 * sum);
}

double estimate_coh_product(double p_minus_d, double p_minus_r, double b1b2, double t_h, double t_v) {
  require_b1b2(b1b2);
  require_transmission(t_h, "t_h");
  require_transmission(t_v, "t_v");
  return std::sqrt(2.0 * (p_minus_d * p_minus_d + p_minus_r * p_minus_r)) /
         (2.0 * b1b2 * std::sqrt(t_h * t_h + t_v * t_v));
}

double estimate_coh_visibility(double v_d, double v_r, double b1b2) {
  require_b1b2(b1b2);
  return std::hypot(v_d, v_r) / (4.0 * b1b2);
}

PptEstimate ppt_and_concurrence(double eta, double coh, double band) {
  PptEstimate out;
  out.alpha1 = (1.0 - eta - 4.0 * coh) / 4.0;
  out.verdict = classify_alpha1(out.alpha1, band);
  out.concurrence = std::max(0.0, -2.0 * out.alpha1);
  return out;
}

double recover_ih(const ExtremaEstimate& h, double b1b2) {
  require_b1b2(b1b2);
  const double denom = 2.0 * h.p_minus + b1b2 * (2.0 - 4.0 * h.p_plus);
  if (std::abs(denom) < 1e-12) throw UndefinedQuantityError("I_H is undefined when eta = 0");
  return h.p_minus / denom;
}

double recover_icoh(double coh, double eta, double ih) {
  constexpr double margin = 1e-9;
  if (!(eta > margin)) throw UndefinedQuantityError("I is undefined when eta = 0");
  if (!(ih > margin && ih < 1.0 - margin)) throw UndefinedQuantityError("I is undefined when I_H is 0 or 1");
  const double value = coh / (eta * std::sqrt(ih * (1.0 - ih)));
  if (value > 1.0 && value - 1.0 < 1e-6) return 1.0;
  return value;
}

std::array<double, 6> forward_observables(double t_h, double t_v, double eta, double i_h, double b1b2) {
  const double n = (1.0 - eta) / 4.0;
  const double i_v = 1.0 - i_h;
  return {
      2.0 * b1b2 * std::abs((t_h - t_v) * n + t_h * eta * i_h),
      2.0 * b1b2 * ((t_h + t_v) * n + t_h * eta * i_h),
      2.0 * b1b2 * std::abs((t_v - t_h) * n + t_v * eta * i_v),
      2.0 * b1b2 * ((t_v + t_h) * n + t_v * eta * i_v),
      2.0 * n + eta * i_h,
      2.0 * n + eta * i_v,
  };
}

std::optional<TransmissionEstimate> solve_transmission_branch(const TransmissionInputs& in, int branch) {
  require_b1b2(in.b1b2);
  const double b4 = 4.0 * in.b1b2;
  double s_h = (in.p_minus_h_prime + in.p_minus_h) / b4;
  double d_h = (in.p_minus_h_prime - in.p_minus_h) / b4;
  double s_v = (in.p_minus_v_prime + in.p_minus_v) / b4;
  double d_v = (in.p_minus_v_prime - in.p_minus_v) / b4;
  if (branch & 1) std::swap(s_h, d_h);
  if (branch & 2) std::swap(s_v, d_v);

  const double den_v = s_v + d_h;
  const double den_h = s_h + d_v;
  if (std::abs(den_v) < kDivisionGuard || std::abs(den_h) < kDivisionGuard) return std::nullopt;
  const double a = d_h * in.p_plus_v / den_v;
  const double a_check = d_v * in.p_plus_h / den_h;
  if (!(a > kDivisionGuard)) return std::nullopt;

  TransmissionEstimate out;
  out.branch = branch;
  out.eta = 1.0 - 4.0 * a;
  out.t_h = d_v / a;
  out.t_v = d_h / a;
  if (std::abs(out.eta) > 1e-12) out.i_h = (in.p_plus_h - 2.0 * a) / out.eta;

  const auto fwd = forward_observables(out.t_h, out.t_v, out.eta, out.i_h.value_or(0.5), in.b1b2);
  const std::array<double, 6> observed{in.p_minus_h, in.p_minus_h_prime, in.p_minus_v,
                                       in.p_minus_v_prime, in.p_plus_h, in.p_plus_v};
  out.residual = std::abs(a - a_check);
  for (std::size_t k = 0; k < fwd.size(); ++k) out.residual = std::max(out.residual, std::abs(fwd[k] - observed[k]));
  if (!std::isfinite(out.residual)) return std::nullopt;
  return out;
}

std::vector<TransmissionEstimate> transmission_candidates(const TransmissionInputs& in, double tolerance) {
  std::vector<TransmissionEstimate> accepted;
  for (int branch = 0; branch < 4; ++branch) {
    const auto sol = solve_transmission_branch(in, branch);
    if (!sol) continue;
    const bool physical = sol->t_h > 0.0 && sol->t_h <= 1.0 + tolerance && sol->t_v > 0.0 &&
                          sol->t_v <= 1.0 + tolerance && sol->eta >= -tolerance && sol->eta <= 1.0 + tolerance &&
                          (!sol->i_h || (*sol->i_h >= -tolerance && *sol->i_h <= 1.0 + tolerance));
    if (physical && sol->residual <= tolerance) accepted.push_back(*sol);
  }
  std::stable_sort(accepted.begin(), accepted.end(),
                   [](const TransmissionEstimate& a, const TransmissionEstimate& b) { return a.residual < b.residual; });
  return accepted;
}

bool distinct_solutions(const TransmissionEstimate& a, const TransmissionEstimate& b, double tolerance) {
  const double gap = std::max({std::abs(a.t_h - b.t_h), std::abs(a.t_v - b.t_v), std::abs(a.eta - b.eta),
                               std::abs(a.i_h.value_or(0.0) - b.i_h.value_or(0.0))});
  return gap > std::max(1e-6, 10.0 * tolerance);
}

TransmissionEstimate estimate_transmissions(const TransmissionInputs& in, double tolerance) {
  require_b1b2(in.b1b2);
  const double b4 = 4.0 * in.b1b2;
  if (std::max(std::abs(in.p_minus_h_prime - in.p_minus_h), std::abs(in.p_minus_v_prime - in.p_minus_v)) / b4 <=
      tolerance) {
    throw UnidentifiableError("transmissions are unidentifiable when eta = 1");
  }
  const auto accepted = transmission_candidates(in, tolerance);
  if (accepted.empty()) {
    throw InconsistentDataError("no transmission branch reproduces the measured fringes");
  }
  for (const auto& c : accepted) {
    if (c.branch != 0) continue;
    TransmissionEstimate out = c;
    out.ambiguous = std::any_of(accepted.begin(), accepted.end(), [&](const TransmissionEstimate& other) {
      return distinct_solutions(c, other, tolerance);
    });
    return out;
  }
  for (std::size_t k = 1; k < accepted.size(); ++k) {
    if (distinct_solutions(accepted.front(), accepted[k], tolerance)) {
      throw AmbiguousSolutionError("transmission data admit more than one solution");
    }
  }
  return accepted.front();
}

TransmissionEstimate estimate_transmissions(const ExtremaEstimate& h, const ExtremaEstimate& h_primed,
                                            const ExtremaEstimate& v, const ExtremaEstimate& v_primed,
                                            double p_plus_h, double p_plus_v, double b1b2, double tolerance) {
  return estimate_transmissions(TransmissionInputs{h.p_minus, h_primed.p_minus, v.p_minus, v_primed.p_minus,
                                                   p_plus_h, p_plus_v, b1b2},
                                tolerance);
}

double calibrate_delta(const InterferometerConfig& config, Polarization pol, bool maximize, int grid, int n_points) {
  if (pol != Polarization::kH && pol != Polarization::kV) {
    throw SettingsError("delta calibration is defined for H and V only");
  }
  if (grid < 2) throw ValidationError("calibration grid must have at least 2 points");
  InterferometerConfig probe = config;
  probe.theta = 0.0;
  double best_delta = 0.0;
  double best = maximize ? -1.0 : 2.0;
  for (int k = 0; k < grid; ++k) {
    probe.delta = std::numbers::pi * k / grid;
    const double amp = fit_fringe(simulate_scan(probe, pol, n_points, std::nullopt, 0)).p_minus;
    if (maximize ? amp > best : amp < best) {
      best = amp;
      best_delta = probe.delta;
    }
  }
  return best_delta;
}

}  // namespace pathid
