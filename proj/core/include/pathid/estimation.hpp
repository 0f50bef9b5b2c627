#pragma once

#include <array>
#include <optional>
#include <vector>

#include "pathid/analytic.hpp"
#include "pathid/scan.hpp"
#include "pathid/werner.hpp"

namespace pathid {

/// Sum and difference of fringe maximum and minimum.
struct ExtremaEstimate {
  double p_plus = 0.0;
  double p_minus = 0.0;
  double visibility = 0.0;
  // Standard errors, zero for exact scans.
  double sigma_plus = 0.0;
  double sigma_minus = 0.0;
  double sigma_visibility = 0.0;
  double cov_plus_minus = 0.0;
};

/// Least-squares fit of c0 + c1 sin(phi) + c2 cos(phi).
/// Throws UnderdeterminedFitError with fewer than 3 distinct phases.
ExtremaEstimate fit_fringe(const PhaseScanRecord& scan);

/// |b1||b2| from the two blocked-arm probabilities.
double estimate_b1b2(double p1, double p2);

double estimate_eta_lossless(double v_h, double v_v, double b1b2);
double estimate_eta_prob(double p_minus, double p_plus, double b1b2);

/// Uses the H fringe when t_h >= t_v and the V fringe otherwise.
double estimate_eta_lossy(const ExtremaEstimate& h, const ExtremaEstimate& v, double b1b2, double t_h, double t_v);

/// eta * I * sqrt(I_H I_V) from the theta = pi/4 D and R fringe amplitudes.
double estimate_coh_product(double p_minus_d, double p_minus_r, double b1b2, double t_h = 1.0, double t_v = 1.0);

/// Visibility form of the coherence product: sqrt(V_D^2 + V_R^2) / (4 b1b2).
double estimate_coh_visibility(double v_d, double v_r, double b1b2);

struct PptEstimate {
  double alpha1 = 0.0;
  Verdict verdict = Verdict::kBoundary;
  double concurrence = 0.0;
};

PptEstimate ppt_and_concurrence(double eta, double coh, double band = kVerdictBand);

/// I_H from the lossless H fringe. Throws UndefinedQuantityError when eta = 0.
double recover_ih(const ExtremaEstimate& h, double b1b2);

/// I from the coherence product. Throws UndefinedQuantityError unless
/// eta > 0 and 0 < ih < 1. Values above 1 by less than 1e-6 are clamped to 1.
double recover_icoh(double coh, double eta, double ih);

struct TransmissionEstimate {
  double t_h = 1.0;
  double t_v = 1.0;
  double eta = 0.0;
  std::optional<double> i_h;  // empty when eta = 0
  double residual = 0.0;      // max forward-reconstruction error
  int branch = 0;             // bit 0: H absolute value flipped, bit 1: V
  bool ambiguous = false;     // another distinct solution fits as well
};

struct TransmissionInputs {
  double p_minus_h = 0.0;
  double p_minus_h_prime = 0.0;
  double p_minus_v = 0.0;
  double p_minus_v_prime = 0.0;
  double p_plus_h = 0.0;
  double p_plus_v = 0.0;
  double b1b2 = 0.0;
};

/// The six theta = 0 observables predicted for (t_h, t_v, eta, i_h):
/// P_H-, P'_H-, P_V-, P'_V-, P_H+, P_V+.
std::array<double, 6> forward_observables(double t_h, double t_v, double eta, double i_h, double b1b2);

/// Unvalidated solution of one absolute-value branch. Empty when the branch
/// has no finite solution.
std::optional<TransmissionEstimate> solve_transmission_branch(const TransmissionInputs& in, int branch);

/// Physical branches reproducing the observables within `tolerance`,
/// best residual first.
std::vector<TransmissionEstimate> transmission_candidates(const TransmissionInputs& in, double tolerance);

/// True when two candidates describe different solutions.
bool distinct_solutions(const TransmissionEstimate& a, const TransmissionEstimate& b, double tolerance);

/// Solves for the attenuator transmissions, eta and I_H. A branch is accepted
/// when it is physical and reproduces all six observables within `tolerance`;
/// an accepted primary branch is returned first. When P_H+ = P_V+ the six
/// observables can admit a second exact solution; `ambiguous` is then set.
/// Throws UnidentifiableError when eta = 1, InconsistentDataError when no
/// branch is accepted, AmbiguousSolutionError when only flipped branches are
/// accepted and they disagree.
TransmissionEstimate estimate_transmissions(const ExtremaEstimate& h, const ExtremaEstimate& h_primed,
                                            const ExtremaEstimate& v, const ExtremaEstimate& v_primed,
                                            double p_plus_h, double p_plus_v, double b1b2,
                                            double tolerance = 1e-9);
TransmissionEstimate estimate_transmissions(const TransmissionInputs& in, double tolerance = 1e-9);

/// Scans delta over `grid` points of [0, pi) at theta = 0 and returns the
/// setting minimizing (or maximizing) the fitted H or V fringe amplitude.
double calibrate_delta(const InterferometerConfig& config, Polarization pol, bool maximize, int grid = 180,
                       int n_points = 24);

}  // namespace pathid
