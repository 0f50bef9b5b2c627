#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "pathid/pipeline.hpp"

namespace pathid {

struct ReferenceState {
  std::string_view name;
  GeneralizedWernerParams params;
  bool coherence_defined = true;  // false for the maximally mixed state
};

/// rho_1 ... rho_5: (0, -, -), (0.2, 1, 0.5), (0.6, 0.8, 0.3), (0.7, 1, 0.5), (1, 1, 0.5).
const std::array<ReferenceState, 5>& reference_states();

/// Balanced emission, zero phase table, lossless, for one reference state.
InterferometerConfig reference_config(const GeneralizedWernerParams& params, double t_h = 1.0, double t_v = 1.0);

struct VisibilityRow {
  ReferenceState state;
  double v_r = 0.0;
  double v_d = 0.0;
  double v_v = 0.0;
  double v_h = 0.0;
  Verdict verdict = Verdict::kBoundary;
  double concurrence = 0.0;
};

/// Visibilities, verdict and concurrence from exact simulated scans, with
/// the D and R scans taken at chi' - 2 delta = `chi_prime_minus_2delta`.
std::vector<VisibilityRow> visibility_table(double chi_prime_minus_2delta);

struct LossyRow {
  ReferenceState state;
  double p_hv = 0.0;  // eta estimated with the attenuator
  double p_dr = 0.0;  // coherence product
  Verdict verdict = Verdict::kBoundary;
  double concurrence = 0.0;
};

std::vector<LossyRow> lossy_table(double t_h, double t_v);

struct ConcurrencePair {
  ReferenceState state;
  double from_parameters = 0.0;
  double from_visibilities = 0.0;
};

/// Concurrence of each reference state in closed form and as recovered from
/// the fitted H, V, D and R visibilities.
std::vector<ConcurrencePair> concurrence_pairs();

enum class SweepParameter { kEta, kIh, kIcoh };

struct SweepPoint {
  double value = 0.0;
  double alpha1 = 0.0;
  double concurrence = 0.0;
};

/// n >= 2 evenly spaced values of one parameter from lo to hi inclusive.
std::vector<SweepPoint> sweep(SweepParameter param, double lo, double hi, int n, const GeneralizedWernerParams& fixed);

/// Round half to even at `decimals` places.
double round_half_even(double value, int decimals);

/// Verdict as printed in the tables ("Entangled", "Separable", "Boundary").
std::string_view verdict_label(Verdict v) noexcept;

/// CSV renderings. `raw` prints unrounded values instead of two decimals.
std::string visibility_table_csv(const std::vector<VisibilityRow>& rows, bool raw);
std::string lossy_table_csv(const std::vector<LossyRow>& rows, bool raw);
std::string concurrence_pairs_csv(const std::vector<ConcurrencePair>& rows);
std::string sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace pathid
