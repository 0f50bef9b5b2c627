#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "pathid/estimation.hpp"

namespace pathid {

/// The ten measurements of a complete scan plan.
enum class ScanSlot {
  kHDelta,       // theta = 0, delta_H
  kHDeltaPrime,  // theta = 0, delta'_H
  kVDelta,
  kVDeltaPrime,
  kD,  // theta = pi/4, common delta
  kR,
  kBlocked1H,  // S2 blocked
  kBlocked2H,  // S1 blocked
  kBlocked1V,
  kBlocked2V,
};

inline constexpr std::array<ScanSlot, 10> kAllScanSlots{
    ScanSlot::kHDelta, ScanSlot::kHDeltaPrime, ScanSlot::kVDelta,    ScanSlot::kVDeltaPrime, ScanSlot::kD,
    ScanSlot::kR,      ScanSlot::kBlocked1H,   ScanSlot::kBlocked2H, ScanSlot::kBlocked1V,   ScanSlot::kBlocked2V,
};

std::string_view slot_name(ScanSlot slot) noexcept;
std::optional<ScanSlot> parse_slot_name(std::string_view name) noexcept;

struct ScanPlan {
  int n_points = 24;
  std::optional<std::int64_t> shots;  // empty or 0: exact
  std::uint64_t seed = 0;
  /// Common delta of the D and R scans; default makes chi' - 2 delta = pi/4.
  std::optional<double> diagonal_delta;
  /// Find delta_H, delta_V and the primed settings by scanning delta instead
  /// of computing them from the phase table.
  bool calibrate = false;
};

struct ScanSetting {
  Polarization polarization = Polarization::kH;
  double theta = 0.0;
  double delta = 0.0;
  int blocked_source = 0;
};

ScanSetting scan_setting(const InterferometerConfig& config, ScanSlot slot, const ScanPlan& plan);

using PlanData = std::map<ScanSlot, PhaseScanRecord>;

/// Simulates every slot; slots run concurrently with independent seeds.
PlanData simulate_plan(const InterferometerConfig& config, const ScanPlan& plan);

struct Transmissions {
  double t_h = 1.0;
  double t_v = 1.0;
};

struct EstimationReport {
  double b1b2 = 0.0;
  double eta = 0.0;  // raw, may stray outside [0, 1] under noise
  double coh_product = 0.0;
  double alpha1 = 0.0;
  Verdict verdict = Verdict::kBoundary;
  double concurrence = 0.0;
  std::optional<double> i_h;
  std::optional<double> i_coh;
  std::optional<double> t_h;  // empty when not identifiable from the data
  std::optional<double> t_v;
  double sigma_alpha1 = 0.0;
  double sigma_concurrence = 0.0;
  bool sampled = false;
  std::string inputs_digest;

  // Intermediate fits.
  ExtremaEstimate h, h_prime, v, v_prime, d, r;
  double p_blocked1 = 0.0;
  double p_blocked2 = 0.0;
  Transmissions transmissions_used;
};

/// Runs the estimation chain on measured or simulated data. `fallback` is
/// used when the transmissions cannot be identified from the data.
/// Throws IncompletePlanError listing missing slots.
EstimationReport estimate_from_plan(const PlanData& data, std::optional<Transmissions> fallback = std::nullopt);

/// simulate_plan followed by estimate_from_plan, with the configured
/// transmissions as fallback.
EstimationReport run_pipeline(const InterferometerConfig& config, const ScanPlan& plan);

}  // namespace pathid
