#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pathid/interferometer.hpp"

namespace pathid {

enum class ScanMode { kExact, kSampled };

struct ScanSample {
  double phi_in = 0.0;
  double probability = 0.0;  // exact mode
  std::int64_t counts = 0;   // sampled mode
  std::int64_t shots = 0;    // sampled mode
};

struct PhaseScanRecord {
  Polarization polarization = Polarization::kH;
  double theta = 0.0;
  double delta = 0.0;
  ScanMode mode = ScanMode::kExact;
  std::vector<ScanSample> samples;

  /// Throws ValidationError on probabilities outside [0, 1], counts > shots,
  /// or negative counts.
  void validate() const;
};

/// n_points uniform phases in [0, 2 pi). `shots` empty or 0 selects exact
/// mode; otherwise counts are Poisson(shots * P) drawn from `seed`.
/// `blocked_source` 1 or 2 blocks the other source's signal beam.
PhaseScanRecord simulate_scan(const InterferometerConfig& config, Polarization pol, int n_points,
                              std::optional<std::int64_t> shots, std::uint64_t seed, int blocked_source = 0);

/// Mean detection probability over a scan, and the variance of that mean.
struct MeanProbability {
  double value = 0.0;
  double variance = 0.0;
};
MeanProbability mean_probability(const PhaseScanRecord& scan);

/// Child seed for an independent stream labelled `key`.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) noexcept;

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;

}  // namespace pathid
