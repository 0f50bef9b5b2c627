#include "pathid/scan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "pathid/errors.hpp"

namespace pathid {

void PhaseScanRecord::validate() const {
  for (const ScanSample& s : samples) {
    if (!std::isfinite(s.phi_in)) throw ValidationError("scan phase must be finite");
    if (mode == ScanMode::kExact) {
      if (!(s.probability >= 0.0 && s.probability <= 1.0)) {
        throw ValidationError("scan probability outside [0, 1]: " + std::to_string(s.probability));
      }
    } else {
      if (s.shots <= 0) throw ValidationError("scan shots must be positive");
      if (s.counts < 0 || s.counts > s.shots) throw ValidationError("scan counts must lie in [0, shots]");
    }
  }
}

PhaseScanRecord simulate_scan(const InterferometerConfig& config, Polarization pol, int n_points,
                              std::optional<std::int64_t> shots, std::uint64_t seed, int blocked_source) {
  if (n_points < 8) throw ValidationError("points must be at least 8, got " + std::to_string(n_points));
  if (shots && *shots < 0) throw ValidationError("shots must be non-negative");
  if (blocked_source < 0 || blocked_source > 2) throw ValidationError("blocked source must be 0, 1 or 2");

  const auto projector = PolarizationProjector::of(pol);
  const DensityMatrix rho_s = signal_state(config);
  const bool sampled = shots && *shots > 0;

  PhaseScanRecord out;
  out.polarization = pol;
  out.theta = config.theta;
  out.delta = config.delta;
  out.mode = sampled ? ScanMode::kSampled : ScanMode::kExact;
  out.samples.reserve(static_cast<std::size_t>(n_points));

  double flat = 0.0;
  if (blocked_source != 0) flat = blocked_arm_probability(config, projector, blocked_source);

  std::mt19937_64 rng(seed);
  for (int k = 0; k < n_points; ++k) {
    ScanSample s;
    s.phi_in = 2.0 * std::numbers::pi * k / n_points;
    const double phi_s = config.with_phi_in(s.phi_in).phi_s;
    double p = blocked_source != 0 ? flat : detection_probability(rho_s, phi_s, projector);
    p = std::clamp(p, 0.0, 1.0);
    if (sampled) {
      std::poisson_distribution<std::int64_t> draw(static_cast<double>(*shots) * p);
      s.shots = *shots;
      s.counts = std::min(draw(rng), *shots);
    } else {
      s.probability = p;
    }
    out.samples.push_back(s);
  }
  return out;
}

MeanProbability mean_probability(const PhaseScanRecord& scan) {
  if (scan.samples.empty()) throw ValidationError("empty scan");
  const double n = static_cast<double>(scan.samples.size());
  MeanProbability out;
  for (const ScanSample& s : scan.samples) {
    if (scan.mode == ScanMode::kExact) {
      out.value += s.probability;
    } else {
      const double shots = static_cast<double>(s.shots);
      out.value += static_cast<double>(s.counts) / shots;
      out.variance += std::max<double>(static_cast<double>(s.counts), 1.0) / (shots * shots);
    }
  }
  out.value /= n;
  out.variance /= n * n;
  return out;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis) noexcept {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) noexcept {
  // splitmix64 finalizer over seed ^ hash(key)
  std::uint64_t z = seed ^ fnv1a(key);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace pathid
