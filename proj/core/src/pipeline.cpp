#include "pathid/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "pathid/errors.hpp"
#include "pathid/io.hpp"

namespace pathid {
namespace {

using std::numbers::pi;

// Observables feeding the estimators, in a fixed order.
enum Obs : std::size_t {
  kB1H,
  kB2H,
  kB1V,
  kB2V,
  kHPlus,
  kHMinus,
  kHPrimeMinus,
  kVPlus,
  kVMinus,
  kVPrimeMinus,
  kDMinus,
  kRMinus,
  kObsCount
};
using ObsVector = std::array<double, kObsCount>;

struct TransmissionSource {
  bool solved = false;
  int branch = 0;
  Transmissions fixed;
};

struct Derived {
  double b1b2 = 0.0;
  Transmissions t;
  std::optional<TransmissionEstimate> solution;
  double eta_raw = 0.0;
  double eta = 0.0;  // clamped to [0, 1]
  double coh = 0.0;
  double alpha1 = 0.0;
};

TransmissionInputs transmission_inputs(const ObsVector& o, double b1b2) {
  return TransmissionInputs{o[kHMinus], o[kHPrimeMinus], o[kVMinus], o[kVPrimeMinus], o[kHPlus], o[kVPlus], b1b2};
}

double usable_transmission(double t) { return std::clamp(t, 1e-12, 1.0); }

Derived derive(const ObsVector& o, const TransmissionSource& source) {
  Derived out;
  out.b1b2 = estimate_b1b2(o[kB1H] + o[kB1V], o[kB2H] + o[kB2V]);
  if (source.solved) {
    out.solution = solve_transmission_branch(transmission_inputs(o, out.b1b2), source.branch);
    if (!out.solution) throw NumericError("transmission branch has no solution");
    out.t = {usable_transmission(out.solution->t_h), usable_transmission(out.solution->t_v)};
  } else {
    out.t = source.fixed;
  }
  ExtremaEstimate h;
  h.p_plus = o[kHPlus];
  h.p_minus = o[kHMinus];
  ExtremaEstimate v;
  v.p_plus = o[kVPlus];
  v.p_minus = o[kVMinus];
  out.eta_raw = estimate_eta_lossy(h, v, out.b1b2, out.t.t_h, out.t.t_v);
  out.eta = std::clamp(out.eta_raw, 0.0, 1.0);
  out.coh = estimate_coh_product(o[kDMinus], o[kRMinus], out.b1b2, out.t.t_h, out.t.t_v);
  out.alpha1 = (1.0 - out.eta - 4.0 * out.coh) / 4.0;
  return out;
}

// Direct route when eta = 1: P_mu^- = 2 b T_mu I_mu and P_mu^+ = I_mu.
Transmissions eta_one_transmissions(const ObsVector& o, double b1b2) {
  auto direct = [&](double p_minus, double p_plus) -> std::optional<double> {
    if (p_plus <= 1e-12) return std::nullopt;
    return usable_transmission(p_minus / (2.0 * b1b2 * p_plus));
  };
  const auto th = direct(o[kHMinus], o[kHPlus]);
  const auto tv = direct(o[kVMinus], o[kVPlus]);
  return {th.value_or(tv.value_or(1.0)), tv.value_or(th.value_or(1.0))};
}

std::string digest(const PlanData& data) {
  std::uint64_t h = fnv1a("");
  for (const auto& [slot, record] : data) {
    h = fnv1a(slot_name(slot), h);
    h = fnv1a(scan_csv_text(record), h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string_view slot_name(ScanSlot slot) noexcept {
  switch (slot) {
    case ScanSlot::kHDelta: return "H_delta";
    case ScanSlot::kHDeltaPrime: return "H_deltaprime";
    case ScanSlot::kVDelta: return "V_delta";
    case ScanSlot::kVDeltaPrime: return "V_deltaprime";
    case ScanSlot::kD: return "D";
    case ScanSlot::kR: return "R";
    case ScanSlot::kBlocked1H: return "blocked1_H";
    case ScanSlot::kBlocked2H: return "blocked2_H";
    case ScanSlot::kBlocked1V: return "blocked1_V";
    case ScanSlot::kBlocked2V: return "blocked2_V";
  }
  return "";
}

std::optional<ScanSlot> parse_slot_name(std::string_view name) noexcept {
  for (ScanSlot s : kAllScanSlots) {
    if (slot_name(s) == name) return s;
  }
  return std::nullopt;
}

ScanSetting scan_setting(const InterferometerConfig& config, ScanSlot slot, const ScanPlan& plan) {
  auto tuned = [&](Polarization pol, bool primed) {
    if (plan.calibrate) return calibrate_delta(config, pol, primed, 180, plan.n_points);
    if (pol == Polarization::kH) return delta_star(config.phases, primed ? DeltaSetting::kHPrime : DeltaSetting::kH);
    return delta_star(config.phases, primed ? DeltaSetting::kVPrime : DeltaSetting::kV);
  };
  const double diag = plan.diagonal_delta.value_or(delta_for_chi_prime(config.phases, pi / 4.0));
  switch (slot) {
    case ScanSlot::kHDelta: return {Polarization::kH, 0.0, tuned(Polarization::kH, false), 0};
    case ScanSlot::kHDeltaPrime: return {Polarization::kH, 0.0, tuned(Polarization::kH, true), 0};
    case ScanSlot::kVDelta: return {Polarization::kV, 0.0, tuned(Polarization::kV, false), 0};
    case ScanSlot::kVDeltaPrime: return {Polarization::kV, 0.0, tuned(Polarization::kV, true), 0};
    case ScanSlot::kD: return {Polarization::kD, pi / 4.0, diag, 0};
    case ScanSlot::kR: return {Polarization::kR, pi / 4.0, diag, 0};
    case ScanSlot::kBlocked1H: return {Polarization::kH, 0.0, 0.0, 1};
    case ScanSlot::kBlocked2H: return {Polarization::kH, 0.0, 0.0, 2};
    case ScanSlot::kBlocked1V: return {Polarization::kV, 0.0, 0.0, 1};
    case ScanSlot::kBlocked2V: return {Polarization::kV, 0.0, 0.0, 2};
  }
  return {};
}

PlanData simulate_plan(const InterferometerConfig& config, const ScanPlan& plan) {
  config.validate();
  std::vector<std::pair<ScanSlot, std::future<PhaseScanRecord>>> jobs;
  for (ScanSlot slot : kAllScanSlots) {
    jobs.emplace_back(slot, std::async(std::launch::async, [&config, &plan, slot] {
                        const ScanSetting s = scan_setting(config, slot, plan);
                        InterferometerConfig c = config;
                        c.theta = s.theta;
                        c.delta = s.delta;
                        return simulate_scan(c, s.polarization, plan.n_points, plan.shots,
                                             derive_seed(plan.seed, slot_name(slot)), s.blocked_source);
                      }));
  }
  PlanData out;
  for (auto& [slot, job] : jobs) out.emplace(slot, job.get());
  return out;
}

EstimationReport estimate_from_plan(const PlanData& data, std::optional<Transmissions> fallback) {
  std::vector<std::string> missing;
  for (ScanSlot s : kAllScanSlots) {
    if (!data.count(s)) missing.emplace_back(slot_name(s));
  }
  if (!missing.empty()) throw IncompletePlanError(std::move(missing));

  EstimationReport rep;
  for (const auto& [slot, record] : data) rep.sampled = rep.sampled || record.mode == ScanMode::kSampled;

  const MeanProbability b1h = mean_probability(data.at(ScanSlot::kBlocked1H));
  const MeanProbability b2h = mean_probability(data.at(ScanSlot::kBlocked2H));
  const MeanProbability b1v = mean_probability(data.at(ScanSlot::kBlocked1V));
  const MeanProbability b2v = mean_probability(data.at(ScanSlot::kBlocked2V));
  rep.h = fit_fringe(data.at(ScanSlot::kHDelta));
  rep.h_prime = fit_fringe(data.at(ScanSlot::kHDeltaPrime));
  rep.v = fit_fringe(data.at(ScanSlot::kVDelta));
  rep.v_prime = fit_fringe(data.at(ScanSlot::kVDeltaPrime));
  rep.d = fit_fringe(data.at(ScanSlot::kD));
  rep.r = fit_fringe(data.at(ScanSlot::kR));
  rep.p_blocked1 = b1h.value + b1v.value;
  rep.p_blocked2 = b2h.value + b2v.value;

  const ObsVector obs{b1h.value,          b2h.value,       b1v.value,        b2v.value,
                      rep.h.p_plus,       rep.h.p_minus,   rep.h_prime.p_minus, rep.v.p_plus,
                      rep.v.p_minus,      rep.v_prime.p_minus, rep.d.p_minus, rep.r.p_minus};

  double tolerance = 1e-9;
  if (rep.sampled) {
    const double max_sigma = std::max({rep.h.sigma_plus, rep.h.sigma_minus, rep.h_prime.sigma_minus,
                                       rep.v.sigma_plus, rep.v.sigma_minus, rep.v_prime.sigma_minus});
    tolerance = 10.0 * max_sigma + 1e-9;
  }

  const double b1b2 = estimate_b1b2(rep.p_blocked1, rep.p_blocked2);
  const TransmissionInputs inputs = transmission_inputs(obs, b1b2);
  TransmissionSource source;
  try {
    const TransmissionEstimate sol = estimate_transmissions(inputs, tolerance);
    if (sol.ambiguous && fallback) {
      source.fixed = *fallback;
    } else {
      source.solved = true;
      source.branch = sol.branch;
      if (!sol.ambiguous) {
        rep.t_h = sol.t_h;
        rep.t_v = sol.t_v;
      }
    }
  } catch (const UnidentifiableError&) {
    source.fixed = fallback.value_or(eta_one_transmissions(obs, b1b2));
  } catch (const AmbiguousSolutionError&) {
    if (fallback) {
      source.fixed = *fallback;
    } else {
      source.solved = true;
      source.branch = transmission_candidates(inputs, tolerance).front().branch;
    }
  } catch (const InconsistentDataError&) {
    if (!fallback) throw;
    source.fixed = *fallback;
  }

  const Derived core = derive(obs, source);
  rep.b1b2 = core.b1b2;
  rep.transmissions_used = core.t;
  rep.eta = core.eta_raw;
  rep.coh_product = core.coh;

  if (rep.sampled) {
    // Linear propagation through the whole chain with central differences.
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(kObsCount, kObsCount);
    cov(kB1H, kB1H) = b1h.variance;
    cov(kB2H, kB2H) = b2h.variance;
    cov(kB1V, kB1V) = b1v.variance;
    cov(kB2V, kB2V) = b2v.variance;
    auto fringe_block = [&cov](std::size_t plus, std::size_t minus, const ExtremaEstimate& e) {
      cov(plus, plus) = e.sigma_plus * e.sigma_plus;
      cov(minus, minus) = e.sigma_minus * e.sigma_minus;
      cov(plus, minus) = cov(minus, plus) = e.cov_plus_minus;
    };
    fringe_block(kHPlus, kHMinus, rep.h);
    fringe_block(kVPlus, kVMinus, rep.v);
    cov(kHPrimeMinus, kHPrimeMinus) = rep.h_prime.sigma_minus * rep.h_prime.sigma_minus;
    cov(kVPrimeMinus, kVPrimeMinus) = rep.v_prime.sigma_minus * rep.v_prime.sigma_minus;
    cov(kDMinus, kDMinus) = rep.d.sigma_minus * rep.d.sigma_minus;
    cov(kRMinus, kRMinus) = rep.r.sigma_minus * rep.r.sigma_minus;

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(kObsCount);
    for (std::size_t i = 0; i < kObsCount; ++i) {
      const double step = 1e-6 * std::max(std::abs(obs[i]), 1e-3);
      ObsVector up = obs;
      ObsVector down = obs;
      up[i] += step;
      down[i] -= step;
      try {
        grad(static_cast<Eigen::Index>(i)) = (derive(up, source).alpha1 - derive(down, source).alpha1) / (2.0 * step);
      } catch (const std::exception&) {
        grad(static_cast<Eigen::Index>(i)) = 0.0;
      }
    }
    rep.sigma_alpha1 = std::sqrt(std::max(0.0, grad.dot(cov * grad)));
  }

  const double band = rep.sampled ? std::max(2.0 * rep.sigma_alpha1, kVerdictBand) : kVerdictBand;
  const PptEstimate ppt = ppt_and_concurrence(core.eta, core.coh, band);
  rep.alpha1 = ppt.alpha1;
  rep.verdict = ppt.verdict;
  rep.concurrence = ppt.concurrence;
  rep.sigma_concurrence = ppt.concurrence > 0.0 ? 2.0 * rep.sigma_alpha1 : 0.0;

  if (core.eta > 1e-9) {
    const bool lossless = std::abs(core.t.t_h - 1.0) <= 1e-9 && std::abs(core.t.t_v - 1.0) <= 1e-9;
    if (lossless) {
      try {
        rep.i_h = recover_ih(rep.h, b1b2);
      } catch (const UndefinedQuantityError&) {
      }
    } else if (core.solution && core.solution->i_h) {
      rep.i_h = core.solution->i_h;
    } else {
      rep.i_h = (rep.h.p_plus - (1.0 - core.eta) / 2.0) / core.eta;
    }
  }
  if (rep.i_h) {
    try {
      rep.i_coh = recover_icoh(core.coh, core.eta, *rep.i_h);
    } catch (const UndefinedQuantityError&) {
    }
  }
  rep.inputs_digest = digest(data);
  return rep;
}

EstimationReport run_pipeline(const InterferometerConfig& config, const ScanPlan& plan) {
  return estimate_from_plan(simulate_plan(config, plan), Transmissions{config.t_h, config.t_v});
}

}  // namespace pathid
