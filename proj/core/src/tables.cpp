#include "pathid/tables.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pathid/errors.hpp"
#include "pathid/io.hpp"

namespace pathid {
namespace {

std::string fixed2(double value) {
  std::array<char, 64> buf{};
  double r = round_half_even(value, 2);
  if (r == 0.0) r = 0.0;  // no "-0.00"
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), r, std::chars_format::fixed, 2);
  return std::string(buf.data(), res.ptr);
}

std::string cell(double value, bool raw) { return raw ? format_real_shortest(value) : fixed2(value); }

std::string params_cell(const ReferenceState& s) {
  auto one = [](double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 1);
    return std::string(buf.data(), res.ptr);
  };
  if (!s.coherence_defined) return "\"(" + one(s.params.eta()) + ", --, --)\"";
  return "\"(" + one(s.params.eta()) + ", " + one(s.params.i_coh()) + ", " + one(s.params.i_h()) + ")\"";
}

ScanPlan exact_plan(double chi_prime_minus_2delta, const InterferometerConfig& config) {
  ScanPlan plan;
  plan.diagonal_delta = delta_for_chi_prime(config.phases, chi_prime_minus_2delta);
  return plan;
}

}  // namespace

const std::array<ReferenceState, 5>& reference_states() {
  static const std::array<ReferenceState, 5> states{{
      {"rho1", GeneralizedWernerParams(0.0, 0.0, 0.5), false},
      {"rho2", GeneralizedWernerParams(0.2, 1.0, 0.5), true},
      {"rho3", GeneralizedWernerParams(0.6, 0.8, 0.3), true},
      {"rho4", GeneralizedWernerParams(0.7, 1.0, 0.5), true},
      {"rho5", GeneralizedWernerParams(1.0, 1.0, 0.5), true},
  }};
  return states;
}

InterferometerConfig reference_config(const GeneralizedWernerParams& params, double t_h, double t_v) {
  InterferometerConfig c;
  c.state = params;
  c.b1_mag = c.b2_mag = 1.0 / std::numbers::sqrt2;
  c.t_h = t_h;
  c.t_v = t_v;
  return c;
}

std::vector<VisibilityRow> visibility_table(double chi_prime_minus_2delta) {
  std::vector<VisibilityRow> rows;
  for (const ReferenceState& s : reference_states()) {
    const InterferometerConfig config = reference_config(s.params);
    const EstimationReport rep = run_pipeline(config, exact_plan(chi_prime_minus_2delta, config));
    rows.push_back({s, rep.r.visibility, rep.d.visibility, rep.v.visibility, rep.h.visibility, rep.verdict,
                    rep.concurrence});
  }
  return rows;
}

std::vector<LossyRow> lossy_table(double t_h, double t_v) {
  std::vector<LossyRow> rows;
  for (const ReferenceState& s : reference_states()) {
    const InterferometerConfig config = reference_config(s.params, t_h, t_v);
    const EstimationReport rep = run_pipeline(config, exact_plan(std::numbers::pi / 4.0, config));
    rows.push_back({s, rep.eta, rep.coh_product, rep.verdict, rep.concurrence});
  }
  return rows;
}

std::vector<ConcurrencePair> concurrence_pairs() {
  std::vector<ConcurrencePair> rows;
  for (const ReferenceState& s : reference_states()) {
    const InterferometerConfig config = reference_config(s.params);
    const EstimationReport rep = run_pipeline(config, exact_plan(std::numbers::pi / 4.0, config));
    const double b = rep.b1b2;
    double eta = 0.0;
    if (std::abs(4.0 * b - rep.v.visibility - rep.h.visibility) > 1e-9) {
      eta = estimate_eta_lossless(rep.h.visibility, rep.v.visibility, b);
    } else {
      // Both visibilities at their maximum 4 b: the visibility form is 0/0.
      eta = estimate_eta_prob(rep.h.p_minus, rep.h.p_plus, b);
    }
    const double coh = estimate_coh_visibility(rep.d.visibility, rep.r.visibility, b);
    const PptEstimate ppt = ppt_and_concurrence(std::clamp(eta, 0.0, 1.0), coh);
    rows.push_back({s, concurrence_closed(s.params), ppt.concurrence});
  }
  return rows;
}

std::vector<SweepPoint> sweep(SweepParameter param, double lo, double hi, int n, const GeneralizedWernerParams& fixed) {
  if (n < 2) throw ValidationError("sweep needs at least 2 points");
  std::vector<SweepPoint> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double value = k == n - 1 ? hi : lo + (hi - lo) * k / (n - 1);
    GeneralizedWernerParams p;
    switch (param) {
      case SweepParameter::kEta: p = GeneralizedWernerParams(value, fixed.i_coh(), fixed.i_h()); break;
      case SweepParameter::kIh: p = GeneralizedWernerParams(fixed.eta(), fixed.i_coh(), value); break;
      case SweepParameter::kIcoh: p = GeneralizedWernerParams(fixed.eta(), value, fixed.i_h()); break;
    }
    out.push_back({value, ppt_spectrum_closed(p).alpha1, concurrence_closed(p)});
  }
  return out;
}

double round_half_even(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::nearbyint(value * scale) / scale;
}

std::string_view verdict_label(Verdict v) noexcept {
  switch (v) {
    case Verdict::kEntangled: return "Entangled";
    case Verdict::kSeparable: return "Separable";
    case Verdict::kBoundary: return "Boundary";
  }
  return "Boundary";
}

std::string visibility_table_csv(const std::vector<VisibilityRow>& rows, bool raw) {
  std::ostringstream out;
  out << "state,params,V_R,V_D,V_V,V_H,PPT,concurrence\n";
  for (const auto& r : rows) {
    out << r.state.name << ',' << params_cell(r.state) << ',' << cell(r.v_r, raw) << ',' << cell(r.v_d, raw) << ','
        << cell(r.v_v, raw) << ',' << cell(r.v_h, raw) << ',' << verdict_label(r.verdict) << ','
        << cell(r.concurrence, raw) << '\n';
  }
  return out.str();
}

std::string lossy_table_csv(const std::vector<LossyRow>& rows, bool raw) {
  std::ostringstream out;
  out << "state,params,P_HV,P_DR,PPT,concurrence\n";
  for (const auto& r : rows) {
    out << r.state.name << ',' << params_cell(r.state) << ',' << cell(r.p_hv, raw) << ',' << cell(r.p_dr, raw) << ','
        << verdict_label(r.verdict) << ',' << cell(r.concurrence, raw) << '\n';
  }
  return out.str();
}

std::string concurrence_pairs_csv(const std::vector<ConcurrencePair>& rows) {
  std::ostringstream out;
  out << "state,concurrence_from_parameters,concurrence_from_visibilities\n";
  for (const auto& r : rows) {
    out << r.state.name << ',' << format_real(r.from_parameters) << ',' << format_real(r.from_visibilities) << '\n';
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << "param_value,alpha1,concurrence\n";
  for (const auto& p : points) {
    out << format_real(p.value) << ',' << format_real(p.alpha1) << ',' << format_real(p.concurrence) << '\n';
  }
  return out.str();
}

}  // namespace pathid
