#include "pathid_cli/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pathid/errors.hpp"
#include "pathid/io.hpp"
#include "pathid/tables.hpp"

namespace pathid::cli {
namespace {

struct Globals {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
};

std::string num(double v) {
  if (v == 0.0) v = 0.0;
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

void emit(const Globals& g, const std::string& text, std::ostream& out) {
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw ValidationError("--out: cannot write " + g.out);
  file << text;
  if (!file) throw ValidationError("--out: cannot write " + g.out);
}

InterferometerConfig require_config(const Globals& g, const char* command) {
  if (g.config.empty()) throw ValidationError(std::string(command) + " requires --config");
  return load_run_config(g.config);
}

// --- state -----------------------------------------------------------------

struct StateArgs {
  double eta = 0.0;
  double icoh = 1.0;
  double ih = 0.5;
  std::string phi = "0";
};

int cmd_state(const StateArgs& a, const Globals& g, std::ostream& out) {
  const GeneralizedWernerParams p(a.eta, a.icoh, a.ih, parse_angle(a.phi, "--phi"));
  const DensityMatrix rho = build_state(p);
  std::ostringstream s;
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    s << "rho[" << rho.basis_labels()[r] << "]=";
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      const Complex z = rho(r, c);
      s << (c ? " " : "") << num(z.real()) << (z.imag() < 0.0 ? "-" : "+") << num(std::abs(z.imag())) << "i";
    }
    s << '\n';
  }
  const PptSpectrum closed = ppt_spectrum_closed(p);
  const auto numeric = ppt_spectrum_numeric(rho);
  s << "alpha_closed=" << num(closed.alpha1) << ',' << num(closed.alpha2) << ',' << num(closed.alpha3) << ','
    << num(closed.alpha4) << '\n';
  s << "alpha_numeric=" << num(numeric[0]) << ',' << num(numeric[1]) << ',' << num(numeric[2]) << ','
    << num(numeric[3]) << '\n';
  s << "alpha1=" << num(closed.alpha1) << '\n';
  s << "concurrence_closed=" << num(concurrence_closed(p)) << '\n';
  s << "concurrence_wootters=" << num(concurrence_wootters_numeric(rho)) << '\n';
  s << "verdict=" << to_string(classify_alpha1(closed.alpha1)) << '\n';
  emit(g, s.str(), out);
  return kOk;
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string param;
  std::string range;
  double eta = 1.0;
  double icoh = 1.0;
  double ih = 0.5;
};

int cmd_sweep(const SweepArgs& a, const Globals& g, std::ostream& out) {
  const auto first = a.range.find(':');
  const auto second = first == std::string::npos ? std::string::npos : a.range.find(':', first + 1);
  if (second == std::string::npos || a.range.find(':', second + 1) != std::string::npos) {
    throw ValidationError("--range must be lo:hi:n, got '" + a.range + "'");
  }
  const double lo = parse_real(std::string_view(a.range).substr(0, first), "--range lo");
  const double hi = parse_real(std::string_view(a.range).substr(first + 1, second - first - 1), "--range hi");
  const std::string_view n_text = std::string_view(a.range).substr(second + 1);
  int n = 0;
  const auto [ptr, ec] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
  if (ec != std::errc{} || ptr != n_text.data() + n_text.size() || n < 2) {
    throw ValidationError("--range point count must be an integer >= 2");
  }
  const SweepParameter param = a.param == "eta" ? SweepParameter::kEta
                               : a.param == "ih" ? SweepParameter::kIh
                                                 : SweepParameter::kIcoh;
  const GeneralizedWernerParams fixed(a.eta, a.icoh, a.ih);
  emit(g, sweep_csv(sweep(param, lo, hi, n, fixed)), out);
  return kOk;
}

// --- scan ------------------------------------------------------------------

struct ScanArgs {
  std::string pol = "H";
  std::string theta = "0";
  std::string delta = "auto";
  int points = 24;
  std::int64_t shots = 0;
  int block = 0;
  std::string plan_dir;
};

double auto_delta(const InterferometerConfig& c, Polarization pol) {
  switch (pol) {
    case Polarization::kH: return delta_star(c.phases, DeltaSetting::kH);
    case Polarization::kV: return delta_star(c.phases, DeltaSetting::kV);
    default: return delta_for_chi_prime(c.phases, std::numbers::pi / 4.0);
  }
}

int cmd_scan(const ScanArgs& a, const Globals& g, std::ostream& out) {
  InterferometerConfig config = require_config(g, "scan");
  if (!a.plan_dir.empty()) {
    ScanPlan plan;
    plan.n_points = a.points;
    plan.shots = a.shots;
    plan.seed = g.seed;
    const PlanData data = simulate_plan(config, plan);
    write_plan_dir(a.plan_dir, data);
    out << "wrote " << data.size() << " scans to " << a.plan_dir << '\n';
    return kOk;
  }
  const Polarization pol = parse_polarization(a.pol);
  config.theta = parse_angle(a.theta, "--theta");
  config.delta = a.delta == "auto" ? auto_delta(config, pol) : parse_angle(a.delta, "--delta");
  const PhaseScanRecord scan = simulate_scan(config, pol, a.points, a.shots, g.seed, a.block);
  emit(g, scan_csv_text(scan), out);
  return kOk;
}

// --- estimate --------------------------------------------------------------

struct EstimateArgs {
  std::string from_csv;
  int points = 24;
  std::int64_t shots = 0;
};

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::kEntangled: return kEntangled;
    case Verdict::kSeparable: return kSeparable;
    case Verdict::kBoundary: return kBoundary;
  }
  return kBoundary;
}

int cmd_estimate(const EstimateArgs& a, const Globals& g, std::ostream& out) {
  EstimationReport report;
  if (!a.from_csv.empty()) {
    std::optional<Transmissions> fallback;
    if (!g.config.empty()) {
      const InterferometerConfig c = load_run_config(g.config);
      fallback = Transmissions{c.t_h, c.t_v};
    }
    report = estimate_from_plan(read_plan_dir(a.from_csv), fallback);
  } else {
    const InterferometerConfig config = require_config(g, "estimate (without --from-csv)");
    ScanPlan plan;
    plan.n_points = a.points;
    plan.shots = a.shots;
    plan.seed = g.seed;
    report = run_pipeline(config, plan);
  }
  emit(g, format_report(report), out);
  return verdict_exit(report.verdict);
}

// --- tables / fig3 ---------------------------------------------------------

struct TablesArgs {
  std::string which;
  std::string chi_prime_minus_2delta = "pi/4";
  double t_h = 0.25;
  double t_v = 0.35;
  bool raw = false;
};

int cmd_tables(const TablesArgs& a, const Globals& g, std::ostream& out) {
  if (a.which == "1") {
    const double target = parse_angle(a.chi_prime_minus_2delta, "--chi-prime-minus-2delta");
    emit(g, visibility_table_csv(visibility_table(target), a.raw), out);
  } else {
    emit(g, lossy_table_csv(lossy_table(a.t_h, a.t_v), a.raw), out);
  }
  return kOk;
}

int cmd_fig3(const Globals& g, std::ostream& out) {
  emit(g, concurrence_pairs_csv(concurrence_pairs()), out);
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement verification from single-photon interference", "pathid"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Run configuration file (key=value)");
  app.add_option("--seed", g.seed, "Seed for sampled scans");
  app.add_option("--out", g.out, "Output file (default stdout)");

  StateArgs sa;
  auto* state = app.add_subcommand("state", "Print a generalized Werner state and its entanglement");
  state->add_option("--eta", sa.eta, "Mixing parameter")->required();
  state->add_option("--icoh", sa.icoh, "Coherence")->capture_default_str();
  state->add_option("--ih", sa.ih, "Weight of the HH component")->capture_default_str();
  state->add_option("--phi", sa.phi, "State phase (radians, pi expressions allowed)")->capture_default_str();

  SweepArgs wa;
  auto* sweep_cmd = app.add_subcommand("sweep", "alpha1 and concurrence along one parameter");
  sweep_cmd->add_option("--param", wa.param, "eta, ih or icoh")->required()->check(CLI::IsMember({"eta", "ih", "icoh"}));
  sweep_cmd->add_option("--range", wa.range, "lo:hi:n")->required();
  sweep_cmd->add_option("--eta", wa.eta, "Fixed eta")->capture_default_str();
  sweep_cmd->add_option("--icoh", wa.icoh, "Fixed coherence")->capture_default_str();
  sweep_cmd->add_option("--ih", wa.ih, "Fixed I_H")->capture_default_str();

  ScanArgs ca;
  auto* scan = app.add_subcommand("scan", "Simulate one phase scan, or a full plan with --plan-dir");
  scan->add_option("--pol", ca.pol, "H, V, D, A, R or L")->capture_default_str();
  scan->add_option("--theta", ca.theta, "Wave-plate angle theta")->capture_default_str();
  scan->add_option("--delta", ca.delta, "Wave-plate delta or 'auto'")->capture_default_str();
  scan->add_option("--points", ca.points, "Phases per scan")->capture_default_str()->check(CLI::Range(8, 1000000));
  scan->add_option("--shots", ca.shots, "Shots per phase (0: exact)")->capture_default_str()->check(CLI::NonNegativeNumber);
  scan->add_option("--block", ca.block, "Block the other source's signal beam (1 or 2)")
      ->check(CLI::IsMember({1, 2}));
  scan->add_option("--plan-dir", ca.plan_dir, "Write every scan of the estimation plan into this directory");

  EstimateArgs ea;
  auto* estimate = app.add_subcommand("estimate", "Run the estimation pipeline (exit 0 entangled, 1 separable, 3 boundary)");
  estimate->add_option("--from-csv", ea.from_csv, "Directory with the scan plan CSVs");
  estimate->add_option("--points", ea.points, "Phases per scan")->capture_default_str()->check(CLI::Range(8, 1000000));
  estimate->add_option("--shots", ea.shots, "Shots per phase (0: exact)")->capture_default_str()->check(CLI::NonNegativeNumber);

  TablesArgs ta;
  auto* tables = app.add_subcommand("tables", "Reference-state tables as CSV");
  tables->add_option("--which", ta.which, "1 (lossless visibilities) or s1 (with attenuator)")
      ->required()
      ->check(CLI::IsMember({"1", "s1"}));
  tables->add_option("--chi-prime-minus-2delta", ta.chi_prime_minus_2delta, "Setting of the D and R scans")->capture_default_str();
  tables->add_option("--t-h", ta.t_h, "Attenuator T_H for s1")->capture_default_str();
  tables->add_option("--t-v", ta.t_v, "Attenuator T_V for s1")->capture_default_str();
  tables->add_flag("--raw", ta.raw, "Print unrounded values");

  auto* fig3 = app.add_subcommand("fig3", "Concurrence from parameters vs from visibilities");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (state->parsed()) return cmd_state(sa, g, out);
    if (sweep_cmd->parsed()) return cmd_sweep(wa, g, out);
    if (scan->parsed()) return cmd_scan(ca, g, out);
    if (estimate->parsed()) return cmd_estimate(ea, g, out);
    if (tables->parsed()) return cmd_tables(ta, g, out);
    if (fig3->parsed()) return cmd_fig3(g, out);
  } catch (const IncompletePlanError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace pathid::cli
