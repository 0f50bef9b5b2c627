#include "pathid/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "pathid/errors.hpp"

namespace pathid {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::int64_t parse_count(std::string_view text, std::string_view what) {
  text = trim(text);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::string line_error(std::size_t line, const std::string& message) {
  return "scan CSV line " + std::to_string(line) + ": " + message;
}

std::string optional_real(const std::optional<double>& v) {
  return v ? format_real_shortest(*v) : std::string("NA");
}

}  // namespace

std::string format_real(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string format_real_shortest(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of negative zero
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

double parse_real(std::string_view text, std::string_view what) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ValidationError("invalid value for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

double parse_angle(std::string_view text, std::string_view what) {
  const std::string_view t = trim(text);
  const auto pi_pos = t.find("pi");
  if (pi_pos == std::string_view::npos) return parse_real(t, what);

  auto fail = [&]() -> double {
    throw ValidationError("invalid value for " + std::string(what) + ": '" + std::string(t) + "'");
  };
  std::string_view coeff = trim(t.substr(0, pi_pos));
  std::string_view rest = trim(t.substr(pi_pos + 2));
  if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
  double factor = 1.0;
  if (coeff == "-") {
    factor = -1.0;
  } else if (coeff == "+" || coeff.empty()) {
    factor = 1.0;
  } else {
    factor = parse_real(coeff, what);
  }
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') return fail();
    divisor = parse_real(rest.substr(1), what);
    if (divisor == 0.0) return fail();
  }
  return factor * std::numbers::pi / divisor;
}

void write_scan_csv(std::ostream& out, const PhaseScanRecord& scan) {
  out << kScanCsvHeader << '\n';
  const std::string pol(to_string(scan.polarization));
  const std::string theta = format_real(scan.theta);
  const std::string delta = format_real(scan.delta);
  for (const ScanSample& s : scan.samples) {
    out << pol << ',' << theta << ',' << delta << ',' << format_real(s.phi_in) << ',';
    if (scan.mode == ScanMode::kExact) {
      out << format_real(s.probability) << ",,";
    } else {
      out << ',' << s.counts << ',' << s.shots;
    }
    out << '\n';
  }
}

std::string scan_csv_text(const PhaseScanRecord& scan) {
  std::ostringstream out;
  write_scan_csv(out, scan);
  return out.str();
}

PhaseScanRecord read_scan_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool first = true;
  PhaseScanRecord out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!header_seen) {
      if (trim(line) != kScanCsvHeader) throw ValidationError(line_error(line_no, "missing or wrong header"));
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 7) throw ValidationError(line_error(line_no, "expected 7 fields"));
    try {
      const Polarization pol = parse_polarization(trim(fields[0]));
      const double theta = parse_real(fields[1], "theta_rad");
      const double delta = parse_real(fields[2], "delta_rad");
      ScanSample s;
      s.phi_in = parse_real(fields[3], "phi_in_rad");
      const bool has_prob = !trim(fields[4]).empty();
      const bool has_counts = !trim(fields[5]).empty() || !trim(fields[6]).empty();
      if (has_prob == has_counts) {
        throw ValidationError("exactly one of probability or counts/shots must be given");
      }
      const ScanMode mode = has_prob ? ScanMode::kExact : ScanMode::kSampled;
      if (has_prob) {
        s.probability = parse_real(fields[4], "probability");
      } else {
        s.counts = parse_count(fields[5], "counts");
        s.shots = parse_count(fields[6], "shots");
      }
      if (first) {
        out.polarization = pol;
        out.theta = theta;
        out.delta = delta;
        out.mode = mode;
        first = false;
      } else if (pol != out.polarization || theta != out.theta || delta != out.delta || mode != out.mode) {
        throw ValidationError("setting or mode changes within one scan");
      }
      out.samples.push_back(s);
    } catch (const ValidationError& e) {
      throw ValidationError(line_error(line_no, e.what()));
    }
  }
  if (!header_seen) throw ValidationError("scan CSV is empty");
  out.validate();
  return out;
}

void write_plan_dir(const std::filesystem::path& dir, const PlanData& data) {
  std::filesystem::create_directories(dir);
  for (const auto& [slot, record] : data) {
    const auto path = dir / (std::string(slot_name(slot)) + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    write_scan_csv(out, record);
    if (!out) throw ValidationError("cannot write " + path.string());
  }
}

PlanData read_plan_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ValidationError("not a directory: " + dir.string());
  PlanData out;
  for (ScanSlot slot : kAllScanSlots) {
    const auto path = dir / (std::string(slot_name(slot)) + ".csv");
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path.string());
    try {
      out.emplace(slot, read_scan_csv(in));
    } catch (const ValidationError& e) {
      throw ValidationError(path.filename().string() + ": " + e.what());
    }
  }
  return out;
}

std::string format_report(const EstimationReport& r) {
  std::ostringstream out;
  out << "b1b2=" << format_real_shortest(r.b1b2) << '\n'
      << "eta=" << format_real_shortest(r.eta) << '\n'
      << "coh_product=" << format_real_shortest(r.coh_product) << '\n'
      << "alpha1=" << format_real_shortest(r.alpha1) << '\n'
      << "verdict=" << to_string(r.verdict) << '\n'
      << "concurrence=" << format_real_shortest(r.concurrence) << '\n'
      << "i_h=" << optional_real(r.i_h) << '\n'
      << "i_coh=" << optional_real(r.i_coh) << '\n'
      << "t_h=" << optional_real(r.t_h) << '\n'
      << "t_v=" << optional_real(r.t_v) << '\n'
      << "sigma_alpha1=" << format_real_shortest(r.sigma_alpha1) << '\n'
      << "sigma_concurrence=" << format_real_shortest(r.sigma_concurrence) << '\n'
      << "inputs_digest=" << r.inputs_digest << '\n';
  return out.str();
}

InterferometerConfig parse_run_config(std::istream& in) {
  static const std::array<std::string_view, 18> known{
      "eta",    "icoh",   "ih",     "phi",    "b1_mag", "b2_mag",    "arg_b1",    "arg_b2", "phi_i",
      "phi_s",  "phi_hh", "phi_vh", "phi_hv", "phi_vv", "phi_hh_vv", "phi_vv_hh", "t_h",    "t_v"};
  std::map<std::string, double, std::less<>> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(trim(view.substr(0, eq)));
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ValidationError("unknown config key '" + key + "'");
    }
    if (values.count(key)) throw ValidationError("duplicate config key '" + key + "'");
    values[key] = parse_angle(view.substr(eq + 1), key);
  }

  auto get = [&](std::string_view key, double fallback) {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  };
  if (!values.count("eta")) throw ValidationError("config key 'eta' is required");
  const double eta = values.at("eta");
  if (eta != 0.0) {
    if (!values.count("icoh")) throw ValidationError("config key 'icoh' is required when eta > 0");
    if (!values.count("ih")) throw ValidationError("config key 'ih' is required when eta > 0");
  }

  InterferometerConfig c;
  c.state = GeneralizedWernerParams(eta, get("icoh", 0.0), get("ih", 0.5), get("phi", 0.0));
  const bool has_b1 = values.count("b1_mag") > 0;
  const bool has_b2 = values.count("b2_mag") > 0;
  if (has_b1) c.b1_mag = values.at("b1_mag");
  if (has_b2) c.b2_mag = values.at("b2_mag");
  if (has_b1 && !has_b2) c.b2_mag = std::sqrt(std::max(0.0, 1.0 - c.b1_mag * c.b1_mag));
  if (has_b2 && !has_b1) c.b1_mag = std::sqrt(std::max(0.0, 1.0 - c.b2_mag * c.b2_mag));
  c.arg_b1 = get("arg_b1", 0.0);
  c.arg_b2 = get("arg_b2", 0.0);
  c.phi_i = get("phi_i", 0.0);
  c.phi_s = get("phi_s", 0.0);
  c.phases.phi_hh = get("phi_hh", 0.0);
  c.phases.phi_vh = get("phi_vh", 0.0);
  c.phases.phi_hv = get("phi_hv", 0.0);
  c.phases.phi_vv = get("phi_vv", 0.0);
  c.phases.phi_hh_vv = get("phi_hh_vv", 0.0);
  c.phases.phi_vv_hh = get("phi_vv_hh", 0.0);
  c.t_h = get("t_h", 1.0);
  c.t_v = get("t_v", 1.0);
  c.validate();
  return c;
}

InterferometerConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  return parse_run_config(in);
}

}  // namespace pathid
