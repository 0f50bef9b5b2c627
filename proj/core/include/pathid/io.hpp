#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "pathid/pipeline.hpp"

namespace pathid {

inline constexpr std::string_view kScanCsvHeader = "polarization,theta_rad,delta_rad,phi_in_rad,probability,counts,shots";

/// 17 significant digits, '.' decimal point, independent of the locale.
std::string format_real(double value);

/// Shortest text that parses back to the same double.
std::string format_real_shortest(double value);

/// Parses a plain decimal. Throws ValidationError mentioning `what`.
double parse_real(std::string_view text, std::string_view what);

/// Parses a decimal or a multiple of pi: "0.3", "pi", "-pi/4", "3pi/8",
/// "3*pi/8", "0.5*pi". Throws ValidationError mentioning `what`.
double parse_angle(std::string_view text, std::string_view what);

void write_scan_csv(std::ostream& out, const PhaseScanRecord& scan);
std::string scan_csv_text(const PhaseScanRecord& scan);
/// Accepts LF or CRLF. Throws ValidationError with the line number.
PhaseScanRecord read_scan_csv(std::istream& in);

/// One CSV per slot, named "<slot>.csv".
void write_plan_dir(const std::filesystem::path& dir, const PlanData& data);
/// Loads whichever slot files exist; completeness is checked by the estimator.
PlanData read_plan_dir(const std::filesystem::path& dir);

/// key=value lines: b1b2, eta, coh_product, alpha1, verdict, concurrence,
/// i_h, i_coh, t_h, t_v, then sigma_alpha1, sigma_concurrence, inputs_digest.
std::string format_report(const EstimationReport& report);

/// Parses a run configuration of key=value lines ('#' starts a comment).
/// Throws ValidationError naming the offending key.
InterferometerConfig parse_run_config(std::istream& in);
InterferometerConfig load_run_config(const std::filesystem::path& path);

}  // namespace pathid
