#pragma once

// Delimited tables, summary documents and SVG orbit plots. Tables are
// comma-separated with a header row and 17 significant digits.

#include <cstddef>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "hdyn/conjugation.hpp"
#include "hdyn/diagnostics.hpp"
#include "hdyn/dynamics.hpp"

namespace hdyn {

/// 17 significant digits, '.' decimal point.
std::string format_number(double x);

/// n, re, im, w1_re, w1_im, ...  (re, im: first coordinate)
std::string orbit_csv(const Orbit& orbit);
/// n, s_n
std::string steps_csv(const StepSeries& steps);
/// n, koranyi_q, special_ratio, nt_q, stolz_q, tangency_angle, radial_q_re, radial_q_im
/// for n = 0 .. length - 2; radial_q is (1 - <Z_{n+1}, X>) / (1 - <Z_n, X>).
std::string approach_csv(const Orbit& orbit, const BoundaryPoint& X);
/// n, re, im, psi_re, psi_im, psi_f_re, psi_f_im, residual  (one row per checkpoint and grid point)
std::string conjugation_csv(const ConjugationResult& r);
/// label, group, skipped, type, special, restricted, koranyi, nontangential, verdict,
/// final_step, radial_q_re, radial_q_im, radial_tail_dev, arg_margin, pass, note
std::string harness_csv(const HarnessReport& r);
/// start, re, im, verdict, d_inf
std::string probe_csv(const ProbeReport& r);

nlohmann::json classification_to_json(const ClassificationReport& r);
nlohmann::json steps_summary_json(const StepSeries& s);
nlohmann::json approach_summary_json(const ApproachReport& r);
nlohmann::json conjugation_to_json(const ConjugationResult& r);
nlohmann::json harness_summary_json(const HarnessReport& r);
nlohmann::json probe_to_json(const ProbeReport& r);
/// Table rows as an array of objects keyed by the header names.
nlohmann::json csv_to_json(std::string_view csv);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

struct PlotOptions {
  /// Ball coordinate shown in the unit-disk cross-section.
  std::size_t coordinate = 0;
  double size = 480.0;
  double marker_radius = 0.012;
  /// Markers in the last tail_fraction of the orbit are highlighted.
  double tail_fraction = 0.1;
  /// Upper bound on drawn markers; the start and the final point are always drawn.
  std::size_t max_markers = 200;
};

/// Cross-section coordinate of every orbit point in ball coordinates.
std::vector<cplx> plot_points(const Orbit& orbit, std::size_t coordinate = 0);

/// Unit circle, orbit polyline, markers and the boundary point (1, 0).
/// A single-point orbit yields the circle and the start marker only.
std::string plot_svg(const Orbit& orbit, const PlotOptions& opts = {});

}  // namespace hdyn
