#include "hdyn/export.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <system_error>

#include "hdyn/errors.hpp"
#include "hdyn/serialize.hpp"

namespace hdyn {

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

json cell_value(const std::string& s) {
  if (s.empty()) return nullptr;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() + s.size()) return v;
  return s;
}

json boundary_to_json(const BoundaryPoint& X, std::size_t dim) {
  json j;
  j["infinity"] = X.is_infinity();
  j["ball"] = json::array();
  for (cplx c : X.ball_vector(dim)) j["ball"].push_back(complex_to_json(c));
  return j;
}

// Fixed-point coordinate for the SVG; -0 is printed as 0.
std::string svg_num(double x) {
  std::string s = fmt::format("{:.6f}", x);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

}  // namespace

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

std::string orbit_csv(const Orbit& orbit) {
  std::string out = "n,re,im";
  const std::size_t dim = orbit.points.empty() ? 1 : dim_of(orbit.points.front());
  for (std::size_t k = 1; k < dim; ++k) out += fmt::format(",w{}_re,w{}_im", k, k);
  out += '\n';
  for (std::size_t n = 0; n < orbit.length(); ++n) {
    out += std::to_string(n);
    for (cplx c : coords_of(orbit.points[n])) out += "," + format_number(c.real()) + "," + format_number(c.imag());
    out += '\n';
  }
  return out;
}

std::string steps_csv(const StepSeries& steps) {
  std::string out = "n,s_n\n";
  for (std::size_t n = 0; n < steps.s.size(); ++n) out += fmt::format("{},{}\n", n, format_number(steps.s[n]));
  return out;
}

std::string approach_csv(const Orbit& orbit, const BoundaryPoint& X) {
  std::string out = "n,koranyi_q,special_ratio,nt_q,stolz_q,tangency_angle,radial_q_re,radial_q_im\n";
  const std::vector<cplx> radial = radial_quotient_series(orbit, X);
  for (std::size_t n = 0; n < radial.size(); ++n) {
    const ApproachSample s = approach_sample(orbit.points[n], X);
    out += fmt::format("{},{},{},{},{},{},{},{}\n", n, format_number(koranyi_quotient(s)),
                       format_number(special_ratio(s)), format_number(projection_nt_quotient(s)),
                       format_number(stolz_quotient(s)), format_number(tangency_angle(s)),
                       format_number(radial[n].real()), format_number(radial[n].imag()));
  }
  return out;
}

std::string conjugation_csv(const ConjugationResult& r) {
  std::string out = "n,re,im,psi_re,psi_im,psi_f_re,psi_f_im,residual\n";
  for (std::size_t k = 0; k < r.checkpoints.size(); ++k) {
    const cplx shift = r.kind == ConjugationKind::pommerenke ? r.translation_estimates[k] : cplx{1.0, 0.0};
    for (std::size_t j = 0; j < r.grid.size(); ++j) {
      const cplx g = r.grid[j], p = r.psi[k][j], pf = r.psi_f[k][j];
      out += fmt::format("{},{},{},{},{},{},{},{}\n", r.checkpoints[k], format_number(g.real()),
                         format_number(g.imag()), format_number(p.real()), format_number(p.imag()),
                         format_number(pf.real()), format_number(pf.imag()), format_number(std::abs(pf - p - shift)));
    }
  }
  return out;
}

std::string harness_csv(const HarnessReport& r) {
  std::string out =
      "label,group,skipped,type,special,restricted,koranyi,nontangential,verdict,final_step,radial_q_re,"
      "radial_q_im,radial_tail_dev,arg_margin,pass,note\n";
  for (const HarnessRow& row : r.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(row.input.label),
                       csv_field(row.input.group), int(row.skipped), to_string(row.type), int(row.flags.is_special),
                       int(row.flags.is_restricted), int(row.flags.in_koranyi), int(row.flags.is_nontangential),
                       to_string(row.verdict), format_number(row.final_step), format_number(row.radial_final.real()),
                       format_number(row.radial_final.imag()), format_number(row.radial_tail_dev),
                       format_number(row.arg_margin), int(row.pass), csv_field(row.note));
  }
  return out;
}

std::string probe_csv(const ProbeReport& r) {
  std::string out = "start,re,im,verdict,d_inf\n";
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const cplx z = coords_of(r.rows[k].start).front();
    out += fmt::format("{},{},{},{},{}\n", k, format_number(z.real()), format_number(z.imag()),
                       to_string(r.rows[k].verdict), format_number(r.rows[k].d_inf_estimate));
  }
  return out;
}

json classification_to_json(const ClassificationReport& r) {
  json j;
  j["type"] = to_string(r.type);
  j["dw_location"] = r.dw_location ? json(to_string(*r.dw_location)) : json(nullptr);
  j["dw_interior"] = r.dw_interior ? point_to_json(*r.dw_interior) : json(nullptr);
  j["dw_boundary"] = r.dw_boundary ? boundary_to_json(*r.dw_boundary, std::max<std::size_t>(1, r.dw_ball.size()))
                                   : json(nullptr);
  if (r.multiplier) {
    j["multiplier"] = {{"c", r.multiplier->c},
                       {"raw_min", r.multiplier->raw_min},
                       {"clipped", r.multiplier->clipped},
                       {"samples", r.multiplier->samples}};
  } else {
    j["multiplier"] = nullptr;
  }
  j["notes"] = r.notes;
  return j;
}

json steps_summary_json(const StepSeries& s) {
  return {{"length", s.s.size()},
          {"verdict", to_string(s.verdict)},
          {"d_inf_estimate", s.d_inf_estimate},
          {"final_step", s.s.empty() ? 0.0 : s.s.back()},
          {"monotone", s.monotone},
          {"max_increase", s.max_increase},
          {"evidence",
           {{"tail_window", s.evidence.tail_window},
            {"first_half_mean", s.evidence.first_half_mean},
            {"second_half_mean", s.evidence.second_half_mean},
            {"decrease_rate", s.evidence.decrease_rate}}}};
}

json approach_summary_json(const ApproachReport& r) {
  json j{{"tail_start", r.tail_start},
         {"koranyi_sup_tail", r.koranyi_sup_tail},
         {"special_mean_tail", r.special_mean_tail},
         {"nt_sup_tail", r.nt_sup_tail},
         {"stolz_sup_tail", r.stolz_sup_tail},
         {"arg_margin", r.arg_margin},
         {"flags",
          {{"is_special", r.flags.is_special},
           {"is_restricted", r.flags.is_restricted},
           {"in_koranyi", r.flags.in_koranyi},
           {"is_nontangential", r.flags.is_nontangential}}}};
  j["koranyi_amplitude"] = r.koranyi_amplitude ? json(*r.koranyi_amplitude) : json(nullptr);
  const LemmaCheck c = lemma_check(r.flags);
  j["lemmas"] = {{"nontangential_implies_restricted", c.nontangential_implies_restricted},
                 {"special_koranyi_implies_restricted", c.special_koranyi_implies_restricted},
                 {"special_restricted_implies_koranyi", c.special_restricted_implies_koranyi},
                 {"ok", c.ok()}};
  return j;
}

json conjugation_to_json(const ConjugationResult& r) {
  json j{{"kind", to_string(r.kind)}, {"basepoint", complex_to_json(r.basepoint)}, {"checkpoints", r.checkpoints}};
  if (r.kind == ConjugationKind::pommerenke) {
    j["b_estimate"] = r.b_estimate;
    j["phi_residual_series"] = r.phi_residual_series;
  }
  j["residual_series"] = r.residual_series;
  j["deltas"] = r.deltas;
  j["translation_estimates"] = json::array();
  for (cplx t : r.translation_estimates) j["translation_estimates"].push_back(complex_to_json(t));
  return j;
}

json harness_summary_json(const HarnessReport& r) {
  return {{"rows", r.rows.size()},       {"passed", r.passed},
          {"failed", r.failed},          {"skipped", r.skipped},
          {"violations", r.violations},  {"lemma_violations", r.lemma_violations},
          {"ok", r.ok()}};
}

json probe_to_json(const ProbeReport& r) {
  json rows = json::array();
  for (const ProbeRow& row : r.rows) {
    rows.push_back({{"start", point_to_json(row.start)},
                    {"verdict", to_string(row.verdict)},
                    {"d_inf_estimate", row.d_inf_estimate}});
  }
  return {{"verdict", to_string(r.verdict)}, {"rows", rows}, {"notes", r.notes}};
}

json csv_to_json(std::string_view csv) {
  json rows = json::array();
  std::vector<std::string> header;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    const std::vector<std::string> cells = split_csv_line(csv.substr(pos, end - pos));
    pos = end + 1;
    if (header.empty()) {
      header = cells;
      continue;
    }
    json row = json::object();
    for (std::size_t k = 0; k < header.size() && k < cells.size(); ++k) row[header[k]] = cell_value(cells[k]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.flush()) throw ConfigError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::vector<cplx> plot_points(const Orbit& orbit, std::size_t coordinate) {
  std::vector<cplx> out;
  out.reserve(orbit.length());
  for (const Point& p : orbit.points) {
    const CVector c = ball_coords(p);
    if (coordinate >= c.size()) {
      throw ConfigError(fmt::format("plot coordinate {} exceeds the dimension {}", coordinate, c.size()));
    }
    out.push_back(c[coordinate]);
  }
  return out;
}

std::string plot_svg(const Orbit& orbit, const PlotOptions& opts) {
  const std::vector<cplx> pts = plot_points(orbit, opts.coordinate);
  const double r = opts.marker_radius;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"-1.1 -1.1 2.2 2.2\">\n",
      svg_num(opts.size), svg_num(opts.size));
  out += "<g transform=\"scale(1,-1)\">\n";
  out += "<circle class=\"boundary\" cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" stroke-width=\"0.004\"/>\n";
  const auto marker = [&](const char* cls, cplx z, const char* fill, double radius) {
    out += fmt::format("<circle class=\"{}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n", cls, svg_num(z.real()),
                       svg_num(z.imag()), svg_num(radius), fill);
  };
  if (pts.size() > 1) {
    out += "<polyline class=\"orbit\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"0.003\" points=\"";
    for (std::size_t n = 0; n < pts.size(); ++n) {
      if (n > 0) out += ' ';
      out += svg_num(pts[n].real()) + "," + svg_num(pts[n].imag());
    }
    out += "\"/>\n";
    const std::size_t last = pts.size() - 1;
    const std::size_t stride = std::max<std::size_t>(1, (pts.size() + opts.max_markers - 1) / std::max<std::size_t>(1, opts.max_markers));
    const std::size_t tail_from =
        pts.size() - static_cast<std::size_t>(std::floor(opts.tail_fraction * static_cast<double>(pts.size())));
    for (std::size_t n = stride; n < last; n += stride) {
      marker(n >= tail_from ? "marker tail" : "marker", pts[n], n >= tail_from ? "darkorange" : "steelblue", r);
    }
    marker("final", pts[last], "darkorange", 1.5 * r);
    marker("dw", {1.0, 0.0}, "crimson", 2.0 * r);
  }
  if (!pts.empty()) marker("start", pts.front(), "seagreen", 1.5 * r);
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace hdyn
