#include "hdyn/serialize.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

#include "hdyn/errors.hpp"

namespace hdyn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void only_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", where));
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
  }
}

const json& require(const json& j, const char* key, std::string_view where) {
  if (!j.contains(key)) throw ConfigError(fmt::format("{}: missing key '{}'", where, key));
  return j.at(key);
}

double number(const json& j, std::string_view what) {
  if (!j.is_number()) throw ConfigError(fmt::format("{}: expected a number", what));
  return j.get<double>();
}

std::size_t count(const json& j, std::string_view what) {
  if (!j.is_number_unsigned()) throw ConfigError(fmt::format("{}: expected a non-negative integer", what));
  return j.get<std::size_t>();
}

// Reads j[key] into out when present.
template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if constexpr (std::is_same_v<T, double>) {
    out = number(v, key);
  } else if constexpr (std::is_same_v<T, std::size_t>) {
    out = count(v, key);
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    out = count(v, key);
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ConfigError(fmt::format("{}: expected a string", key));
    out = v.get<std::string>();
  }
}

json cvector_to_json(std::span<const cplx> v) {
  json a = json::array();
  for (cplx c : v) a.push_back(complex_to_json(c));
  return a;
}

CVector cvector_from_json(const json& j, std::string_view what) {
  if (!j.is_array()) throw ConfigError(fmt::format("{}: expected an array of complex numbers", what));
  CVector v;
  for (const json& c : j) v.push_back(complex_from_json(c));
  return v;
}

void check_positive(double v, std::string_view name) {
  if (!(v > 0.0)) throw ConfigError(fmt::format("{} must be positive, got {}", name, v));
}

void check_fraction(double v, std::string_view name) {
  if (!(v > 0.0 && v <= 1.0)) throw ConfigError(fmt::format("{} must lie in (0, 1], got {}", name, v));
}

json harness_case_to_json(const HarnessCase& c) {
  return {{"label", c.label}, {"group", c.group}, {"map", map_spec_to_json(c.spec)}, {"start", point_to_json(c.start)}};
}

HarnessCase harness_case_from_json(const json& j) {
  only_keys(j, "harness case", {"label", "group", "map", "start"});
  MapSpec spec = map_spec_from_json(require(j, "map", "harness case"));
  const Model m = spec.model();
  HarnessCase c{"", "custom", std::move(spec), point_from_json(require(j, "start", "harness case"), m)};
  read(j, "label", c.label);
  read(j, "group", c.group);
  return c;
}

}  // namespace

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("expected a complex number [re, im] or a real number, got " + j.dump());
}

json map_spec_to_json(const MapSpec& spec) {
  return std::visit(
      overloaded{
          [](const DiskMoebius& f) -> json {
            return {{"family", "disk_moebius"}, {"a", complex_to_json(f.a)}, {"theta", f.theta}};
          },
          [](const HalfplaneAffine& f) -> json {
            return {{"family", "halfplane_affine"}, {"lambda", f.lambda}, {"b", complex_to_json(f.b)}};
          },
          [](const HalfplanePerturbed& f) -> json {
            return {{"family", "halfplane_perturbed"}, {"b", complex_to_json(f.b)}, {"c", complex_to_json(f.c)}};
          },
          [](const SiegelTranslation& f) -> json {
            return {{"family", "siegel_translation"}, {"b", complex_to_json(f.b)}};
          },
          [](const HeisenbergTranslation& f) -> json {
            return {{"family", "heisenberg_translation"}, {"a", cvector_to_json(f.a)}, {"b", f.b}};
          },
          [](const Composition& f) -> json {
            json maps = json::array();
            for (const MapSpec& m : f.maps) maps.push_back(map_spec_to_json(m));
            return {{"family", "composition"}, {"maps", maps}};
          },
          [](const Conjugated& f) -> json {
            return {{"family", "conjugated"}, {"by", to_string(f.by)}, {"inner", map_spec_to_json(*f.inner)}};
          },
      },
      spec.family());
}

MapSpec map_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("map: expected an object");
  const json& fam = require(j, "family", "map");
  if (!fam.is_string()) throw ConfigError("map: family must be a string");
  const std::string family = fam.get<std::string>();
  const std::string where = "map " + family;
  if (family == "disk_moebius") {
    only_keys(j, where, {"family", "a", "theta"});
    return MapSpec::disk_moebius(complex_from_json(require(j, "a", where)), number(require(j, "theta", where), "theta"));
  }
  if (family == "halfplane_affine") {
    only_keys(j, where, {"family", "lambda", "b"});
    return MapSpec::halfplane_affine(number(require(j, "lambda", where), "lambda"),
                                     complex_from_json(require(j, "b", where)));
  }
  if (family == "halfplane_perturbed") {
    only_keys(j, where, {"family", "b", "c"});
    return MapSpec::halfplane_perturbed(complex_from_json(require(j, "b", where)),
                                        complex_from_json(require(j, "c", where)));
  }
  if (family == "siegel_translation") {
    only_keys(j, where, {"family", "b"});
    return MapSpec::siegel_translation(complex_from_json(require(j, "b", where)));
  }
  if (family == "heisenberg_translation") {
    only_keys(j, where, {"family", "a", "b"});
    return MapSpec::heisenberg_translation(cvector_from_json(require(j, "a", where), "a"),
                                           number(require(j, "b", where), "b"));
  }
  if (family == "composition") {
    only_keys(j, where, {"family", "maps"});
    const json& maps = require(j, "maps", where);
    if (!maps.is_array()) throw ConfigError("composition: maps must be an array");
    std::vector<MapSpec> parts;
    for (const json& m : maps) parts.push_back(map_spec_from_json(m));
    return MapSpec::composition(std::move(parts));
  }
  if (family == "conjugated") {
    only_keys(j, where, {"family", "by", "inner"});
    const json& by = require(j, "by", where);
    if (!by.is_string()) throw ConfigError("conjugated: by must be a string");
    return MapSpec::conjugated(map_spec_from_json(require(j, "inner", where)),
                               cayley_tag_from_string(by.get<std::string>()));
  }
  throw ConfigError("unknown map family '" + family + "'");
}

json point_to_json(const Point& p) {
  return {{"model", to_string(model_of(p))}, {"coords", cvector_to_json(coords_of(p))}};
}

Point point_from_json(const json& j, std::optional<Model> model) {
  only_keys(j, "point", {"model", "coords"});
  Model m;
  if (j.contains("model")) {
    if (!j["model"].is_string()) throw ConfigError("point: model must be a string");
    m = model_from_string(j["model"].get<std::string>());
    if (model && *model != m) {
      throw ConfigError(fmt::format("point model {} does not match the map model {}", to_string(m), to_string(*model)));
    }
  } else if (model) {
    m = *model;
  } else {
    throw ConfigError("point: missing key 'model'");
  }
  const CVector coords = cvector_from_json(require(j, "coords", "point"), "coords");
  try {
    return point_from_coords(m, coords);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("point: ") + e.what());
  }
}

void ExperimentConfig::validate() const {
  check_positive(stop.magnitude_cap, "stop.magnitude_cap");
  check_positive(stop.gap_floor, "stop.gap_floor");
  check_positive(stop.fixed_point_step, "stop.fixed_point_step");
  check_positive(step.tol_step, "step.tol_step");
  check_fraction(step.tail_fraction, "step.tail_fraction");
  check_fraction(step.min_decrease, "step.min_decrease");
  check_positive(step.plateau_factor, "step.plateau_factor");
  check_positive(step.plateau_change, "step.plateau_change");
  check_positive(step.monotone_slack, "step.monotone_slack");
  check_positive(classify.tol_dw, "classify.tol_dw");
  check_positive(classify.tol_c, "classify.tol_c");
  check_fraction(classify.multiplier_tail, "classify.multiplier_tail");
  check_fraction(approach.tail_fraction, "approach.tail_fraction");
  check_positive(approach.tol_ratio, "approach.tol_ratio");
  check_positive(approach.m_cap, "approach.m_cap");
  check_positive(radial_tol, "harness.radial_tol");
  check_positive(arg_eps, "harness.arg_eps");
  check_positive(plot.size, "plot.size");
  check_positive(plot.marker_radius, "plot.marker_radius");
  check_fraction(plot.tail_fraction, "plot.tail_fraction");
  if (dim == 0) throw ConfigError("dim must be positive");
  if (map) {
    const Model m = map->model();
    for (const Point& p : starts) {
      if (model_of(p) != m) throw ConfigError("a start does not belong to the model of the map");
    }
  }
}

Model ExperimentConfig::model() const {
  if (!map) throw ConfigError("the configuration has no map");
  return map->model();
}

std::size_t ExperimentConfig::effective_dim() const {
  if (map) {
    if (auto d = dimension(*map)) return *d;
    if (map->model() == Model::disk || map->model() == Model::halfplane) return 1;
  }
  return dim;
}

ClassifyBudget ExperimentConfig::classify_budget() const {
  ClassifyBudget b = classify;
  b.stop = stop;
  return b;
}

HarnessBudget ExperimentConfig::harness_budget() const {
  HarnessBudget b;
  b.n_max = n_max;
  b.step = step;
  b.approach = approach;
  b.classify = classify_budget();
  b.radial_tol = radial_tol;
  b.arg_eps = arg_eps;
  return b;
}

ConjugationOptions ExperimentConfig::conjugation_options() const {
  ConjugationOptions o = conjugation;
  o.precondition = classify_budget();
  return o;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["map"] = c.map ? map_spec_to_json(*c.map) : json(nullptr);
  j["dim"] = c.dim;
  j["starts"] = json::array();
  for (const Point& p : c.starts) j["starts"].push_back(point_to_json(p));
  j["n_max"] = c.n_max;
  j["seed"] = c.seed;
  j["stop"] = {{"magnitude_cap", c.stop.magnitude_cap},
               {"gap_floor", c.stop.gap_floor},
               {"fixed_point_step", c.stop.fixed_point_step}};
  j["step"] = {{"tol_step", c.step.tol_step},
               {"tail_fraction", c.step.tail_fraction},
               {"min_decrease", c.step.min_decrease},
               {"plateau_factor", c.step.plateau_factor},
               {"plateau_change", c.step.plateau_change},
               {"monotone_slack", c.step.monotone_slack}};
  j["classify"] = {{"n_max", c.classify.n_max},
                   {"tol_dw", c.classify.tol_dw},
                   {"tol_c", c.classify.tol_c},
                   {"multiplier_tail", c.classify.multiplier_tail}};
  j["approach"] = {
      {"tail_fraction", c.approach.tail_fraction}, {"tol_ratio", c.approach.tol_ratio}, {"m_cap", c.approach.m_cap}};
  json cases = json::array();
  for (const HarnessCase& hc : c.harness_cases) cases.push_back(harness_case_to_json(hc));
  j["harness"] = {{"radial_tol", c.radial_tol}, {"arg_eps", c.arg_eps}, {"cases", cases}};
  j["conjugation"] = {{"kind", to_string(c.conjugation_kind)},
                      {"grid", cvector_to_json(c.conjugation.grid)},
                      {"checkpoints", c.conjugation.checkpoints},
                      {"basepoint", complex_to_json(c.conjugation.basepoint)}};
  j["plot"] = {{"coordinate", c.plot.coordinate},
               {"size", c.plot.size},
               {"marker_radius", c.plot.marker_radius},
               {"tail_fraction", c.plot.tail_fraction},
               {"max_markers", c.plot.max_markers}};
  j["output"] = {{"dir", c.output_dir}};
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  only_keys(j, "config", {"map", "dim", "starts", "n_max", "seed", "stop", "step", "classify", "approach", "harness",
                          "conjugation", "plot", "output"});
  ExperimentConfig c;
  if (j.contains("map") && !j["map"].is_null()) c.map = map_spec_from_json(j["map"]);
  read(j, "dim", c.dim);
  read(j, "n_max", c.n_max);
  read(j, "seed", c.seed);
  if (j.contains("starts")) {
    if (!j["starts"].is_array()) throw ConfigError("starts must be an array");
    std::optional<Model> m;
    if (c.map) m = c.map->model();
    for (const json& p : j["starts"]) c.starts.push_back(point_from_json(p, m));
  }
  if (j.contains("stop")) {
    const json& s = j["stop"];
    only_keys(s, "stop", {"magnitude_cap", "gap_floor", "fixed_point_step"});
    read(s, "magnitude_cap", c.stop.magnitude_cap);
    read(s, "gap_floor", c.stop.gap_floor);
    read(s, "fixed_point_step", c.stop.fixed_point_step);
  }
  if (j.contains("step")) {
    const json& s = j["step"];
    only_keys(s, "step",
              {"tol_step", "tail_fraction", "min_decrease", "plateau_factor", "plateau_change", "monotone_slack"});
    read(s, "tol_step", c.step.tol_step);
    read(s, "tail_fraction", c.step.tail_fraction);
    read(s, "min_decrease", c.step.min_decrease);
    read(s, "plateau_factor", c.step.plateau_factor);
    read(s, "plateau_change", c.step.plateau_change);
    read(s, "monotone_slack", c.step.monotone_slack);
  }
  if (j.contains("classify")) {
    const json& s = j["classify"];
    only_keys(s, "classify", {"n_max", "tol_dw", "tol_c", "multiplier_tail"});
    read(s, "n_max", c.classify.n_max);
    read(s, "tol_dw", c.classify.tol_dw);
    read(s, "tol_c", c.classify.tol_c);
    read(s, "multiplier_tail", c.classify.multiplier_tail);
  }
  if (j.contains("approach")) {
    const json& s = j["approach"];
    only_keys(s, "approach", {"tail_fraction", "tol_ratio", "m_cap"});
    read(s, "tail_fraction", c.approach.tail_fraction);
    read(s, "tol_ratio", c.approach.tol_ratio);
    read(s, "m_cap", c.approach.m_cap);
  }
  if (j.contains("harness")) {
    const json& s = j["harness"];
    only_keys(s, "harness", {"radial_tol", "arg_eps", "cases"});
    read(s, "radial_tol", c.radial_tol);
    read(s, "arg_eps", c.arg_eps);
    if (s.contains("cases")) {
      if (!s["cases"].is_array()) throw ConfigError("harness.cases must be an array");
      for (const json& hc : s["cases"]) c.harness_cases.push_back(harness_case_from_json(hc));
    }
  }
  if (j.contains("conjugation")) {
    const json& s = j["conjugation"];
    only_keys(s, "conjugation", {"kind", "grid", "checkpoints", "basepoint"});
    if (s.contains("kind")) {
      if (!s["kind"].is_string()) throw ConfigError("conjugation.kind must be a string");
      c.conjugation_kind = conjugation_kind_from_string(s["kind"].get<std::string>());
    }
    if (s.contains("grid")) c.conjugation.grid = cvector_from_json(s["grid"], "conjugation.grid");
    if (s.contains("checkpoints")) {
      if (!s["checkpoints"].is_array()) throw ConfigError("conjugation.checkpoints must be an array");
      for (const json& n : s["checkpoints"]) c.conjugation.checkpoints.push_back(count(n, "checkpoint"));
    }
    if (s.contains("basepoint")) c.conjugation.basepoint = complex_from_json(s["basepoint"]);
  }
  if (j.contains("plot")) {
    const json& s = j["plot"];
    only_keys(s, "plot", {"coordinate", "size", "marker_radius", "tail_fraction", "max_markers"});
    read(s, "coordinate", c.plot.coordinate);
    read(s, "size", c.plot.size);
    read(s, "marker_radius", c.plot.marker_radius);
    read(s, "tail_fraction", c.plot.tail_fraction);
    read(s, "max_markers", c.plot.max_markers);
  }
  if (j.contains("output")) {
    only_keys(j["output"], "output", {"dir"});
    read(j["output"], "dir", c.output_dir);
  }
  c.validate();
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  } catch (const ModelMismatchError& e) {
    throw ConfigError(std::string("inconsistent map: ") + e.what());
  }
}

std::string dump_config(const ExperimentConfig& c) { return config_to_json(c).dump(2) + "\n"; }

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read configuration " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace hdyn
