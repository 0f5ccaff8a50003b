#pragma once

// JSON documents for map specs, points and experiment configurations.
// Complex numbers are [re, im] pairs; doubles are written in shortest
// round-trip form, so parse(dump(x)) reproduces x bit for bit.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "hdyn/conjugation.hpp"
#include "hdyn/diagnostics.hpp"
#include "hdyn/export.hpp"

namespace hdyn {

using json = nlohmann::json;

json complex_to_json(cplx z);
/// Accepts [re, im] or a bare real number.
cplx complex_from_json(const json& j);

json map_spec_to_json(const MapSpec& spec);
MapSpec map_spec_from_json(const json& j);

/// {"model": ..., "coords": [[re, im], ...]}
json point_to_json(const Point& p);
/// `model` is used when the document has no "model" key; a key that
/// disagrees with it is a ConfigError.
Point point_from_json(const json& j, std::optional<Model> model = std::nullopt);

struct ExperimentConfig {
  std::optional<MapSpec> map;
  /// Dimension for Siegel / ball maps that do not fix one.
  std::size_t dim = 2;
  std::vector<Point> starts;
  std::size_t n_max = 100000;
  std::uint64_t seed = 0;
  StopPolicy stop{};
  StepRule step{};
  ClassifyBudget classify{};
  ApproachOptions approach{};
  double radial_tol = 1e-2;
  double arg_eps = 1e-2;
  /// Empty: the seeded default suite.
  std::vector<HarnessCase> harness_cases;
  ConjugationKind conjugation_kind = ConjugationKind::pommerenke;
  ConjugationOptions conjugation{};
  PlotOptions plot{};
  std::string output_dir = ".";

  /// Throws ConfigError unless every tolerance is positive and every
  /// fraction lies in (0, 1].
  void validate() const;

  Model model() const;
  /// The map's own dimension when it fixes one, `dim` otherwise.
  std::size_t effective_dim() const;
  /// classify budget with the shared stop policy
  ClassifyBudget classify_budget() const;
  HarnessBudget harness_budget() const;
  ConjugationOptions conjugation_options() const;
};

json config_to_json(const ExperimentConfig& c);
/// Unknown keys are rejected. The result is validated.
ExperimentConfig config_from_json(const json& j);

ExperimentConfig parse_config(const std::string& text);
std::string dump_config(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace hdyn
