// hdyn: command-line front end for the iteration toolkit.
//
// Exit codes: 0 ok, 1 usage or configuration, 2 inconclusive or unmet
// precondition, 3 numeric failure, 4 harness rows failed.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "hdyn/conjugation.hpp"
#include "hdyn/diagnostics.hpp"
#include "hdyn/errors.hpp"
#include "hdyn/export.hpp"
#include "hdyn/serialize.hpp"

using namespace hdyn;
namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, usage = 1, inconclusive = 2, numeric = 3, harness_failed = 4 };

struct Options {
  std::string command;
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_max;
  std::string format = "csv";
};

struct Run {
  ExperimentConfig cfg;
  fs::path out;
  bool structured = false;

  // csv: <name>.csv plus <name>.json; structured: <name>.json with the rows inline.
  void emit(const std::string& name, const std::string& csv, json summary) const {
    if (structured) {
      summary["rows"] = csv_to_json(csv);
    } else {
      write_atomic(out / (name + ".csv"), csv);
    }
    write_atomic(out / (name + ".json"), summary.dump(2) + "\n");
  }

  const MapSpec& map() const {
    if (!cfg.map) throw ConfigError("the configuration has no map");
    return *cfg.map;
  }

  std::vector<Point> starts() const {
    return cfg.starts.empty() ? default_probe_starts(cfg.model(), cfg.effective_dim()) : cfg.starts;
  }

  Orbit orbit() const { return iterate(map(), starts().front(), cfg.n_max, cfg.stop); }
};

int finish_orbit(const Orbit& o) {
  if (o.stop_reason == StopReason::numeric_failure) {
    std::fprintf(stderr, "hdyn: orbit ended with a non-finite value after %zu points\n", o.length());
    return numeric;
  }
  return ok;
}

int cmd_classify(const Run& r) {
  std::vector<Point> starts = r.starts();
  if (starts.size() < 2) starts.push_back(evaluate(r.map(), starts.front()));
  const ClassificationReport rep = classify(r.map(), starts, r.cfg.classify_budget());
  json summary = classification_to_json(rep);
  summary["command"] = "classify";
  write_atomic(r.out / "classify.json", summary.dump(2) + "\n");
  switch (rep.type) {
    case MapType::elliptic: std::printf("elliptic\n"); break;
    case MapType::hyperbolic:
    case MapType::parabolic:
      std::printf("%s, c≈%.6f\n", std::string(to_string(rep.type)).c_str(), rep.multiplier ? rep.multiplier->c : 1.0);
      break;
    case MapType::inconclusive:
      std::printf("inconclusive\n");
      for (const std::string& n : rep.notes) std::fprintf(stderr, "hdyn: %s\n", n.c_str());
      return inconclusive;
  }
  return ok;
}

int cmd_orbit(const Run& r) {
  const Orbit o = r.orbit();
  r.emit("orbit", orbit_csv(o),
         {{"command", "orbit"}, {"length", o.length()}, {"stop_reason", to_string(o.stop_reason)}});
  std::printf("orbit: %zu points, stop reason %s\n", o.length(), std::string(to_string(o.stop_reason)).c_str());
  return finish_orbit(o);
}

int cmd_steps(const Run& r) {
  const Orbit o = r.orbit();
  const StepSeries s = step_series(o, r.cfg.step);
  json summary = steps_summary_json(s);
  summary["command"] = "steps";
  summary["stop_reason"] = to_string(o.stop_reason);
  r.emit("steps", steps_csv(s), summary);
  std::printf("steps: %zu values, verdict %s, d_inf ≈ %.17g\n", s.s.size(), std::string(to_string(s.verdict)).c_str(),
              s.d_inf_estimate);
  if (const int code = finish_orbit(o)) return code;
  return s.verdict == StepVerdict::inconclusive ? inconclusive : ok;
}

BoundaryPoint boundary_target(const Run& r) {
  std::vector<Point> starts = r.starts();
  if (starts.size() < 2) starts.push_back(evaluate(r.map(), starts.front()));
  const ClassificationReport cls = classify(r.map(), starts, r.cfg.classify_budget());
  if (!cls.dw_boundary) {
    throw PreconditionError(fmt::format("map classifies as {} without a boundary Denjoy-Wolff point",
                                        to_string(cls.type)));
  }
  return *cls.dw_boundary;
}

int cmd_approach(const Run& r) {
  const BoundaryPoint X = boundary_target(r);
  const Orbit o = r.orbit();
  const ApproachReport rep = approach_report(o, X, r.cfg.approach);
  json summary = approach_summary_json(rep);
  summary["command"] = "approach";
  r.emit("approach", approach_csv(o, X), summary);
  std::printf("approach: special %d, restricted %d, koranyi %d, nontangential %d, lemmas %s\n", rep.flags.is_special,
              rep.flags.is_restricted, rep.flags.in_koranyi, rep.flags.is_nontangential,
              lemma_check(rep.flags).ok() ? "ok" : "VIOLATED");
  return finish_orbit(o);
}

int cmd_conjugate(const Run& r) {
  const ConjugationOptions o = r.cfg.conjugation_options();
  const ConjugationResult res = r.cfg.conjugation_kind == ConjugationKind::pommerenke
                                    ? pommerenke_normalized(r.map(), o)
                                    : baker_pommerenke_normalized(r.map(), o);
  json summary = conjugation_to_json(res);
  summary["command"] = "conjugate";
  r.emit("conjugation", conjugation_csv(res), summary);
  std::fputs(conjugation_report(res).c_str(), stdout);
  return ok;
}

int cmd_harness(const Run& r) {
  const auto suite = r.cfg.harness_cases.empty() ? default_harness_suite(r.cfg.seed) : r.cfg.harness_cases;
  const HarnessReport rep = theorem_harness(suite, r.cfg.harness_budget());
  json summary = harness_summary_json(rep);
  summary["command"] = "harness";
  summary["seed"] = r.cfg.seed;
  r.emit("harness", harness_csv(rep), summary);
  std::printf("harness: %zu rows, %zu passed, %zu failed, %zu skipped, %zu violations, %zu lemma violations\n",
              rep.rows.size(), rep.passed, rep.failed, rep.skipped, rep.violations, rep.lemma_violations);
  for (const HarnessRow& row : rep.rows) {
    if (!row.pass) std::fprintf(stderr, "hdyn: %s: %s\n", row.input.label.c_str(), row.note.c_str());
  }
  return rep.ok() ? ok : harness_failed;
}

int cmd_probe(const Run& r) {
  std::vector<Point> starts = r.cfg.starts;
  if (starts.size() < 5) starts = default_probe_starts(r.cfg.model(), r.cfg.effective_dim());
  const ProbeReport rep = conjecture_probe(r.map(), starts, r.cfg.harness_budget());
  json summary = probe_to_json(rep);
  summary["command"] = "probe";
  r.emit("probe", probe_csv(rep), summary);
  std::printf("probe: %s across %zu starts\n", std::string(to_string(rep.verdict)).c_str(), rep.rows.size());
  for (const std::string& n : rep.notes) std::printf("note: %s\n", n.c_str());
  return ok;
}

int cmd_plot(const Run& r) {
  const Orbit o = r.orbit();
  write_atomic(r.out / "plot.svg", plot_svg(o, r.cfg.plot));
  std::printf("plot: %zu points written to %s\n", o.length(), (r.out / "plot.svg").string().c_str());
  return finish_orbit(o);
}

int dispatch(const Options& opt) {
  Run r;
  r.cfg = opt.config ? load_config(*opt.config) : parse_config("{}");
  if (opt.seed) r.cfg.seed = *opt.seed;
  if (opt.n_max) r.cfg.n_max = r.cfg.classify.n_max = *opt.n_max;
  if (opt.out) r.cfg.output_dir = *opt.out;
  r.out = r.cfg.output_dir;
  r.structured = opt.format == "structured";
  fs::create_directories(r.out);

  if (opt.command == "classify") return cmd_classify(r);
  if (opt.command == "orbit") return cmd_orbit(r);
  if (opt.command == "steps") return cmd_steps(r);
  if (opt.command == "approach") return cmd_approach(r);
  if (opt.command == "conjugate") return cmd_conjugate(r);
  if (opt.command == "harness") return cmd_harness(r);
  if (opt.command == "probe") return cmd_probe(r);
  if (opt.command == "plot") return cmd_plot(r);
  throw ConfigError("unknown command " + opt.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iteration of holomorphic self-maps of the disk, half-plane, ball and Siegel half-space"};
  Options opt;
  app.add_option("command", opt.command, "classify | orbit | steps | approach | conjugate | harness | probe | plot")
      ->required()
      ->check(CLI::IsMember({"classify", "orbit", "steps", "approach", "conjugate", "harness", "probe", "plot"}));
  app.add_option("--config", opt.config, "JSON experiment configuration");
  app.add_option("--out", opt.out, "output directory (overrides output.dir)");
  app.add_option("--seed", opt.seed, "seed of randomized suites (default 0)");
  app.add_option("--n-max", opt.n_max, "iteration budget (overrides n_max and classify.n_max)");
  app.add_option("--format", opt.format, "table format")->check(CLI::IsMember({"csv", "structured"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    return dispatch(opt);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "hdyn: configuration error: %s\n", e.what());
    return usage;
  } catch (const ModelMismatchError& e) {
    std::fprintf(stderr, "hdyn: configuration error: %s\n", e.what());
    return usage;
  } catch (const PreconditionError& e) {
    std::fprintf(stderr, "hdyn: precondition not met: %s\n", e.what());
    return inconclusive;
  } catch (const EstimationError& e) {
    std::fprintf(stderr, "hdyn: inconclusive: %s\n", e.what());
    return inconclusive;
  } catch (const EvaluationError& e) {
    std::fprintf(stderr, "hdyn: numeric failure: %s (margin %g at index %zu)\n", e.what(), e.margin(), e.index());
    return numeric;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "hdyn: numeric failure: %s\n", e.what());
    return numeric;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "hdyn: %s\n", e.what());
    return usage;
  }
}
