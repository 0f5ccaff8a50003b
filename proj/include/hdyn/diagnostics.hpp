#pragma once

// Boundary approach of orbits (Koranyi / special / restricted), radial
// quotients, the restricted => zero-step harness and the start-independence probe.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hdyn/dynamics.hpp"

namespace hdyn {

/// Tail-based flag thresholds.
struct ApproachOptions {
  double tail_fraction = 0.2;
  double tol_ratio = 1e-2;
  double m_cap = 1e3;
};

struct ApproachFlags {
  bool is_special = false;        // tail mean of the special ratio < tol_ratio
  bool is_restricted = false;     // special and projection quotient tail max < m_cap
  bool in_koranyi = false;        // Koranyi quotient tail max < m_cap
  bool is_nontangential = false;  // |X - Z| / (1 - |Z|) tail max < m_cap
};

struct ApproachReport {
  BoundaryPoint X = BoundaryPoint::infinity();
  std::size_t tail_start = 0;  // orbit index of the first tail sample
  std::vector<double> koranyi_tail;
  std::vector<double> special_ratio_tail;
  std::vector<double> nt_quotient_tail;
  std::vector<double> stolz_tail;
  std::vector<double> tangency_angle_tail;
  double koranyi_sup_tail = 0.0;
  double special_mean_tail = 0.0;
  double nt_sup_tail = 0.0;
  double stolz_sup_tail = 0.0;
  /// Smallest amplitude M with the tail inside K(X, M); empty when unbounded.
  std::optional<double> koranyi_amplitude;
  /// min over the tail of pi - |2 arg(1 - <Z, X>)|
  double arg_margin = 0.0;
  ApproachFlags flags;
};

/// Throws PreconditionError unless |Z_n - X| decreases across the tail.
ApproachReport approach_report(const Orbit& orbit, const BoundaryPoint& X, const ApproachOptions& opts = {});

struct LemmaCheck {
  bool nontangential_implies_restricted = true;
  bool special_koranyi_implies_restricted = true;
  bool special_restricted_implies_koranyi = true;
  bool ok() const {
    return nontangential_implies_restricted && special_koranyi_implies_restricted &&
           special_restricted_implies_koranyi;
  }
};

LemmaCheck lemma_check(const ApproachFlags& f);

/// (1 - <Z_{n+1}, X>) / (1 - <Z_n, X>) for n = 0 .. length - 2.
std::vector<cplx> radial_quotient_series(const Orbit& orbit, const BoundaryPoint& X);

struct HarnessCase {
  std::string label;
  std::string group;  // siegel_translation, heisenberg_translation, mixed, ...
  MapSpec spec;
  Point start;
};

struct HarnessBudget {
  std::size_t n_max = 100000;
  StepRule step{};
  ApproachOptions approach{};
  ClassifyBudget classify{};
  /// restricted rows need the tail mean of |radial quotient - 1| below this
  double radial_tol = 1e-2;
  /// restricted rows need arg_margin above this
  double arg_eps = 1e-2;
};

struct HarnessRow {
  explicit HarnessRow(HarnessCase c) : input(std::move(c)) {}
  HarnessCase input;
  bool skipped = false;
  std::string note;
  MapType type = MapType::inconclusive;
  ApproachFlags flags;
  LemmaCheck lemmas;
  StepVerdict verdict = StepVerdict::inconclusive;
  double final_step = 0.0;
  cplx radial_final;
  double radial_tail_dev = 0.0;
  double arg_margin = 0.0;
  bool pass = false;
};

struct HarnessReport {
  std::vector<HarnessRow> rows;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  /// rows that are restricted but not zero-step
  std::size_t violations = 0;
  std::size_t lemma_violations = 0;
  bool ok() const { return failed == 0 && skipped == 0 && violations == 0 && lemma_violations == 0; }
};

/// Rows fail on restricted without zero step, on an inconclusive step
/// verdict, or (restricted rows) on the radial-quotient or arg bound.
/// Cases that do not classify parabolic are skipped, which also fails ok().
HarnessReport theorem_harness(const std::vector<HarnessCase>& suite, const HarnessBudget& budget = {});

/// 21 Siegel translations, 10 Heisenberg translations, 5 compositions and
/// the vertical translation b = i. Parameters drawn from a seeded generator.
std::vector<HarnessCase> default_harness_suite(std::uint64_t seed = 0);

enum class ProbeVerdict { consistent, discrepant };
std::string_view to_string(ProbeVerdict v);

struct ProbeRow {
  Point start;
  StepVerdict verdict = StepVerdict::inconclusive;
  double d_inf_estimate = 0.0;
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  ProbeVerdict verdict = ProbeVerdict::consistent;
  std::vector<std::string> notes;
};

/// Step verdicts of at least five starts. Throws PreconditionError for fewer
/// starts or when the map does not classify parabolic.
ProbeReport conjecture_probe(const MapSpec& spec, const std::vector<Point>& starts, const HarnessBudget& budget = {});

/// Five distinct starts of the given model and dimension.
std::vector<Point> default_probe_starts(Model model, std::size_t dim);

}  // namespace hdyn
