#pragma once

// Forward orbits, step series, Denjoy-Wolff point, multiplier and the
// elliptic / hyperbolic / parabolic classification.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hdyn/geometry.hpp"
#include "hdyn/maps.hpp"

namespace hdyn {

enum class StopReason { max_iter, boundary_proximity, interior_fixed_point, numeric_failure };
std::string_view to_string(StopReason r);

struct StopPolicy {
  /// Half-plane / Siegel orbits stop once |z| exceeds this.
  double magnitude_cap = 1e12;
  /// Disk / ball orbits stop once 1 - |Z| drops below this. Rounding of the
  /// coordinates moves a point by about eps / (1 - |Z|) in the metric.
  double gap_floor = 1e-3;
  /// Orbits stop when a step d(z_n, z_{n+1}) is at most this.
  double fixed_point_step = 1e-15;
};

struct Orbit {
  MapSpec spec;
  std::vector<Point> points;  // points[0] is the start
  StopReason stop_reason = StopReason::max_iter;

  std::size_t length() const noexcept { return points.size(); }
  const Point& start() const { return points.front(); }
};

/// Iterates at most n_max times (n_max + 1 points). Evaluation failures are
/// rethrown as EvaluationError carrying the failing index; non-finite images
/// end the orbit with StopReason::numeric_failure.
Orbit iterate(const MapSpec& spec, const Point& start, std::size_t n_max, const StopPolicy& stop = {});

enum class StepVerdict { zero_step, nonzero_step, inconclusive };
std::string_view to_string(StepVerdict v);

/// Finite-sample zero-step rule.
///   zero_step:    tail mean < tol_step and mean(second half) <= (1 - min_decrease) mean(first half)
///   nonzero_step: tail mean > plateau_factor * tol_step and
///                 |mean(second half) - mean(first half)| / mean(first half) < plateau_change
struct StepRule {
  double tol_step = 1e-3;
  double tail_fraction = 0.1;
  double min_decrease = 0.5;
  double plateau_factor = 10.0;
  double plateau_change = 1e-2;
  double monotone_slack = 1e-12;
};

struct StepEvidence {
  std::size_t tail_window = 0;
  double first_half_mean = 0.0;
  double second_half_mean = 0.0;
  /// mean(second half) / mean(first half)
  double decrease_rate = 0.0;
};

struct StepSeries {
  std::vector<double> s;
  double d_inf_estimate = 0.0;
  StepVerdict verdict = StepVerdict::inconclusive;
  StepEvidence evidence;
  /// Largest s_{n+1} - s_n; at most monotone_slack for a genuine self-map.
  double max_increase = 0.0;
  bool monotone = true;
};

StepSeries step_series(const Orbit& orbit, const StepRule& rule = {});

/// Verdict of the rule applied to an already computed series.
StepVerdict step_verdict(const std::vector<double>& s, const StepRule& rule, StepEvidence* evidence = nullptr);

enum class DwLocation { interior, boundary };
std::string_view to_string(DwLocation l);

struct DenjoyWolffEstimate {
  DwLocation location = DwLocation::boundary;
  std::optional<Point> interior;           // set when location == interior
  std::optional<BoundaryPoint> boundary;   // set when location == boundary
  CVector ball_limit;                      // common limit in ball coordinates
  double spread = 0.0;                     // largest disagreement across starts
};

/// Common orbit limit of at least two distinct starts. Throws EstimationError
/// if an orbit has not settled or the limits disagree by more than tol_dw.
/// For half-plane models a boundary limit at (1, 0) is reported as infinity.
DenjoyWolffEstimate estimate_denjoy_wolff(const MapSpec& spec, const std::vector<Point>& starts,
                                          std::size_t n_max, double tol_dw = 1e-3,
                                          const StopPolicy& stop = {});

struct MultiplierEstimate {
  double c = 1.0;          // in (0, 1]
  double raw_min = 1.0;    // before clipping
  bool clipped = false;
  std::size_t samples = 0;
};

/// Running minimum of (1 - |f(Z_n)|) / (1 - |Z_n|) over the last
/// tail_fraction of the orbit, with the gaps taken from stable half-plane
/// identities when the model is H / H^N. Throws PreconditionError when the
/// orbit does not approach the boundary.
MultiplierEstimate estimate_multiplier(const MapSpec& spec, const Orbit& orbit, double tail_fraction = 0.1);

enum class MapType { elliptic, hyperbolic, parabolic, inconclusive };
std::string_view to_string(MapType t);

struct ClassifyBudget {
  std::size_t n_max = 100000;
  double tol_dw = 1e-3;
  double tol_c = 1e-3;
  double multiplier_tail = 0.1;
  StopPolicy stop{};
};

struct ClassificationReport {
  MapType type = MapType::inconclusive;
  std::optional<DwLocation> dw_location;
  std::optional<Point> dw_interior;
  std::optional<BoundaryPoint> dw_boundary;
  CVector dw_ball;
  std::optional<MultiplierEstimate> multiplier;
  std::vector<std::string> notes;
};

ClassificationReport classify(const MapSpec& spec, const std::vector<Point>& starts,
                              const ClassifyBudget& budget = {});

/// Newton search for an interior fixed point seeded at the given points.
std::optional<Point> find_interior_fixed_point(const MapSpec& spec, const std::vector<Point>& seeds,
                                               double tol = 1e-10);

/// Stable 1 - |Z| of any point in ball coordinates.
double boundary_gap(const Point& p);

}  // namespace hdyn
