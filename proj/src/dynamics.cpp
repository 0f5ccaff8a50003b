#include "hdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hdyn/errors.hpp"

namespace hdyn {

namespace {

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double euclid(std::span<const cplx> a, std::span<const cplx> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc);
}

bool near_boundary(const Point& p, const StopPolicy& stop) {
  switch (model_of(p)) {
    case Model::halfplane: return std::abs(std::get<HalfPlanePoint>(p).z()) > stop.magnitude_cap;
    case Model::siegel: return std::abs(std::get<SiegelPoint>(p).z()) > stop.magnitude_cap;
    default: return boundary_gap(p) < stop.gap_floor;
  }
}

// Solves A x = b in place by Gaussian elimination with partial pivoting.
std::optional<CVector> solve(std::vector<CVector> A, CVector b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
    }
    if (std::abs(A[piv][k]) < 1e-300) return std::nullopt;
    std::swap(A[k], A[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = A[i][k] / A[k][k];
      for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
      b[i] -= f * b[k];
    }
  }
  CVector x(n);
  for (std::size_t k = n; k-- > 0;) {
    cplx acc = b[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= A[k][j] * x[j];
    x[k] = acc / A[k][k];
  }
  return x;
}

struct DwRun {
  DenjoyWolffEstimate estimate;
  std::vector<Orbit> orbits;
};

DwRun run_denjoy_wolff(const MapSpec& spec, const std::vector<Point>& starts, std::size_t n_max, double tol_dw,
                       const StopPolicy& stop) {
  if (starts.size() < 2) throw PreconditionError("Denjoy-Wolff estimation needs at least two starts");
  for (std::size_t i = 0; i < starts.size(); ++i) {
    for (std::size_t j = i + 1; j < starts.size(); ++j) {
      if (coords_of(starts[i]) == coords_of(starts[j])) {
        throw PreconditionError("Denjoy-Wolff estimation needs distinct starts");
      }
    }
  }

  DwRun run;
  std::vector<CVector> limits;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    Orbit o = iterate(spec, starts[k], n_max, stop);
    // Orbits stopped near the sphere are compared through their radial
    // projections, which settle long before the gap closes.
    const bool projected = o.stop_reason == StopReason::boundary_proximity;
    const auto limit_of = [projected](const Point& p) {
      CVector v = ball_coords(p);
      if (projected) {
        const double r = std::sqrt(norm_sq(v));
        for (cplx& c : v) c /= r;
      }
      return v;
    };
    const CVector last = limit_of(o.points.back());
    if (o.stop_reason != StopReason::interior_fixed_point && o.length() > 1) {
      const std::size_t mid = (9 * (o.length() - 1)) / 10;
      const double drift = euclid(last, limit_of(o.points[mid]));
      if (drift > tol_dw) {
        throw EstimationError("orbit from start " + std::to_string(k) + " has not settled (drift " +
                              std::to_string(drift) + " over the last 10% of " +
                              std::to_string(o.length() - 1) + " steps)");
      }
    }
    limits.push_back(last);
    run.orbits.push_back(std::move(o));
  }

  double spread = 0.0;
  for (std::size_t i = 0; i < limits.size(); ++i) {
    for (std::size_t j = i + 1; j < limits.size(); ++j) spread = std::max(spread, euclid(limits[i], limits[j]));
  }
  if (spread > tol_dw) {
    throw EstimationError("orbit limits disagree by " + std::to_string(spread) +
                          " (elliptic automorphism or insufficient n_max)");
  }

  DenjoyWolffEstimate& est = run.estimate;
  est.spread = spread;
  est.ball_limit = limits.front();
  const Point& last = run.orbits.front().points.back();
  const double norm = std::sqrt(norm_sq(est.ball_limit));

  bool fixed = false;
  if (norm < 1.0 - tol_dw) {
    try {
      fixed = euclid(ball_coords(evaluate(spec, last)), est.ball_limit) < tol_dw;
    } catch (const EvaluationError&) {
      fixed = false;
    }
  }
  if (fixed) {
    est.location = DwLocation::interior;
    est.interior = last;
    return run;
  }

  est.location = DwLocation::boundary;
  const bool halfplane_model = spec.model() == Model::halfplane || spec.model() == Model::siegel;
  CVector e1(est.ball_limit.size(), cplx{0.0, 0.0});
  e1[0] = 1.0;
  if (halfplane_model && euclid(est.ball_limit, e1) < tol_dw) {
    est.boundary = BoundaryPoint::infinity();
  } else {
    est.boundary = BoundaryPoint::unit(est.ball_limit);
  }
  return run;
}

}  // namespace

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::max_iter: return "max_iter";
    case StopReason::boundary_proximity: return "boundary_proximity";
    case StopReason::interior_fixed_point: return "interior_fixed_point";
    case StopReason::numeric_failure: return "numeric_failure";
  }
  return "?";
}

std::string_view to_string(StepVerdict v) {
  switch (v) {
    case StepVerdict::zero_step: return "zero_step";
    case StepVerdict::nonzero_step: return "nonzero_step";
    case StepVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view to_string(DwLocation l) { return l == DwLocation::interior ? "interior" : "boundary"; }

std::string_view to_string(MapType t) {
  switch (t) {
    case MapType::elliptic: return "elliptic";
    case MapType::hyperbolic: return "hyperbolic";
    case MapType::parabolic: return "parabolic";
    case MapType::inconclusive: return "inconclusive";
  }
  return "?";
}

double boundary_gap(const Point& p) {
  switch (model_of(p)) {
    case Model::disk: {
      const auto& d = std::get<DiskPoint>(p);
      const cplx q = d.complement();
      const double r = std::abs(d.z());
      // 1 - |z|^2 = 2 Re q - |q|^2 with q = 1 - z, exact near z = 1
      const double g = d.z().real() > 0.0 ? 2.0 * q.real() - std::norm(q) : 1.0 - r * r;
      return g / (1.0 + r);
    }
    case Model::ball: {
      const auto& b = std::get<BallPoint>(p);
      return (1.0 - b.norm_sq()) / (1.0 + std::sqrt(b.norm_sq()));
    }
    default: return boundary_gap(approach_sample(p, BoundaryPoint::infinity()));
  }
}

Orbit iterate(const MapSpec& spec, const Point& start, std::size_t n_max, const StopPolicy& stop) {
  if (model_of(start) != spec.model()) {
    throw ModelMismatchError("start point is not in the " + std::string(to_string(spec.model())) + " model");
  }
  Orbit o{spec, {start}, StopReason::max_iter};
  o.points.reserve(std::min<std::size_t>(n_max, 1u << 20) + 1);
  for (std::size_t k = 0; k < n_max; ++k) {
    std::optional<Point> next;
    try {
      next = evaluate(spec, o.points.back());
    } catch (const EvaluationError& e) {
      if (std::isnan(e.margin())) {
        o.stop_reason = StopReason::numeric_failure;
        return o;
      }
      throw EvaluationError(std::string(e.what()) + " at step " + std::to_string(k + 1), e.margin(), k + 1);
    }
    const double step = pdist(o.points.back(), *next);
    o.points.push_back(std::move(*next));
    if (near_boundary(o.points.back(), stop)) {
      o.stop_reason = StopReason::boundary_proximity;
      break;
    }
    if (step <= stop.fixed_point_step) {
      o.stop_reason = StopReason::interior_fixed_point;
      break;
    }
  }
  return o;
}

StepVerdict step_verdict(const std::vector<double>& s, const StepRule& rule, StepEvidence* evidence) {
  StepEvidence ev;
  const std::size_t m = s.size();
  ev.tail_window = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(rule.tail_fraction * m)));
  const std::span<const double> all(s);
  const double tail = mean(all.subspan(m - ev.tail_window));
  const std::size_t half = m / 2;
  ev.first_half_mean = half > 0 ? mean(all.first(half)) : mean(all);
  ev.second_half_mean = mean(all.subspan(half));
  ev.decrease_rate = ev.first_half_mean > 0.0 ? ev.second_half_mean / ev.first_half_mean : 0.0;
  if (evidence) *evidence = ev;

  if (tail < rule.tol_step && ev.decrease_rate <= 1.0 - rule.min_decrease) return StepVerdict::zero_step;
  const double change = ev.first_half_mean > 0.0
                            ? std::abs(ev.second_half_mean - ev.first_half_mean) / ev.first_half_mean
                            : std::numeric_limits<double>::infinity();
  if (tail > rule.plateau_factor * rule.tol_step && change < rule.plateau_change) return StepVerdict::nonzero_step;
  return StepVerdict::inconclusive;
}

StepSeries step_series(const Orbit& orbit, const StepRule& rule) {
  if (orbit.length() < 2) throw PreconditionError("step series needs an orbit with at least two points");
  StepSeries out;
  out.s.reserve(orbit.length() - 1);
  for (std::size_t n = 0; n + 1 < orbit.length(); ++n) out.s.push_back(pdist(orbit.points[n], orbit.points[n + 1]));

  out.max_increase = 0.0;
  for (std::size_t n = 0; n + 1 < out.s.size(); ++n) out.max_increase = std::max(out.max_increase, out.s[n + 1] - out.s[n]);
  out.monotone = out.max_increase <= rule.monotone_slack;

  out.verdict = step_verdict(out.s, rule, &out.evidence);
  const std::span<const double> all(out.s);
  out.d_inf_estimate = mean(all.subspan(all.size() - out.evidence.tail_window));
  return out;
}

DenjoyWolffEstimate estimate_denjoy_wolff(const MapSpec& spec, const std::vector<Point>& starts, std::size_t n_max,
                                          double tol_dw, const StopPolicy& stop) {
  return run_denjoy_wolff(spec, starts, n_max, tol_dw, stop).estimate;
}

MultiplierEstimate estimate_multiplier(const MapSpec& spec, const Orbit& orbit, double tail_fraction) {
  if (orbit.length() < 2) throw PreconditionError("multiplier estimate needs at least two orbit points");
  if (model_of(orbit.start()) != spec.model()) throw ModelMismatchError("orbit does not belong to the map's model");
  const double first_gap = boundary_gap(orbit.start());
  const double last_gap = boundary_gap(orbit.points.back());
  if (orbit.stop_reason == StopReason::interior_fixed_point || !(last_gap < std::min(0.05, 0.1 * first_gap))) {
    throw PreconditionError("multiplier is not applicable: orbit does not approach the boundary");
  }

  const std::size_t steps = orbit.length() - 1;
  const std::size_t window =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(tail_fraction * static_cast<double>(steps))));
  MultiplierEstimate est;
  est.raw_min = std::numeric_limits<double>::infinity();
  double prev = boundary_gap(orbit.points[steps - window]);
  for (std::size_t n = steps - window; n < steps; ++n) {
    const double next = boundary_gap(orbit.points[n + 1]);
    est.raw_min = std::min(est.raw_min, next / prev);
    prev = next;
    ++est.samples;
  }
  if (!(est.raw_min > 0.0) || !std::isfinite(est.raw_min)) {
    throw EstimationError("multiplier ratio is not positive and finite");
  }
  est.clipped = est.raw_min > 1.0;
  est.c = std::min(est.raw_min, 1.0);
  return est;
}

std::optional<Point> find_interior_fixed_point(const MapSpec& spec, const std::vector<Point>& seeds, double tol) {
  const Model model = spec.model();
  for (const Point& seed : seeds) {
    CVector x = coords_of(seed);
    const std::size_t n = x.size();
    const auto residual = [&](const CVector& at) -> std::optional<CVector> {
      try {
        CVector fx = coords_of(evaluate(spec, point_from_coords(model, at)));
        for (std::size_t i = 0; i < n; ++i) fx[i] -= at[i];
        return fx;
      } catch (const Error&) {
        return std::nullopt;
      }
    };
    auto F = residual(x);
    for (int it = 0; it < 60 && F; ++it) {
      if (std::sqrt(norm_sq(*F)) < tol) {
        Point p = point_from_coords(model, x);
        if (boundary_gap(p) > 1e-6) return p;
        break;
      }
      // Holomorphic, so a real step gives the complex partial derivative.
      std::vector<CVector> J(n, CVector(n));
      bool ok = true;
      for (std::size_t j = 0; j < n && ok; ++j) {
        const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
        CVector xh = x;
        xh[j] += h;
        auto Fh = residual(xh);
        if (!Fh) {
          xh[j] = x[j] - h;
          Fh = residual(xh);
          if (!Fh) {
            ok = false;
            break;
          }
          for (std::size_t i = 0; i < n; ++i) J[i][j] = ((*F)[i] - (*Fh)[i]) / h;
        } else {
          for (std::size_t i = 0; i < n; ++i) J[i][j] = ((*Fh)[i] - (*F)[i]) / h;
        }
      }
      if (!ok) break;
      CVector rhs(n);
      for (std::size_t i = 0; i < n; ++i) rhs[i] = -(*F)[i];
      auto delta = solve(J, rhs);
      if (!delta) break;
      // Damped update that stays inside the model.
      double scale = 1.0;
      std::optional<CVector> Fn;
      CVector xn;
      for (int k = 0; k < 30; ++k, scale *= 0.5) {
        xn = x;
        for (std::size_t i = 0; i < n; ++i) xn[i] += scale * (*delta)[i];
        Fn = residual(xn);
        if (Fn) break;
      }
      if (!Fn) break;
      x = std::move(xn);
      F = std::move(Fn);
    }
  }
  return std::nullopt;
}

ClassificationReport classify(const MapSpec& spec, const std::vector<Point>& starts, const ClassifyBudget& budget) {
  ClassificationReport rep;
  std::optional<DwRun> run;
  try {
    run = run_denjoy_wolff(spec, starts, budget.n_max, budget.tol_dw, budget.stop);
  } catch (const EstimationError& e) {
    rep.notes.emplace_back(std::string("Denjoy-Wolff estimate failed: ") + e.what());
  } catch (const EvaluationError& e) {
    rep.notes.emplace_back(std::string("orbit evaluation failed: ") + e.what());
  }

  if (!run) {
    if (auto fp = find_interior_fixed_point(spec, starts)) {
      rep.type = MapType::elliptic;
      rep.dw_location = DwLocation::interior;
      rep.dw_ball = ball_coords(*fp);
      rep.dw_interior = std::move(fp);
      rep.notes.emplace_back("orbits do not settle but an interior fixed point exists (elliptic automorphism)");
    }
    return rep;
  }

  const DenjoyWolffEstimate& dw = run->estimate;
  rep.dw_location = dw.location;
  rep.dw_ball = dw.ball_limit;
  if (dw.location == DwLocation::interior) {
    rep.type = MapType::elliptic;
    rep.dw_interior = dw.interior;
    return rep;
  }
  rep.dw_boundary = dw.boundary;

  try {
    const MultiplierEstimate c = estimate_multiplier(spec, run->orbits.front(), budget.multiplier_tail);
    rep.multiplier = c;
    if (c.raw_min > 1.0 + 1e-9) rep.notes.emplace_back("multiplier ratio exceeded 1 and was clipped");
    if (c.c < 1.0 - budget.tol_c) {
      rep.type = MapType::hyperbolic;
    } else if (std::abs(c.c - 1.0) <= budget.tol_c) {
      rep.type = MapType::parabolic;
    } else {
      rep.notes.emplace_back("multiplier " + std::to_string(c.c) + " is within neither threshold");
    }
  } catch (const Error& e) {
    rep.notes.emplace_back(std::string("multiplier estimate failed: ") + e.what());
  }
  return rep;
}

}  // namespace hdyn
