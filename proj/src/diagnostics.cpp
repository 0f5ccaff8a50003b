#include "hdyn/diagnostics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hdyn/errors.hpp"

namespace hdyn {

namespace {

double tail_mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double tail_max(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

// |Z - X|^2 = |1 - <Z, X>|^2 + |Z - <Z, X> X|^2
double distance_to(const ApproachSample& s) { return std::sqrt(std::norm(s.one_minus_proj) + s.orth_norm_sq); }

CVector random_unit(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  CVector v(n);
  double s = 0.0;
  for (cplx& c : v) {
    c = {g(rng), g(rng)};
    s += std::norm(c);
  }
  for (cplx& c : v) c /= std::sqrt(s);
  return v;
}

CVector scaled(CVector v, double r) {
  for (cplx& c : v) c *= r;
  return v;
}

}  // namespace

ApproachReport approach_report(const Orbit& orbit, const BoundaryPoint& X, const ApproachOptions& opts) {
  const std::size_t len = orbit.length();
  if (len < 2) throw PreconditionError("approach report needs an orbit with at least two points");
  ApproachReport r;
  r.X = X;
  const std::size_t window =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(opts.tail_fraction * static_cast<double>(len))));
  r.tail_start = len - std::min(window, len);

  std::vector<ApproachSample> samples;
  samples.reserve(len - r.tail_start);
  for (std::size_t n = r.tail_start; n < len; ++n) samples.push_back(approach_sample(orbit.points[n], X));
  const double first = distance_to(samples.front());
  const double last = distance_to(samples.back());
  if (!(last < first)) {
    throw PreconditionError(fmt::format("orbit does not approach the boundary point (|Z - X| {} -> {} over the tail)",
                                        first, last));
  }

  for (const ApproachSample& s : samples) {
    r.koranyi_tail.push_back(koranyi_quotient(s));
    r.special_ratio_tail.push_back(special_ratio(s));
    r.nt_quotient_tail.push_back(projection_nt_quotient(s));
    r.stolz_tail.push_back(stolz_quotient(s));
    r.tangency_angle_tail.push_back(tangency_angle(s));
  }
  r.koranyi_sup_tail = tail_max(r.koranyi_tail);
  r.special_mean_tail = tail_mean(r.special_ratio_tail);
  r.nt_sup_tail = tail_max(r.nt_quotient_tail);
  r.stolz_sup_tail = tail_max(r.stolz_tail);
  r.arg_margin = std::numbers::pi;
  for (double a : r.tangency_angle_tail) r.arg_margin = std::min(r.arg_margin, std::numbers::pi - std::abs(2.0 * a));

  r.flags.is_special = r.special_mean_tail < opts.tol_ratio;
  r.flags.is_restricted = r.flags.is_special && r.nt_sup_tail < opts.m_cap;
  r.flags.in_koranyi = r.koranyi_sup_tail < opts.m_cap;
  r.flags.is_nontangential = r.stolz_sup_tail < opts.m_cap;
  if (r.flags.in_koranyi) r.koranyi_amplitude = r.koranyi_sup_tail;
  return r;
}

LemmaCheck lemma_check(const ApproachFlags& f) {
  LemmaCheck c;
  c.nontangential_implies_restricted = !f.is_nontangential || f.is_restricted;
  c.special_koranyi_implies_restricted = !(f.is_special && f.in_koranyi) || f.is_restricted;
  c.special_restricted_implies_koranyi = !(f.is_special && f.is_restricted) || f.in_koranyi;
  return c;
}

std::vector<cplx> radial_quotient_series(const Orbit& orbit, const BoundaryPoint& X) {
  std::vector<cplx> q;
  if (orbit.length() < 2) return q;
  q.reserve(orbit.length() - 1);
  cplx prev = approach_sample(orbit.points[0], X).one_minus_proj;
  for (std::size_t n = 0; n + 1 < orbit.length(); ++n) {
    const cplx next = approach_sample(orbit.points[n + 1], X).one_minus_proj;
    if (prev == cplx{0.0, 0.0}) {
      throw EstimationError(fmt::format("radial quotient is degenerate at n = {}", n));
    }
    q.push_back(next / prev);
    prev = next;
  }
  return q;
}

HarnessReport theorem_harness(const std::vector<HarnessCase>& suite, const HarnessBudget& budget) {
  HarnessReport rep;
  for (const HarnessCase& c : suite) {
    HarnessRow row(c);
    try {
      const Point companion = evaluate(c.spec, c.start);
      const ClassificationReport cls = classify(c.spec, {c.start, companion}, budget.classify);
      row.type = cls.type;
      if (cls.type != MapType::parabolic || !cls.dw_boundary) {
        row.skipped = true;
        row.note = fmt::format("classified {}, harness needs parabolic", to_string(cls.type));
        rep.rows.push_back(std::move(row));
        continue;
      }
      const Orbit orbit = iterate(c.spec, c.start, budget.n_max, budget.classify.stop);
      const StepSeries steps = step_series(orbit, budget.step);
      row.verdict = steps.verdict;
      row.final_step = steps.s.back();

      const ApproachReport ap = approach_report(orbit, *cls.dw_boundary, budget.approach);
      row.flags = ap.flags;
      row.lemmas = lemma_check(ap.flags);
      row.arg_margin = ap.arg_margin;

      const std::vector<cplx> radial = radial_quotient_series(orbit, *cls.dw_boundary);
      row.radial_final = radial.back();
      const std::size_t from = ap.tail_start;
      double dev = 0.0;
      for (std::size_t n = from; n < radial.size(); ++n) dev += std::abs(radial[n] - 1.0);
      row.radial_tail_dev = dev / static_cast<double>(std::max<std::size_t>(1, radial.size() - from));

      const bool restricted = row.flags.is_restricted;
      row.pass = row.verdict != StepVerdict::inconclusive && (!restricted || row.verdict == StepVerdict::zero_step);
      if (row.verdict == StepVerdict::inconclusive) row.note = "inconclusive step verdict; larger budget needed";
      if (restricted && row.verdict == StepVerdict::nonzero_step) {
        ++rep.violations;
        row.note = "restricted orbit without zero step";
      }
      if (restricted && row.radial_tail_dev >= budget.radial_tol) {
        row.pass = false;
        row.note = fmt::format("radial quotient tail deviates by {}", row.radial_tail_dev);
      }
      if (restricted && row.arg_margin <= budget.arg_eps) {
        row.pass = false;
        row.note = fmt::format("arg margin {} too small", row.arg_margin);
      }
      if (!row.lemmas.ok()) {
        ++rep.lemma_violations;
        row.pass = false;
        row.note = "approach flags violate the lemma implications";
      }
    } catch (const Error& e) {
      row.skipped = true;
      row.note = e.what();
    }
    rep.rows.push_back(std::move(row));
  }
  for (const HarnessRow& r : rep.rows) {
    if (r.skipped) {
      ++rep.skipped;
    } else if (r.pass) {
      ++rep.passed;
    } else {
      ++rep.failed;
    }
  }
  return rep;
}

std::vector<HarnessCase> default_harness_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto uni = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  std::vector<HarnessCase> suite;

  const double norms[3] = {0.0, 0.3, -1.0};  // -1: 0.6 sqrt(Re z0)
  for (int k = 0; k < 21; ++k) {
    const std::size_t dim = 2 + k % 2;
    const double b = uni(0.5, 2.0);
    const double re = uni(0.5, 3.0);
    const double r = norms[k % 3] < 0.0 ? 0.6 * std::sqrt(re) : norms[k % 3];
    const CVector w0 = scaled(random_unit(rng, dim - 1), r);
    suite.push_back({fmt::format("siegel_translation_{:02}", k), "siegel_translation",
                     MapSpec::siegel_translation(b), SiegelPoint({re + r * r, uni(-2.0, 2.0)}, w0)});
  }
  for (int k = 0; k < 10; ++k) {
    const std::size_t dim = 2 + k % 2;
    const CVector a = scaled(random_unit(rng, dim - 1), uni(0.5, 1.5));
    const CVector w0 = scaled(random_unit(rng, dim - 1), uni(0.0, 0.5));
    suite.push_back({fmt::format("heisenberg_translation_{:02}", k), "heisenberg_translation",
                     MapSpec::heisenberg_translation(a, uni(-1.0, 1.0)),
                     SiegelPoint({uni(0.5, 2.0) + norm_sq(w0), uni(-2.0, 2.0)}, w0)});
  }

  const auto st = [](cplx b) { return MapSpec::siegel_translation(b); };
  const auto heis = [](cplx a, double b) { return MapSpec::heisenberg_translation({a}, b); };
  const Point start = SiegelPoint({1.5, 0.5}, CVector{{0.3, -0.2}});
  suite.push_back({"mixed_st_st", "mixed", MapSpec::composition({st(1.0), st(0.5)}), start});
  suite.push_back({"mixed_st_heis", "mixed", MapSpec::composition({st(2.0), heis({0.1, 0.1}, 0.0)}), start});
  suite.push_back({"mixed_heis_st", "mixed", MapSpec::composition({heis(0.2, 0.5), st(1.5)}), start});
  suite.push_back({"mixed_heis_heis", "mixed", MapSpec::composition({heis({0.5, 0.5}, 0.0), heis({0.2, -0.4}, 0.3)}),
                   start});
  suite.push_back({"mixed_st_vertical", "mixed", MapSpec::composition({st(1.0), st({0.0, 1.0})}), start});

  suite.push_back({"siegel_translation_vertical", "siegel_translation_vertical", st({0.0, 1.0}),
                   SiegelPoint({1.0, 0.0}, CVector{0.0})});
  return suite;
}

std::string_view to_string(ProbeVerdict v) { return v == ProbeVerdict::consistent ? "CONSISTENT" : "DISCREPANT"; }

ProbeReport conjecture_probe(const MapSpec& spec, const std::vector<Point>& starts, const HarnessBudget& budget) {
  if (starts.size() < 5) throw PreconditionError("the probe needs at least five starts");
  const ClassificationReport cls = classify(spec, {starts[0], starts[1]}, budget.classify);
  if (cls.type != MapType::parabolic) {
    throw PreconditionError(fmt::format("map classifies as {}, the probe needs parabolic", to_string(cls.type)));
  }
  ProbeReport rep;
  for (const Point& s : starts) {
    const StepSeries steps = step_series(iterate(spec, s, budget.n_max, budget.classify.stop), budget.step);
    rep.rows.push_back({s, steps.verdict, steps.d_inf_estimate});
  }
  for (const ProbeRow& r : rep.rows) {
    if (r.verdict != rep.rows.front().verdict) rep.verdict = ProbeVerdict::discrepant;
    if (r.verdict == StepVerdict::inconclusive) rep.notes.emplace_back("a start gave an inconclusive verdict");
  }
  if (rep.verdict == ProbeVerdict::discrepant) {
    rep.notes.emplace_back("verdicts differ across starts; numerically interesting, not a counterexample");
  }
  return rep;
}

std::vector<Point> default_probe_starts(Model model, std::size_t dim) {
  std::vector<Point> out;
  const cplx zs[5] = {{1.0, 0.0}, {2.0, 1.0}, {0.5, -1.5}, {3.0, 2.5}, {1.2, -0.4}};
  const double ws[5] = {0.0, 0.3, 0.5, 0.9, 0.2};
  for (int k = 0; k < 5; ++k) {
    switch (model) {
      case Model::halfplane: out.emplace_back(HalfPlanePoint(zs[k])); break;
      case Model::disk: out.emplace_back(cayley_halfplane_to_disk(HalfPlanePoint(zs[k]))); break;
      case Model::siegel:
      case Model::ball: {
        CVector w(dim - 1, cplx{0.0, 0.0});
        if (!w.empty()) w[k % w.size()] = cplx{ws[k], 0.5 * ws[k]} * std::sqrt(zs[k].real() / 2.0);
        const SiegelPoint p(zs[k], w);
        if (model == Model::siegel) {
          out.emplace_back(p);
        } else {
          out.emplace_back(cayley_siegel_to_ball(p));
        }
        break;
      }
    }
  }
  return out;
}

}  // namespace hdyn
