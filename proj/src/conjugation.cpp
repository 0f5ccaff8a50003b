#include "hdyn/conjugation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "hdyn/errors.hpp"

namespace hdyn {

namespace {

// f_n(z) and f_{n+1}(z) for every checkpoint n.
struct Samples {
  std::vector<cplx> at;
  std::vector<cplx> next;
};

Samples sample_orbit(const MapSpec& spec, cplx z0, const std::vector<std::size_t>& checkpoints) {
  Samples s;
  Point p = HalfPlanePoint(z0);
  const std::size_t last = checkpoints.back() + 1;
  std::size_t ka = 0, kb = 0;
  for (std::size_t n = 0;; ++n) {
    const cplx z = std::get<HalfPlanePoint>(p).z();
    if (ka < checkpoints.size() && checkpoints[ka] == n) s.at.push_back(z), ++ka;
    if (kb < checkpoints.size() && checkpoints[kb] + 1 == n) s.next.push_back(z), ++kb;
    if (n == last) break;
    p = evaluate(spec, p);
  }
  return s;
}

void check_inputs(const MapSpec& spec, const ConjugationOptions& opts, std::vector<cplx>& grid,
                  std::vector<std::size_t>& checkpoints) {
  if (spec.model() != Model::halfplane) {
    throw ModelMismatchError("normalized iterates are defined for half-plane maps only");
  }
  grid = opts.grid.empty() ? default_grid() : opts.grid;
  checkpoints = opts.checkpoints.empty() ? default_checkpoints() : opts.checkpoints;
  for (cplx g : grid) {
    if (!(g.real() > 0.0) || !std::isfinite(g.imag())) {
      throw ConfigError(fmt::format("grid point ({}, {}) is not in the right half-plane", g.real(), g.imag()));
    }
  }
  if (!(opts.basepoint.real() > 0.0)) throw ConfigError("basepoint is not in the right half-plane");
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    if (checkpoints[k] == 0 || (k > 0 && checkpoints[k] <= checkpoints[k - 1])) {
      throw ConfigError("checkpoints must be positive and strictly increasing");
    }
  }
  if (checkpoints.empty()) throw ConfigError("at least one checkpoint is required");
}

ClassificationReport require_parabolic(const MapSpec& spec, const ConjugationOptions& opts) {
  const std::vector<Point> starts{HalfPlanePoint(opts.basepoint), HalfPlanePoint(opts.basepoint + 1.0)};
  ClassificationReport rep = classify(spec, starts, opts.precondition);
  if (rep.type != MapType::parabolic) {
    std::string why = fmt::format("map classifies as {}, not parabolic", to_string(rep.type));
    for (const auto& n : rep.notes) why += "; " + n;
    throw PreconditionError(why);
  }
  return rep;
}

void fill_deltas(ConjugationResult& r) {
  for (std::size_t k = 0; k + 1 < r.psi.size(); ++k) {
    double d = 0.0;
    for (std::size_t j = 0; j < r.grid.size(); ++j) d = std::max(d, std::abs(r.psi[k + 1][j] - r.psi[k][j]));
    r.deltas.push_back(d);
  }
}

template <class Normalize>
void fill_values(ConjugationResult& r, const MapSpec& spec, Normalize normalize) {
  std::vector<Samples> grid_samples;
  grid_samples.reserve(r.grid.size());
  for (cplx g : r.grid) grid_samples.push_back(sample_orbit(spec, g, r.checkpoints));

  for (std::size_t k = 0; k < r.checkpoints.size(); ++k) {
    std::vector<cplx> psi, psi_f;
    cplx sum{0.0, 0.0};
    for (const Samples& s : grid_samples) {
      psi.push_back(normalize(k, s.at[k]));
      psi_f.push_back(normalize(k, s.next[k]));
      sum += psi_f.back() - psi.back();
    }
    r.translation_estimates.push_back(sum / static_cast<double>(r.grid.size()));
    r.psi.push_back(std::move(psi));
    r.psi_f.push_back(std::move(psi_f));
  }
}

double sup_residual(const ConjugationResult& r, std::size_t k, cplx shift) {
  double worst = 0.0;
  for (std::size_t j = 0; j < r.grid.size(); ++j) {
    worst = std::max(worst, std::abs(r.psi_f[k][j] - r.psi[k][j] - shift));
  }
  return worst;
}

}  // namespace

std::string_view to_string(ConjugationKind k) {
  return k == ConjugationKind::pommerenke ? "pommerenke" : "baker_pommerenke";
}

ConjugationKind conjugation_kind_from_string(std::string_view s) {
  if (s == "pommerenke") return ConjugationKind::pommerenke;
  if (s == "baker_pommerenke") return ConjugationKind::baker_pommerenke;
  throw ConfigError("unknown conjugation kind '" + std::string(s) + "'");
}

std::vector<cplx> default_grid() {
  std::vector<cplx> g;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) g.emplace_back(1.0 + 0.5 * i, -1.0 + 0.5 * j);
  }
  return g;
}

std::vector<std::size_t> default_checkpoints() { return {100, 1000, 10000, 100000}; }

ConjugationResult pommerenke_normalized(const MapSpec& spec, const ConjugationOptions& opts) {
  ConjugationResult r;
  r.kind = ConjugationKind::pommerenke;
  r.basepoint = opts.basepoint;
  check_inputs(spec, opts, r.grid, r.checkpoints);
  if (opts.check_preconditions) {
    const ClassificationReport rep = require_parabolic(spec, opts);
    if (!rep.dw_boundary || !rep.dw_boundary->is_infinity()) {
      throw PreconditionError("Denjoy-Wolff point is not at infinity");
    }
  }

  const Samples base = sample_orbit(spec, r.basepoint, r.checkpoints);
  for (cplx z : base.at) {
    if (!(z.real() > 0.0)) throw EstimationError("normalization x_n is not positive");
  }
  fill_values(r, spec, [&](std::size_t k, cplx w) {
    const cplx zn = base.at[k];
    return (w - cplx{0.0, zn.imag()}) / zn.real();
  });

  r.b_estimate = r.translation_estimates.back().imag();
  for (std::size_t k = 0; k < r.checkpoints.size(); ++k) {
    r.residual_series.push_back(sup_residual(r, k, r.translation_estimates[k]));
    r.phi_residual_series.push_back(sup_residual(r, k, cplx{0.0, r.b_estimate}));
  }
  fill_deltas(r);
  return r;
}

ConjugationResult baker_pommerenke_normalized(const MapSpec& spec, const ConjugationOptions& opts) {
  ConjugationResult r;
  r.kind = ConjugationKind::baker_pommerenke;
  r.basepoint = opts.basepoint;
  check_inputs(spec, opts, r.grid, r.checkpoints);
  if (opts.check_preconditions) {
    require_parabolic(spec, opts);
    const StepSeries steps = step_series(iterate(spec, HalfPlanePoint(opts.basepoint), opts.precondition.n_max,
                                                 opts.precondition.stop));
    if (steps.verdict != StepVerdict::zero_step) {
      throw PreconditionError(fmt::format("basepoint orbit step verdict is {}, not zero_step",
                                          to_string(steps.verdict)));
    }
  }

  const Samples base = sample_orbit(spec, r.basepoint, r.checkpoints);
  for (std::size_t k = 0; k < r.checkpoints.size(); ++k) {
    if (base.next[k] == base.at[k]) {
      throw EstimationError(fmt::format("z_(n+1) = z_n at n = {}; normalization is degenerate", r.checkpoints[k]));
    }
  }
  fill_values(r, spec, [&](std::size_t k, cplx w) { return (w - base.at[k]) / (base.next[k] - base.at[k]); });

  for (std::size_t k = 0; k < r.checkpoints.size(); ++k) r.residual_series.push_back(sup_residual(r, k, 1.0));
  fill_deltas(r);
  return r;
}

std::string conjugation_report(const ConjugationResult& r) {
  std::string out = fmt::format("kind: {}\nbasepoint: {:.17g}{:+.17g}i\ngrid points: {}\n", to_string(r.kind),
                                r.basepoint.real(), r.basepoint.imag(), r.grid.size());
  if (r.kind == ConjugationKind::pommerenke) out += fmt::format("b_estimate: {:.17g}\n", r.b_estimate);
  out += fmt::format("{:>10}  {:>24}  {:>24}  {:>24}  {:>24}  {:>24}\n", "n", "residual", "phi_residual",
                     "translation_re", "translation_im", "delta_next");
  for (std::size_t k = 0; k < r.checkpoints.size(); ++k) {
    const std::string phi = k < r.phi_residual_series.size() ? fmt::format("{:.17g}", r.phi_residual_series[k]) : "-";
    const std::string delta = k < r.deltas.size() ? fmt::format("{:.17g}", r.deltas[k]) : "-";
    out += fmt::format("{:>10}  {:>24.17g}  {:>24}  {:>24.17g}  {:>24.17g}  {:>24}\n", r.checkpoints[k],
                       r.residual_series[k], phi, r.translation_estimates[k].real(),
                       r.translation_estimates[k].imag(), delta);
  }
  return out;
}

}  // namespace hdyn
