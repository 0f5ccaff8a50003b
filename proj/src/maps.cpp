#include "hdyn/maps.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "hdyn/errors.hpp"

namespace hdyn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void throw_outside(std::string_view what, double margin) {
  throw EvaluationError(std::string(what) + " left its model (margin " + std::to_string(margin) + ")",
                        margin);
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

[[noreturn]] void throw_non_finite(std::string_view what) {
  throw EvaluationError(std::string(what) + " is not finite", std::numeric_limits<double>::quiet_NaN());
}

DiskPoint disk_image(cplx z) {
  if (!finite(z)) throw_non_finite("disk image");
  if (!(std::norm(z) < 1.0)) throw_outside("disk image", 1.0 - std::norm(z));
  return DiskPoint(z);
}

HalfPlanePoint halfplane_image(cplx z) {
  if (!finite(z)) throw_non_finite("half-plane image");
  if (!(z.real() > 0.0)) throw_outside("half-plane image", z.real());
  return HalfPlanePoint(z);
}

// (x + y + carry) as hi + lo, with x + y split exactly.
std::pair<double, double> two_sum(double x, double y, double carry) {
  const double s = x + y;
  const double bb = s - x;
  const double e = (x - (s - bb)) + (y - bb) + carry;
  const double hi = s + e;
  return {hi, e - (hi - s)};
}

SiegelPoint siegel_image(double height, double t, CVector w, CVector w_lo = {}) {
  if (!std::isfinite(height) || !std::isfinite(t)) throw_non_finite("Siegel image");
  for (cplx c : w) {
    if (!finite(c)) throw_non_finite("Siegel image");
  }
  if (!(height > 0.0)) throw_outside("Siegel image", height);
  return SiegelPoint::from_horospherical(height, t, std::move(w), std::move(w_lo));
}

template <class T>
const T& expect(const Point& p, std::string_view family) {
  const T* q = std::get_if<T>(&p);
  if (q == nullptr) {
    throw ModelMismatchError(std::string(family) + " cannot be applied to a " +
                             std::string(to_string(model_of(p))) + " point");
  }
  return *q;
}

Point apply(const DiskMoebius& m, const Point& p) {
  const cplx z = expect<DiskPoint>(p, "DiskMoebius").z();
  const cplx rot = std::polar(1.0, m.theta);
  return disk_image(rot * (z - m.a) / (1.0 - std::conj(m.a) * z));
}

Point apply(const HalfplaneAffine& m, const Point& p) {
  const cplx z = expect<HalfPlanePoint>(p, "HalfplaneAffine").z();
  return halfplane_image(m.lambda * z + m.b);
}

Point apply(const HalfplanePerturbed& m, const Point& p) {
  const cplx z = expect<HalfPlanePoint>(p, "HalfplanePerturbed").z();
  return halfplane_image(z + m.b + m.c / (z + 1.0));
}

Point apply(const SiegelTranslation& m, const Point& p) {
  const auto& q = expect<SiegelPoint>(p, "SiegelTranslation");
  return siegel_image(q.height() + m.b.real(), q.z().imag() + m.b.imag(), CVector(q.w().begin(), q.w().end()),
                      CVector(q.w_lo().begin(), q.w_lo().end()));
}

Point apply(const HeisenbergTranslation& m, const Point& p) {
  const auto& q = expect<SiegelPoint>(p, "HeisenbergTranslation");
  if (q.w().size() != m.a.size()) {
    throw ModelMismatchError("HeisenbergTranslation of dimension " + std::to_string(m.a.size() + 1) +
                             " applied to a point of dimension " + std::to_string(q.dim()));
  }
  // Re z - |w|^2 is invariant; only the Heisenberg coordinates move.
  // w is kept as hi + lo so that w_n = w_0 + n a holds to twice working precision.
  const auto hi = q.w();
  const auto lo = q.w_lo();
  double twist = im_inner(hi, m.a);
  if (!lo.empty()) twist += im_inner(lo, m.a);
  const double t = q.z().imag() + (m.b + 2.0 * twist);
  CVector w(hi.size()), w_lo(hi.size());
  for (std::size_t i = 0; i < hi.size(); ++i) {
    const cplx l = lo.empty() ? cplx{0.0, 0.0} : lo[i];
    const auto [re, re_lo] = two_sum(hi[i].real(), m.a[i].real(), l.real());
    const auto [im, im_lo] = two_sum(hi[i].imag(), m.a[i].imag(), l.imag());
    w[i] = {re, im};
    w_lo[i] = {re_lo, im_lo};
  }
  return siegel_image(q.height(), t, std::move(w), std::move(w_lo));
  return siegel_image(q.height(), t, std::move(w));
}

Point apply(const Composition& m, const Point& p) {
  Point cur = p;
  for (auto it = m.maps.rbegin(); it != m.maps.rend(); ++it) cur = evaluate(*it, cur);
  return cur;
}

Point apply(const Conjugated& m, const Point& p) {
  try {
    switch (model_of(p)) {
      case Model::disk: {
        const Point inner_pt = cayley_disk_to_halfplane(std::get<DiskPoint>(p));
        const Point img = evaluate(*m.inner, inner_pt);
        return cayley_halfplane_to_disk(std::get<HalfPlanePoint>(img));
      }
      case Model::ball: {
        const Point inner_pt = cayley_ball_to_siegel(std::get<BallPoint>(p));
        const Point img = evaluate(*m.inner, inner_pt);
        return cayley_siegel_to_ball(std::get<SiegelPoint>(img));
      }
      case Model::halfplane: {
        const Point inner_pt = cayley_halfplane_to_disk(std::get<HalfPlanePoint>(p));
        const Point img = evaluate(*m.inner, inner_pt);
        return cayley_disk_to_halfplane(std::get<DiskPoint>(img));
      }
      case Model::siegel: {
        const Point inner_pt = cayley_siegel_to_ball(std::get<SiegelPoint>(p));
        const Point img = evaluate(*m.inner, inner_pt);
        return cayley_ball_to_siegel(std::get<BallPoint>(img));
      }
    }
  } catch (const DomainError& e) {
    throw EvaluationError(std::string("Cayley transform failed: ") + e.what(),
                          std::numeric_limits<double>::quiet_NaN());
  }
  throw ModelMismatchError("unknown model");
}

Model conjugated_model(Model inner, CayleyTag by) {
  if (by == CayleyTag::to_disk) {
    if (inner == Model::halfplane) return Model::disk;
    if (inner == Model::siegel) return Model::ball;
  } else {
    if (inner == Model::disk) return Model::halfplane;
    if (inner == Model::ball) return Model::siegel;
  }
  throw ModelMismatchError("Cayley tag '" + std::string(to_string(by)) + "' cannot wrap a " +
                           std::string(to_string(inner)) + " map");
}

// Family rules; appends a note per violated constraint.
bool analytic_check(const MapSpec& spec, std::vector<std::string>& notes) {
  return std::visit(
      overloaded{
          [&](const DiskMoebius& m) {
            const bool ok = std::abs(m.a) < 1.0 && std::isfinite(m.theta);
            if (!ok) notes.emplace_back("DiskMoebius needs |a| < 1");
            return ok;
          },
          [&](const HalfplaneAffine& m) {
            bool ok = true;
            if (!(m.lambda > 0.0)) notes.emplace_back("HalfplaneAffine needs lambda > 0"), ok = false;
            if (!(m.b.real() >= 0.0)) notes.emplace_back("HalfplaneAffine needs Re b >= 0"), ok = false;
            return ok;
          },
          [&](const HalfplanePerturbed& m) {
            bool ok = true;
            if (!(m.b.real() >= 0.0)) notes.emplace_back("HalfplanePerturbed needs Re b >= 0"), ok = false;
            if (!(m.c.real() >= 0.0)) notes.emplace_back("HalfplanePerturbed needs Re c >= 0"), ok = false;
            // c / (z + 1) sweeps the disk |zeta - c/2| < |c|/2, so
            // inf Re f(z) - Re z = Re b + (Re c - |c|) / 2.
            if (ok && m.b.real() + 0.5 * (m.c.real() - std::abs(m.c)) < 0.0) {
              notes.emplace_back("HalfplanePerturbed needs Re b >= (|c| - Re c) / 2");
              ok = false;
            }
            return ok;
          },
          [&](const SiegelTranslation& m) {
            const bool ok = m.b.real() >= 0.0 && std::isfinite(m.b.imag());
            if (!ok) notes.emplace_back("SiegelTranslation needs Re b >= 0");
            return ok;
          },
          [&](const HeisenbergTranslation& m) {
            bool ok = std::isfinite(m.b);
            for (cplx c : m.a) ok = ok && std::isfinite(c.real()) && std::isfinite(c.imag());
            if (!ok) notes.emplace_back("HeisenbergTranslation parameters must be finite");
            return ok;
          },
          [&](const Composition& m) {
            bool ok = true;
            for (const auto& f : m.maps) ok = analytic_check(f, notes) && ok;
            return ok;
          },
          [&](const Conjugated& m) { return analytic_check(*m.inner, notes); },
      },
      spec.family());
}

double log_uniform(std::mt19937_64& rng, double lo_exp, double hi_exp) {
  std::uniform_real_distribution<double> u(lo_exp, hi_exp);
  return std::pow(10.0, u(rng));
}

Point sample_point(Model m, std::size_t dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto signed_log = [&] { return (u01(rng) < 0.5 ? -1.0 : 1.0) * log_uniform(rng, -3.0, 3.0); };
  switch (m) {
    case Model::disk: {
      const double r = 1.0 - log_uniform(rng, -6.0, 0.0) * 0.999;
      return DiskPoint(std::polar(r, 2.0 * M_PI * u01(rng)));
    }
    case Model::halfplane: return HalfPlanePoint(cplx{log_uniform(rng, -3.0, 3.0), signed_log()});
    case Model::ball: {
      CVector c(dim);
      for (cplx& x : c) x = cplx{gauss(rng), gauss(rng)};
      const double n = std::sqrt(norm_sq(c));
      const double r = 1.0 - log_uniform(rng, -6.0, 0.0) * 0.999;
      for (cplx& x : c) x *= r / n;
      return BallPoint(std::move(c));
    }
    case Model::siegel: {
      CVector w(dim - 1);
      const double scale = 3.0 * u01(rng);
      for (cplx& x : w) x = scale * cplx{gauss(rng), gauss(rng)};
      return SiegelPoint::from_horospherical(log_uniform(rng, -3.0, 3.0), signed_log(), std::move(w));
    }
  }
  throw ModelMismatchError("unknown model");
}

}  // namespace

std::string_view to_string(CayleyTag t) { return t == CayleyTag::to_disk ? "cayley" : "inverse_cayley"; }

CayleyTag cayley_tag_from_string(std::string_view s) {
  if (s == "cayley") return CayleyTag::to_disk;
  if (s == "inverse_cayley") return CayleyTag::to_halfplane;
  throw ConfigError("unknown Cayley tag '" + std::string(s) + "'");
}

MapSpec MapSpec::disk_moebius(cplx a, double theta) { return {Model::disk, DiskMoebius{a, theta}}; }

MapSpec MapSpec::halfplane_affine(double lambda, cplx b) {
  return {Model::halfplane, HalfplaneAffine{lambda, b}};
}

MapSpec MapSpec::halfplane_perturbed(cplx b, cplx c) {
  return {Model::halfplane, HalfplanePerturbed{b, c}};
}

MapSpec MapSpec::siegel_translation(cplx b) { return {Model::siegel, SiegelTranslation{b}}; }

MapSpec MapSpec::heisenberg_translation(CVector a, double b) {
  return {Model::siegel, HeisenbergTranslation{std::move(a), b}};
}

MapSpec MapSpec::composition(std::vector<MapSpec> maps) {
  if (maps.empty()) throw ConfigError("composition needs at least one map");
  const Model m = maps.front().model();
  std::vector<MapSpec> flat;
  std::optional<std::size_t> dim;
  for (auto& f : maps) {
    if (f.model() != m) {
      throw ModelMismatchError("composition mixes " + std::string(to_string(m)) + " and " +
                               std::string(to_string(f.model())) + " maps");
    }
    if (auto d = dimension(f)) {
      if (dim && *dim != *d) throw ModelMismatchError("composition mixes dimensions");
      dim = d;
    }
    if (auto* c = std::get_if<Composition>(&f.family_)) {
      for (auto& g : c->maps) flat.push_back(std::move(g));
    } else {
      flat.push_back(std::move(f));
    }
  }
  return {m, Composition{std::move(flat)}};
}

MapSpec MapSpec::conjugated(MapSpec inner, CayleyTag by) {
  const Model m = conjugated_model(inner.model(), by);
  return {m, Conjugated{std::make_shared<const MapSpec>(std::move(inner)), by}};
}

std::string MapSpec::family_name() const {
  return std::visit(overloaded{
                        [](const DiskMoebius&) { return std::string("disk_moebius"); },
                        [](const HalfplaneAffine&) { return std::string("halfplane_affine"); },
                        [](const HalfplanePerturbed&) { return std::string("halfplane_perturbed"); },
                        [](const SiegelTranslation&) { return std::string("siegel_translation"); },
                        [](const HeisenbergTranslation&) { return std::string("heisenberg_translation"); },
                        [](const Composition&) { return std::string("composition"); },
                        [](const Conjugated&) { return std::string("conjugated"); },
                    },
                    family_);
}

std::optional<std::size_t> dimension(const MapSpec& spec) {
  return std::visit(overloaded{
                        [](const DiskMoebius&) -> std::optional<std::size_t> { return 1; },
                        [](const HalfplaneAffine&) -> std::optional<std::size_t> { return 1; },
                        [](const HalfplanePerturbed&) -> std::optional<std::size_t> { return 1; },
                        [](const SiegelTranslation&) -> std::optional<std::size_t> { return std::nullopt; },
                        [](const HeisenbergTranslation& m) -> std::optional<std::size_t> {
                          return m.a.size() + 1;
                        },
                        [](const Composition& m) -> std::optional<std::size_t> {
                          for (const auto& f : m.maps) {
                            if (auto d = dimension(f)) return d;
                          }
                          return std::nullopt;
                        },
                        [](const Conjugated& m) { return dimension(*m.inner); },
                    },
                    spec.family());
}

Point evaluate(const MapSpec& spec, const Point& p) {
  if (model_of(p) != spec.model()) {
    throw ModelMismatchError(spec.family_name() + " acts on the " + std::string(to_string(spec.model())) +
                             " model, got a " + std::string(to_string(model_of(p))) + " point");
  }
  return std::visit([&](const auto& f) { return apply(f, p); }, spec.family());
}

MapSpec compose(const MapSpec& f, const MapSpec& g) { return MapSpec::composition({f, g}); }

ValidityReport validate_self_map(const MapSpec& spec, std::size_t sample_count, std::uint64_t seed,
                                 std::optional<std::size_t> dim) {
  ValidityReport r;
  r.analytic_ok = analytic_check(spec, r.notes);
  std::size_t n = dim.value_or(dimension(spec).value_or(2));
  if (spec.model() == Model::disk || spec.model() == Model::halfplane) n = 1;

  std::mt19937_64 rng(seed);
  r.worst_margin = std::numeric_limits<double>::infinity();
  r.sampled_ok = true;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const Point p = sample_point(spec.model(), n, rng);
    double margin;
    try {
      margin = domain_margin(evaluate(spec, p));
    } catch (const EvaluationError& e) {
      margin = e.margin();
    }
    if (!(margin > 0.0)) r.sampled_ok = false;
    if (std::isnan(margin) || margin < r.worst_margin) r.worst_margin = margin;
    ++r.samples;
  }
  if (!r.sampled_ok) r.notes.emplace_back("sampled image left the model");
  return r;
}

bool is_automorphism(const MapSpec& spec) {
  return std::visit(overloaded{
                        [](const DiskMoebius& m) { return std::abs(m.a) < 1.0; },
                        [](const HalfplaneAffine& m) { return m.lambda > 0.0 && m.b.real() == 0.0; },
                        [](const HalfplanePerturbed& m) {
                          return m.c == cplx{0.0, 0.0} && m.b.real() == 0.0;
                        },
                        [](const SiegelTranslation& m) { return m.b.real() == 0.0; },
                        [](const HeisenbergTranslation&) { return true; },
                        [](const Composition& m) {
                          for (const auto& f : m.maps) {
                            if (!is_automorphism(f)) return false;
                          }
                          return true;
                        },
                        [](const Conjugated& m) { return is_automorphism(*m.inner); },
                    },
                    spec.family());
}

}  // namespace hdyn
