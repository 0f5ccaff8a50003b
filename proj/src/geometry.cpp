#include "hdyn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hdyn/errors.hpp"

namespace hdyn {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool all_finite(std::span<const cplx> v) {
  return std::all_of(v.begin(), v.end(), [](cplx z) { return finite(z); });
}

std::string fmt_c(cplx z) {
  return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
}

CVector boundary_vector(const BoundaryPoint& X, std::size_t dim) {
  CVector x = X.ball_vector(dim);
  if (x.size() != dim) {
    throw DomainError("boundary point has dimension " + std::to_string(x.size()) +
                      ", point has dimension " + std::to_string(dim));
  }
  return x;
}

CVector prepend(cplx head, CVector tail) {
  tail.insert(tail.begin(), head);
  return tail;
}

}  // namespace

std::string_view to_string(Model m) {
  switch (m) {
    case Model::disk: return "disk";
    case Model::halfplane: return "halfplane";
    case Model::ball: return "ball";
    case Model::siegel: return "siegel";
  }
  return "?";
}

Model model_from_string(std::string_view s) {
  if (s == "disk") return Model::disk;
  if (s == "halfplane") return Model::halfplane;
  if (s == "ball") return Model::ball;
  if (s == "siegel") return Model::siegel;
  throw ConfigError("unknown model '" + std::string(s) + "'");
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
  return acc;
}

double norm_sq(std::span<const cplx> a) {
  double acc = 0.0;
  for (cplx z : a) acc += std::norm(z);
  return acc;
}

double im_inner(std::span<const cplx> a, std::span<const cplx> b) {
  // sum of a.im b.re - a.re b.im, each product split as p + e exactly
  double sum = 0.0, err = 0.0;
  const auto add = [&](double x) {
    const double t = sum + x;
    err += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = a[i].imag() * b[i].real();
    const double q = -a[i].real() * b[i].imag();
    add(p);
    add(q);
    err += std::fma(a[i].imag(), b[i].real(), -p) + std::fma(-a[i].real(), b[i].imag(), -q);
  }
  return sum + err;
}

DiskPoint::DiskPoint(cplx z) : z_(z), c_(1.0 - z) {
  if (!finite(z) || !(std::norm(z) < 1.0)) {
    throw DomainError("point " + fmt_c(z) + " is not in the open unit disk");
  }
}

DiskPoint DiskPoint::from_complement(cplx q) {
  DiskPoint p(1.0 - q);
  // 1 - |1 - q|^2 = 2 Re q - |q|^2 > 0
  if (!(2.0 * q.real() - std::norm(q) > 0.0)) {
    throw DomainError("point 1 - " + fmt_c(q) + " is not in the open unit disk");
  }
  p.c_ = q;
  return p;
}

HalfPlanePoint::HalfPlanePoint(cplx z) : z_(z) {
  if (!finite(z) || !(z.real() > 0.0)) {
    throw DomainError("point " + fmt_c(z) + " is not in the right half-plane");
  }
}

BallPoint::BallPoint(cplx z1, CVector w) : BallPoint(prepend(z1, std::move(w))) {}

BallPoint::BallPoint(CVector coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw DomainError("ball point needs at least one coordinate");
  norm_sq_ = hdyn::norm_sq(coords_);
  if (!all_finite(coords_) || !(norm_sq_ < 1.0)) {
    throw DomainError("point is not in the open unit ball (|Z|^2 = " +
                      std::to_string(norm_sq_) + ")");
  }
}

SiegelPoint::SiegelPoint(cplx z, CVector w) {
  if (!finite(z) || !all_finite(w)) throw DomainError("non-finite Siegel coordinates");
  const double h = z.real() - hdyn::norm_sq(w);
  if (!(h > 0.0)) {
    throw DomainError("point " + fmt_c(z) + " is not in the Siegel half-plane (Re z - |w|^2 = " +
                      std::to_string(h) + ")");
  }
  height_ = h;
  t_ = z.imag();
  re_z_ = z.real();
  w_ = std::move(w);
}

SiegelPoint SiegelPoint::from_horospherical(double height, double t, CVector w, CVector w_lo) {
  if (!w_lo.empty() && w_lo.size() != w.size()) throw DomainError("low-order part has the wrong size");
  if (!std::isfinite(height) || !std::isfinite(t) || !all_finite(w) || !all_finite(w_lo)) {
    throw DomainError("non-finite Siegel coordinates");
  }
  if (!(height > 0.0)) {
    throw DomainError("Siegel height " + std::to_string(height) + " is not positive");
  }
  SiegelPoint p;
  p.height_ = height;
  p.t_ = t;
  p.re_z_ = height + hdyn::norm_sq(w);
  p.w_ = std::move(w);
  p.w_lo_ = std::move(w_lo);
  return p;
}

BoundaryPoint BoundaryPoint::unit(CVector x) {
  const double n = std::sqrt(hdyn::norm_sq(x));
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("boundary point needs a nonzero vector");
  for (cplx& c : x) c /= n;
  BoundaryPoint b;
  b.infinity_ = false;
  b.x_ = std::move(x);
  return b;
}

CVector BoundaryPoint::ball_vector(std::size_t dim) const {
  if (!infinity_) return x_;
  CVector e(dim, cplx{0.0, 0.0});
  if (dim > 0) e[0] = 1.0;
  return e;
}

Model model_of(const Point& p) {
  return std::visit(
      [](const auto& q) -> Model {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, DiskPoint>) return Model::disk;
        else if constexpr (std::is_same_v<T, HalfPlanePoint>) return Model::halfplane;
        else if constexpr (std::is_same_v<T, BallPoint>) return Model::ball;
        else return Model::siegel;
      },
      p);
}

std::size_t dim_of(const Point& p) {
  if (const auto* b = std::get_if<BallPoint>(&p)) return b->dim();
  if (const auto* s = std::get_if<SiegelPoint>(&p)) return s->dim();
  return 1;
}

CVector coords_of(const Point& p) {
  return std::visit(
      [](const auto& q) -> CVector {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, BallPoint>) {
          return CVector(q.coords().begin(), q.coords().end());
        } else if constexpr (std::is_same_v<T, SiegelPoint>) {
          CVector c{q.z()};
          c.insert(c.end(), q.w().begin(), q.w().end());
          return c;
        } else {
          return CVector{q.z()};
        }
      },
      p);
}

Point point_from_coords(Model m, std::span<const cplx> c) {
  if (c.empty()) throw DomainError("empty coordinate vector");
  switch (m) {
    case Model::disk:
      if (c.size() != 1) throw DomainError("disk points have one coordinate");
      return DiskPoint(c[0]);
    case Model::halfplane:
      if (c.size() != 1) throw DomainError("half-plane points have one coordinate");
      return HalfPlanePoint(c[0]);
    case Model::ball: return BallPoint(CVector(c.begin(), c.end()));
    case Model::siegel: return SiegelPoint(c[0], CVector(c.begin() + 1, c.end()));
  }
  throw DomainError("unknown model");
}

double domain_margin(const Point& p) {
  return std::visit(
      [](const auto& q) -> double {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, DiskPoint>) return 1.0 - std::norm(q.z());
        else if constexpr (std::is_same_v<T, HalfPlanePoint>) return q.z().real();
        else if constexpr (std::is_same_v<T, BallPoint>) return 1.0 - q.norm_sq();
        else return q.height();
      },
      p);
}

DiskPoint cayley_halfplane_to_disk(const HalfPlanePoint& p) {
  return DiskPoint::from_complement(2.0 / (p.z() + 1.0));
}

HalfPlanePoint cayley_disk_to_halfplane(const DiskPoint& u) {
  const cplx q = u.complement();
  return HalfPlanePoint((2.0 - q) / q);
}

SiegelPoint cayley_ball_to_siegel(const BallPoint& Z) {
  const cplx z1 = Z.z1();
  const cplx d = 1.0 - z1;
  if (d == cplx{0.0, 0.0}) throw DomainError("z1 = 1 has no Siegel image");
  CVector w(Z.w().begin(), Z.w().end());
  for (cplx& c : w) c /= d;
  // Re z - |w|^2 = (1 - |Z|^2) / |1 - z1|^2
  const double height = (1.0 - Z.norm_sq()) / std::norm(d);
  const double t = ((1.0 + z1) / d).imag();
  return SiegelPoint::from_horospherical(height, t, std::move(w));
}

BallPoint cayley_siegel_to_ball(const SiegelPoint& P) {
  const cplx zp1 = P.z() + 1.0;
  CVector c;
  c.reserve(P.dim());
  c.push_back((P.z() - 1.0) / zp1);
  for (cplx wi : P.w()) c.push_back(2.0 * wi / zp1);
  return BallPoint(std::move(c));
}

CVector ball_coords(const Point& p) {
  return std::visit(
      [](const auto& q) -> CVector {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, DiskPoint>) {
          return CVector{q.z()};
        } else if constexpr (std::is_same_v<T, BallPoint>) {
          return CVector(q.coords().begin(), q.coords().end());
        } else if constexpr (std::is_same_v<T, HalfPlanePoint>) {
          return CVector{(q.z() - 1.0) / (q.z() + 1.0)};
        } else {
          const cplx zp1 = q.z() + 1.0;
          CVector c{(q.z() - 1.0) / zp1};
          for (cplx wi : q.w()) c.push_back(2.0 * wi / zp1);
          return c;
        }
      },
      p);
}

double pdist_disk(const DiskPoint& z, const DiskPoint& w) {
  // with p = 1 - z, q = 1 - w: 1 - z conj(w) = p + conj(q) - p conj(q)
  const cplx p = z.complement();
  const cplx q = w.complement();
  const double d = std::abs(q - p) / std::abs(p + std::conj(q) - p * std::conj(q));
  return std::min(d, std::nextafter(1.0, 0.0));
}

double pdist_halfplane(const HalfPlanePoint& z, const HalfPlanePoint& w) {
  return std::abs(z.z() - w.z()) / std::abs(z.z() + std::conj(w.z()));
}

double pdist_ball(const BallPoint& Z, const BallPoint& W) {
  if (Z.dim() != W.dim()) throw DomainError("ball points of different dimension");
  const auto a = Z.coords();
  const auto b = W.coords();
  // |1 - <Z,W>|^2 - (1 - |Z|^2)(1 - |W|^2) = |Z - W|^2 - sum_{i<j} |Z_i W_j - Z_j W_i|^2
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += std::norm(a[i] - b[i]);
  double lagrange = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) lagrange += std::norm(a[i] * b[j] - a[j] * b[i]);
  }
  const double num = std::max(0.0, diff - lagrange);
  const double den = std::norm(1.0 - inner(a, b));
  return std::min(std::sqrt(num / den), std::nextafter(1.0, 0.0));
}

double pdist_siegel(const SiegelPoint& P, const SiegelPoint& Q) {
  if (P.dim() != Q.dim()) throw DomainError("Siegel points of different dimension");
  const double g = P.height();
  const double h = Q.height();
  const auto w = P.w();
  const auto v = Q.w();
  const auto wl = P.w_lo();
  const auto vl = Q.w_lo();
  CVector dw(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    dw[i] = w[i] - v[i];
    if (!wl.empty()) dw[i] += wl[i];
    if (!vl.empty()) dw[i] -= vl[i];
  }
  const double dw2 = norm_sq(dw);
  // z + conj(z') - 2<w,w'> = A + iB
  const double A = g + h + dw2;
  double twist = im_inner(w, dw);
  if (!wl.empty()) twist += im_inner(wl, dw);
  const double B = (P.z().imag() - Q.z().imag()) + 2.0 * twist;
  const double num = (g - h) * (g - h) + dw2 * (2.0 * (g + h) + dw2) + B * B;
  const double den = A * A + B * B;
  return std::min(std::sqrt(num / den), std::nextafter(1.0, 0.0));
}

double pdist(const Point& a, const Point& b) {
  if (a.index() != b.index()) throw ModelMismatchError("distance between points of different models");
  switch (model_of(a)) {
    case Model::disk: return pdist_disk(std::get<DiskPoint>(a), std::get<DiskPoint>(b));
    case Model::halfplane:
      return pdist_halfplane(std::get<HalfPlanePoint>(a), std::get<HalfPlanePoint>(b));
    case Model::ball: return pdist_ball(std::get<BallPoint>(a), std::get<BallPoint>(b));
    case Model::siegel: return pdist_siegel(std::get<SiegelPoint>(a), std::get<SiegelPoint>(b));
  }
  return 0.0;
}

ApproachSample approach_sample(const BallPoint& Z, const BoundaryPoint& X) {
  const CVector x = boundary_vector(X, Z.dim());
  const auto c = Z.coords();
  const cplx p = inner(c, x);
  double orth = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) orth += std::norm(c[i] - p * x[i]);
  ApproachSample s;
  s.one_minus_proj = 1.0 - p;
  s.gap_sq = 1.0 - Z.norm_sq();
  s.proj_gap_sq = 1.0 - std::norm(p);
  s.orth_norm_sq = orth;
  s.norm = std::sqrt(Z.norm_sq());
  s.proj_abs = std::abs(p);
  return s;
}

ApproachSample approach_sample(const SiegelPoint& P) {
  const cplx z = P.z();
  const cplx zp1 = z + 1.0;
  const double m = std::norm(zp1);
  ApproachSample s;
  s.one_minus_proj = 2.0 / zp1;
  s.gap_sq = 4.0 * P.height() / m;
  s.proj_gap_sq = 4.0 * z.real() / m;
  s.orth_norm_sq = 4.0 * norm_sq(P.w()) / m;
  s.norm = std::sqrt(std::max(0.0, 1.0 - s.gap_sq));
  s.proj_abs = std::abs(z - 1.0) / std::abs(zp1);
  return s;
}

ApproachSample approach_sample(const HalfPlanePoint& p) {
  return approach_sample(SiegelPoint::from_horospherical(p.z().real(), p.z().imag(), {}));
}

ApproachSample approach_sample(const Point& p, const BoundaryPoint& X) {
  switch (model_of(p)) {
    case Model::disk:
      return approach_sample(BallPoint(std::get<DiskPoint>(p).z()), X);
    case Model::ball: return approach_sample(std::get<BallPoint>(p), X);
    case Model::halfplane:
      if (!X.is_infinity()) throw DomainError("half-plane orbits are analysed at infinity only");
      return approach_sample(std::get<HalfPlanePoint>(p));
    case Model::siegel:
      if (!X.is_infinity()) throw DomainError("Siegel orbits are analysed at infinity only");
      return approach_sample(std::get<SiegelPoint>(p));
  }
  throw DomainError("unknown model");
}

double boundary_gap(const ApproachSample& s) { return s.gap_sq / (1.0 + s.norm); }

double koranyi_quotient(const ApproachSample& s) {
  return std::abs(s.one_minus_proj) / boundary_gap(s);
}

double koranyi_quotient(const BallPoint& Z, const BoundaryPoint& X) {
  return koranyi_quotient(approach_sample(Z, X));
}

double special_ratio(const ApproachSample& s) { return s.orth_norm_sq / s.proj_gap_sq; }

double special_ratio(const BallPoint& Z, const BoundaryPoint& X) {
  return special_ratio(approach_sample(Z, X));
}

double projection_nt_quotient(const ApproachSample& s) {
  if (s.one_minus_proj == cplx{0.0, 0.0} || !(s.proj_gap_sq > 0.0)) {
    throw DomainError("projection onto X is degenerate (<Z, X> = 1)");
  }
  return std::abs(s.one_minus_proj) * (1.0 + s.proj_abs) / s.proj_gap_sq;
}

double projection_nt_quotient(const BallPoint& Z, const BoundaryPoint& X) {
  return projection_nt_quotient(approach_sample(Z, X));
}

double stolz_quotient(const ApproachSample& s) {
  return std::sqrt(std::norm(s.one_minus_proj) + s.orth_norm_sq) / boundary_gap(s);
}

double stolz_quotient(const BallPoint& Z, const BoundaryPoint& X) {
  return stolz_quotient(approach_sample(Z, X));
}

double tangency_angle(const ApproachSample& s) {
  if (s.one_minus_proj == cplx{0.0, 0.0}) throw DomainError("tangency angle undefined at <Z, X> = 1");
  return std::arg(s.one_minus_proj);
}

double tangency_angle(const BallPoint& Z, const BoundaryPoint& X) {
  return tangency_angle(approach_sample(Z, X));
}

}  // namespace hdyn
