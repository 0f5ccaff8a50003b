#pragma once

// Domain models (unit disk, right half-plane, unit ball, Siegel half-plane),
// the fixed Cayley transforms between them, pseudo-hyperbolic distances and
// the pointwise boundary-approach quotients.
//
// Conventions:
//   <a, b>      = sum_i a_i * conj(b_i)
//   C(z)        = (z - 1) / (z + 1)                       H   -> D
//   Psi(z1, w)  = ((1 + z1) / (1 - z1), w / (1 - z1))     B^N -> H^N
// so that the boundary point infinity of H / H^N corresponds to 1 / (1, 0).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace hdyn {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

enum class Model { disk, halfplane, ball, siegel };

std::string_view to_string(Model m);
Model model_from_string(std::string_view s);

cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm_sq(std::span<const cplx> a);
/// Im <a, b> with error-free products and compensated summation.
double im_inner(std::span<const cplx> a, std::span<const cplx> b);

/// Point of the open unit disk.
class DiskPoint {
 public:
  explicit DiskPoint(cplx z);
  /// Point 1 - q, keeping q exactly; accurate near the boundary point 1.
  static DiskPoint from_complement(cplx q);
  cplx z() const noexcept { return z_; }
  /// 1 - z
  cplx complement() const noexcept { return c_; }

 private:
  cplx z_;
  cplx c_;
};

/// Point of the right half-plane Re z > 0.
class HalfPlanePoint {
 public:
  explicit HalfPlanePoint(cplx z);
  cplx z() const noexcept { return z_; }

 private:
  cplx z_;
};

/// Point Z = (z1, w) of the open unit ball in C^N, N = 1 + dim(w).
class BallPoint {
 public:
  explicit BallPoint(cplx z1, CVector w = {});
  explicit BallPoint(CVector coords);

  cplx z1() const noexcept { return coords_.front(); }
  std::span<const cplx> w() const noexcept { return std::span<const cplx>(coords_).subspan(1); }
  std::span<const cplx> coords() const noexcept { return coords_; }
  std::size_t dim() const noexcept { return coords_.size(); }
  double norm_sq() const noexcept { return norm_sq_; }

 private:
  CVector coords_;
  double norm_sq_;
};

/// Point (z, w) of the Siegel half-plane Re z > |w|^2.
///
/// Stored in horospherical form: height = Re z - |w|^2 (> 0), t = Im z and w.
/// Heisenberg translations leave the height unchanged, so orbits of
/// automorphisms keep it exact instead of recovering it from two large,
/// nearly equal numbers.
class SiegelPoint {
 public:
  explicit SiegelPoint(cplx z, CVector w = {});
  /// `w_lo`, if given, is a low-order correction carried alongside w so that
  /// long Heisenberg orbits keep w = w0 + n a without accumulated rounding.
  static SiegelPoint from_horospherical(double height, double t, CVector w, CVector w_lo = {});

  cplx z() const noexcept { return {re_z_, t_}; }
  std::span<const cplx> w() const noexcept { return w_; }
  /// Empty, or the same size as w().
  std::span<const cplx> w_lo() const noexcept { return w_lo_; }
  std::size_t dim() const noexcept { return 1 + w_.size(); }
  double height() const noexcept { return height_; }

 private:
  SiegelPoint() = default;
  double height_ = 0.0;
  double t_ = 0.0;
  double re_z_ = 0.0;
  CVector w_;
  CVector w_lo_;
};

/// A point of the boundary sphere, or the point at infinity of H / H^N
/// (which is (1, 0, ..., 0) in ball coordinates).
class BoundaryPoint {
 public:
  static BoundaryPoint infinity() { return BoundaryPoint(); }
  /// Renormalizes `x` to unit length; throws DomainError for a zero vector.
  static BoundaryPoint unit(CVector x);

  bool is_infinity() const noexcept { return infinity_; }
  /// Unit vector in ball coordinates. Infinity maps to e1 of the given dimension.
  CVector ball_vector(std::size_t dim) const;

 private:
  BoundaryPoint() = default;
  bool infinity_ = true;
  CVector x_;
};

/// Any point of any model.
using Point = std::variant<DiskPoint, HalfPlanePoint, BallPoint, SiegelPoint>;

Model model_of(const Point& p);
std::size_t dim_of(const Point& p);

/// Raw coordinates: [z] for the planar models, [z1, w...] for the ball and
/// [z, w...] for the Siegel half-plane.
CVector coords_of(const Point& p);
/// Inverse of coords_of; throws DomainError outside the model.
Point point_from_coords(Model m, std::span<const cplx> coords);

/// Value of the model-defining functional: 1 - |z|^2, Re z, 1 - |Z|^2 or
/// Re z - |w|^2. Positive exactly on the model.
double domain_margin(const Point& p);

// Cayley transforms.
DiskPoint cayley_halfplane_to_disk(const HalfPlanePoint& p);
HalfPlanePoint cayley_disk_to_halfplane(const DiskPoint& u);
SiegelPoint cayley_ball_to_siegel(const BallPoint& Z);
BallPoint cayley_siegel_to_ball(const SiegelPoint& P);

/// Ball-coordinate vector of any point; planar models become 1-vectors and
/// the half-plane models are sent through the Cayley transform.
CVector ball_coords(const Point& p);

// Pseudo-hyperbolic distances.
double pdist_disk(const DiskPoint& z, const DiskPoint& w);
double pdist_halfplane(const HalfPlanePoint& z, const HalfPlanePoint& w);
/// d^2 = 1 - (1 - |Z|^2)(1 - |W|^2) / |1 - <Z, W>|^2, evaluated as a ratio of
/// nonnegative terms.
double pdist_ball(const BallPoint& Z, const BallPoint& W);
/// 1 - d^2 = 4 (Re z - |w|^2)(Re z' - |w'|^2) / |z + conj(z') - 2 <w, w'>|^2.
double pdist_siegel(const SiegelPoint& P, const SiegelPoint& Q);
/// Model-native distance; throws ModelMismatchError for mixed models.
double pdist(const Point& a, const Point& b);

/// Boundary-gap quantities of a point relative to a boundary point X, all
/// in ball coordinates:
///   one_minus_proj = 1 - <Z, X>
///   gap_sq         = 1 - |Z|^2
///   proj_gap_sq    = 1 - |<Z, X>|^2
///   orth_norm_sq   = |Z - <Z, X> X|^2
/// For half-plane / Siegel points (X = infinity) these come from exact
/// identities in half-plane coordinates, e.g. 1 - |z1|^2 = 4 Re z / |z + 1|^2.
struct ApproachSample {
  cplx one_minus_proj;
  double gap_sq;
  double proj_gap_sq;
  double orth_norm_sq;
  double norm;      // |Z|
  double proj_abs;  // |<Z, X>|
};

ApproachSample approach_sample(const BallPoint& Z, const BoundaryPoint& X);
ApproachSample approach_sample(const SiegelPoint& P);
ApproachSample approach_sample(const HalfPlanePoint& p);
/// Dispatches on the model. Half-plane models require X = infinity; planar
/// disk points are treated as 1-dimensional ball points.
ApproachSample approach_sample(const Point& p, const BoundaryPoint& X);

/// 1 - |Z|, computed from gap_sq.
double boundary_gap(const ApproachSample& s);

/// Koranyi quotient |1 - <Z, X>| / (1 - |Z|); Z is in K(X, M) iff it is < M.
double koranyi_quotient(const ApproachSample& s);
double koranyi_quotient(const BallPoint& Z, const BoundaryPoint& X);

/// |Z - <Z, X> X|^2 / (1 - |<Z, X> X|^2).
double special_ratio(const ApproachSample& s);
double special_ratio(const BallPoint& Z, const BoundaryPoint& X);

/// |1 - <Z, X>| / (1 - |<Z, X>|); bounded iff the projection is non-tangential.
double projection_nt_quotient(const ApproachSample& s);
double projection_nt_quotient(const BallPoint& Z, const BoundaryPoint& X);

/// |X - Z| / (1 - |Z|); bounded iff Z approaches X non-tangentially.
double stolz_quotient(const ApproachSample& s);
double stolz_quotient(const BallPoint& Z, const BoundaryPoint& X);

/// Arg(1 - <Z, X>) in (-pi, pi].
double tangency_angle(const ApproachSample& s);
double tangency_angle(const BallPoint& Z, const BoundaryPoint& X);

}  // namespace hdyn
