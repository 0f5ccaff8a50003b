#pragma once

// Declarative holomorphic self-maps of the four models.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hdyn/geometry.hpp"

namespace hdyn {

class MapSpec;

/// z -> e^{i theta} (z - a) / (1 - conj(a) z) on the disk.
struct DiskMoebius {
  cplx a;
  double theta = 0.0;
};

/// z -> lambda z + b on the half-plane.
struct HalfplaneAffine {
  double lambda = 1.0;
  cplx b;
};

/// z -> z + b + c / (z + 1) on the half-plane.
struct HalfplanePerturbed {
  cplx b;
  cplx c;
};

/// (z, w) -> (z + b, w) on the Siegel half-plane (any dimension).
struct SiegelTranslation {
  cplx b;
};

/// (z, w) -> (z + 2<w, a> + |a|^2 + i b, w + a) on the Siegel half-plane.
struct HeisenbergTranslation {
  CVector a;
  double b = 0.0;
};

/// maps[0] o maps[1] o ... o maps[k-1]; the last entry is applied first.
struct Composition {
  std::vector<MapSpec> maps;
};

/// Direction of the Cayley transform that wraps an inner map.
///   to_disk:      inner lives in H / H^N, the wrapped map acts on D / B^N
///   to_halfplane: inner lives in D / B^N, the wrapped map acts on H / H^N
enum class CayleyTag { to_disk, to_halfplane };

std::string_view to_string(CayleyTag t);
CayleyTag cayley_tag_from_string(std::string_view s);

struct Conjugated {
  std::shared_ptr<const MapSpec> inner;
  CayleyTag by = CayleyTag::to_disk;
};

/// Immutable description of a holomorphic self-map. Parameter constraints are
/// not enforced at construction; validate_self_map() reports them.
class MapSpec {
 public:
  using Family = std::variant<DiskMoebius, HalfplaneAffine, HalfplanePerturbed, SiegelTranslation,
                              HeisenbergTranslation, Composition, Conjugated>;

  static MapSpec disk_moebius(cplx a, double theta);
  static MapSpec halfplane_affine(double lambda, cplx b);
  static MapSpec halfplane_perturbed(cplx b, cplx c);
  static MapSpec siegel_translation(cplx b);
  static MapSpec heisenberg_translation(CVector a, double b);
  /// Throws ModelMismatchError unless all members share a model, and
  /// ConfigError for an empty list. Nested compositions are flattened.
  static MapSpec composition(std::vector<MapSpec> maps);
  /// Throws ModelMismatchError when the tag does not fit the inner model.
  static MapSpec conjugated(MapSpec inner, CayleyTag by);

  Model model() const noexcept { return model_; }
  const Family& family() const noexcept { return family_; }
  std::string family_name() const;

 private:
  MapSpec(Model m, Family f) : model_(m), family_(std::move(f)) {}

  Model model_;
  Family family_;
};

/// Dimension N fixed by the spec, if any (SiegelTranslation works in every N).
std::optional<std::size_t> dimension(const MapSpec& spec);

/// Applies the map. Throws ModelMismatchError for a point of another model or
/// dimension and EvaluationError when the image leaves the model.
Point evaluate(const MapSpec& spec, const Point& p);

/// compose(f, g) evaluates as f(g(p)).
MapSpec compose(const MapSpec& f, const MapSpec& g);

struct ValidityReport {
  bool analytic_ok = false;
  bool sampled_ok = false;
  double worst_margin = 0.0;
  std::size_t samples = 0;
  std::vector<std::string> notes;
};

/// Decides the family self-map criteria analytically and samples
/// `sample_count` random points of the model (seeded), recording the smallest
/// value of the domain functional at their images.
ValidityReport validate_self_map(const MapSpec& spec, std::size_t sample_count,
                                 std::uint64_t seed = 0,
                                 std::optional<std::size_t> dim = std::nullopt);

/// True for the families that are automorphisms of their model.
bool is_automorphism(const MapSpec& spec);

}  // namespace hdyn
