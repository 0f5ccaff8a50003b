#pragma once

// Library-aware generators shared by the property tests and the acceptance
// binary: random points of each model and random valid specs of each family.

#include <cmath>
#include <string>
#include <vector>

#include "hdyn/geometry.hpp"
#include "hdyn/maps.hpp"
#include "oracles.hpp"

namespace fixture {

using namespace hdyn;

inline Point random_point(oracle::Rng& rng, Model m, std::size_t dim, double max_exp = 3.0) {
  switch (m) {
    case Model::disk: return DiskPoint(rng.disk());
    case Model::halfplane: return HalfPlanePoint(rng.halfplane(max_exp));
    case Model::ball: return BallPoint(rng.ball(dim));
    case Model::siegel: {
      auto [z, w] = rng.siegel(dim, max_exp);
      return SiegelPoint(z, std::move(w));
    }
  }
  return DiskPoint(0.0);
}

struct SpecCase {
  std::string label;
  MapSpec spec;
  std::size_t dim;
};

inline cplx right_half(oracle::Rng& rng) { return {rng.uniform(0.0, 2.0), rng.uniform(-2.0, 2.0)}; }

/// (b, c) with Re c >= 0 and Re b >= (|c| - Re c) / 2, so z + b + c/(z+1) maps H into H.
inline std::pair<cplx, cplx> perturbed_params(oracle::Rng& rng) {
  const cplx c = right_half(rng);
  const double floor = 0.5 * (std::abs(c) - c.real());
  return {cplx{floor + rng.uniform(0.0, 2.0), rng.uniform(-2.0, 2.0)}, c};
}

/// One random valid spec per family, including compositions and conjugations.
inline std::vector<SpecCase> random_specs(oracle::Rng& rng) {
  std::vector<SpecCase> out;
  const cplx a = 0.9 * rng.disk();
  out.push_back({"disk_moebius", MapSpec::disk_moebius(a, rng.uniform(-M_PI, M_PI)), 1});
  out.push_back({"halfplane_affine", MapSpec::halfplane_affine(rng.log_uniform(-1.0, 1.0), right_half(rng)), 1});
  const auto [b, c] = perturbed_params(rng);
  out.push_back({"halfplane_perturbed", MapSpec::halfplane_perturbed(b, c), 1});
  const std::size_t n = rng.uniform(0.0, 1.0) < 0.5 ? 2 : 3;
  out.push_back({"siegel_translation", MapSpec::siegel_translation(right_half(rng)), n});
  out.push_back({"heisenberg_translation",
                 MapSpec::heisenberg_translation(rng.vec(n - 1, 0.7), rng.uniform(-2.0, 2.0)), n});
  out.push_back({"composition",
                 MapSpec::composition({MapSpec::siegel_translation(right_half(rng)),
                                       MapSpec::heisenberg_translation(rng.vec(n - 1, 0.5), rng.uniform(-1.0, 1.0))}),
                 n});
  out.push_back({"conjugated_disk",
                 MapSpec::conjugated(MapSpec::halfplane_perturbed(b, c), CayleyTag::to_disk),
                 1});
  out.push_back({"conjugated_ball",
                 MapSpec::conjugated(MapSpec::heisenberg_translation(rng.vec(n - 1, 0.5), rng.uniform(-1.0, 1.0)),
                                     CayleyTag::to_disk),
                 n});
  return out;
}

}  // namespace fixture
