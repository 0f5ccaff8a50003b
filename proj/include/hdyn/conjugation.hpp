#pragma once

// Normalized iterates of half-plane maps and the residuals of their limit
// functional equations:
//   pommerenke:        psi_n(z) = (f_n(z) - i y_n) / x_n,  x_n + i y_n = f_n(basepoint)
//   baker_pommerenke:  psi_n(z) = (f_n(z) - z_n) / (z_{n+1} - z_n)

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hdyn/dynamics.hpp"
#include "hdyn/maps.hpp"

namespace hdyn {

enum class ConjugationKind { pommerenke, baker_pommerenke };
std::string_view to_string(ConjugationKind k);
ConjugationKind conjugation_kind_from_string(std::string_view s);

struct ConjugationOptions {
  std::vector<cplx> grid;                // empty: default_grid()
  std::vector<std::size_t> checkpoints;  // empty: {1e2, 1e3, 1e4, 1e5}
  cplx basepoint{1.0, 0.0};
  /// Budget of the classification / step-verdict run behind the preconditions.
  ClassifyBudget precondition{};
  bool check_preconditions = true;
};

struct ConjugationResult {
  ConjugationKind kind = ConjugationKind::pommerenke;
  std::vector<cplx> grid;
  std::vector<std::size_t> checkpoints;
  cplx basepoint;
  /// psi[k][j] = psi_{n_k}(grid[j]);  psi_f[k][j] = psi_{n_k}(f(grid[j])).
  std::vector<std::vector<cplx>> psi;
  std::vector<std::vector<cplx>> psi_f;
  /// Grid mean of psi_n(f(g)) - psi_n(g) per checkpoint.
  std::vector<cplx> translation_estimates;
  /// Im of the translation estimate at the largest checkpoint (pommerenke only).
  double b_estimate = 0.0;
  /// pommerenke:       sup_g |psi_n(f(g)) - psi_n(g) - translation_estimates[k]|
  /// baker_pommerenke: sup_g |psi_n(f(g)) - psi_n(g) - 1|
  std::vector<double> residual_series;
  /// pommerenke only: sup_g |psi_n(f(g)) - psi_n(g) - i b_estimate|
  std::vector<double> phi_residual_series;
  /// deltas[k] = sup_g |psi_{n_{k+1}}(g) - psi_{n_k}(g)|
  std::vector<double> deltas;
};

/// 5 x 5 lattice over [1, 3] x [-1, 1].
std::vector<cplx> default_grid();
std::vector<std::size_t> default_checkpoints();

/// Requires a half-plane map that classifies parabolic with Denjoy-Wolff point at infinity.
ConjugationResult pommerenke_normalized(const MapSpec& spec, const ConjugationOptions& opts = {});

/// Requires a parabolic half-plane map whose basepoint orbit has zero step.
ConjugationResult baker_pommerenke_normalized(const MapSpec& spec, const ConjugationOptions& opts = {});

/// Checkpoint table: n, residual, phi residual, translation estimate, delta to the next checkpoint.
std::string conjugation_report(const ConjugationResult& r);

}  // namespace hdyn
