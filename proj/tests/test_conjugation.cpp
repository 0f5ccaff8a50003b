#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hdyn/conjugation.hpp"
#include "hdyn/errors.hpp"

using namespace hdyn;

namespace {

const MapSpec shift_real = MapSpec::halfplane_affine(1.0, 1.0);
const MapSpec shift_imag = MapSpec::halfplane_affine(1.0, {0.0, 1.0});
const MapSpec perturbed_real = MapSpec::halfplane_perturbed(1.0, 1.0);
const MapSpec perturbed_imag = MapSpec::halfplane_perturbed({0.0, 1.0}, 1.0);

ConjugationOptions short_run() {
  ConjugationOptions o;
  o.checkpoints = {100, 1000, 10000};
  o.precondition.n_max = 20000;
  return o;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    if (!(v[k + 1] < v[k])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("default grid and checkpoints") {
  const auto g = default_grid();
  REQUIRE(g.size() == 25);
  CHECK(g.front() == cplx{1.0, -1.0});
  CHECK(g.back() == cplx{3.0, 1.0});
  CHECK(default_checkpoints() == std::vector<std::size_t>{100, 1000, 10000, 100000});
}

TEST_CASE("pommerenke on z + i is the identity") {
  const auto r = pommerenke_normalized(shift_imag, short_run());
  CHECK(r.b_estimate == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 0; k < r.checkpoints.size(); ++k) {
    CHECK(r.residual_series[k] < 1e-12);
    CHECK(r.phi_residual_series[k] < 1e-12);
    for (std::size_t j = 0; j < r.grid.size(); ++j) CHECK(std::abs(r.psi[k][j] - r.grid[j]) < 1e-12);
  }
}

TEST_CASE("pommerenke on z + 1 tends to the constant 1") {
  const auto r = pommerenke_normalized(shift_real, short_run());
  // psi_n(z) = (z + n) / (1 + n)
  for (std::size_t k = 0; k < r.checkpoints.size(); ++k) {
    const double n = static_cast<double>(r.checkpoints[k]);
    for (std::size_t j = 0; j < r.grid.size(); ++j) {
      CHECK(std::abs(r.psi[k][j] - (r.grid[j] + n) / (1.0 + n)) < 1e-14);
    }
    CHECK(r.residual_series[k] < 1e-10);
    CHECK(r.translation_estimates[k].real() == doctest::Approx(1.0 / (n + 1.0)).epsilon(1e-10));
  }
  CHECK(std::abs(r.b_estimate) < 0.05);
  CHECK(std::abs(r.psi.back()[7] - 1.0) < 1e-3);
}

TEST_CASE("pommerenke normalization fixes the basepoint") {
  for (const auto& f : {shift_real, shift_imag, perturbed_imag, perturbed_real}) {
    const auto r = pommerenke_normalized(f, short_run());
    ConjugationOptions o = short_run();
    o.grid = {1.0, {2.0, 0.5}};
    const auto b = pommerenke_normalized(f, o);
    for (const auto& row : b.psi) CHECK(row[0] == cplx{1.0, 0.0});
    for (const auto& row : r.psi) {
      for (cplx v : row) CHECK(v.real() > -1e-10);
    }
  }
}

TEST_CASE("pommerenke on the perturbed translation converges") {
  const auto r = pommerenke_normalized(perturbed_imag, short_run());
  CHECK(strictly_decreasing(r.residual_series));
  CHECK(r.residual_series.back() < 0.05);
  CHECK(r.b_estimate > 0.0);
  MESSAGE("b_estimate ", r.b_estimate);
}

TEST_CASE("baker-pommerenke on z + 1 is z - z0") {
  ConjugationOptions o = short_run();
  o.basepoint = {2.0, 0.5};
  const auto r = baker_pommerenke_normalized(shift_real, o);
  for (std::size_t k = 0; k < r.checkpoints.size(); ++k) {
    CHECK(r.residual_series[k] < 1e-12);
    for (std::size_t j = 0; j < r.grid.size(); ++j) {
      CHECK(std::abs(r.psi[k][j] - (r.grid[j] - o.basepoint)) < 1e-12);
    }
  }
  CHECK(r.phi_residual_series.empty());
}

TEST_CASE("baker-pommerenke normalization vanishes at the basepoint") {
  ConjugationOptions o = short_run();
  o.grid = {1.0, {1.5, -0.5}};
  for (const auto& f : {shift_real, perturbed_real}) {
    const auto r = baker_pommerenke_normalized(f, o);
    for (const auto& row : r.psi) CHECK(row[0] == cplx{0.0, 0.0});
  }
}

TEST_CASE("baker-pommerenke on the perturbed shift converges") {
  const auto r = baker_pommerenke_normalized(perturbed_real, short_run());
  CHECK(strictly_decreasing(r.residual_series));
  CHECK(r.residual_series.back() < 0.05);
}

TEST_CASE("grid deltas do not increase") {
  for (const auto& f : {shift_real, shift_imag, perturbed_real, perturbed_imag}) {
    const auto r = pommerenke_normalized(f, short_run());
    REQUIRE(r.deltas.size() == 2);
    for (double d : r.deltas) CHECK(d >= 0.0);
    CHECK(r.deltas[1] <= r.deltas[0]);
  }
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(pommerenke_normalized(MapSpec::halfplane_affine(2.0, 0.0), short_run()), PreconditionError);
  CHECK_THROWS_AS(baker_pommerenke_normalized(shift_imag, short_run()), PreconditionError);
  CHECK_THROWS_AS(baker_pommerenke_normalized(perturbed_imag, short_run()), PreconditionError);
  CHECK_THROWS_AS(pommerenke_normalized(MapSpec::disk_moebius(0.0, 1.0), short_run()), ModelMismatchError);

  ConjugationOptions bad = short_run();
  bad.checkpoints = {100, 50};
  CHECK_THROWS_AS(pommerenke_normalized(shift_real, bad), ConfigError);
  bad = short_run();
  bad.grid = {{-1.0, 0.0}};
  CHECK_THROWS_AS(pommerenke_normalized(shift_real, bad), ConfigError);
}

TEST_CASE("conjugation_report") {
  const auto r = pommerenke_normalized(shift_imag, short_run());
  const std::string text = conjugation_report(r);
  CHECK(text.find("kind: pommerenke") != std::string::npos);
  CHECK(text.find("b_estimate: 1") != std::string::npos);
  CHECK(text.find("delta_next") != std::string::npos);
  // one header line per field plus the table header and three rows
  CHECK(std::count(text.begin(), text.end(), '\n') == 8);

  const auto bp = baker_pommerenke_normalized(shift_real, short_run());
  CHECK(conjugation_report(bp).find("b_estimate") == std::string::npos);
}
