#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hdyn/serialize.hpp"

namespace fs = std::filesystem;
using hdyn::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Workdir {
 public:
  explicit Workdir(const std::string& name) : dir_(fs::temp_directory_path() / ("hdyn_cli_" + name)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workdir() { fs::remove_all(dir_); }

  fs::path path(const std::string& leaf) const { return dir_ / leaf; }

  fs::path config(const std::string& text) const {
    const fs::path p = dir_ / "config.json";
    std::ofstream(p) << text;
    return p;
  }

  Result run(const std::string& args) const {
    const fs::path o = dir_ / "stdout.txt", e = dir_ / "stderr.txt";
    const std::string cmd = std::string(HDYN_CLI_PATH) + " " + args + " > " + o.string() + " 2> " + e.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(o), slurp(e)};
  }

  Result run(const std::string& command, const std::string& config_text, const std::string& extra = "") const {
    const fs::path cfg = config(config_text);
    return run(command + " --config " + cfg.string() + " --out " + (dir_ / "out").string() + " " + extra);
  }

  fs::path out(const std::string& leaf) const { return dir_ / "out" / leaf; }

 private:
  fs::path dir_;
};

const char* shift_imag = R"({"map": {"family": "halfplane_affine", "lambda": 1, "b": [0, 1]},
                             "starts": [{"coords": [1]}]})";
const char* shift_real = R"({"map": {"family": "halfplane_affine", "lambda": 1, "b": 1},
                             "starts": [{"coords": [1]}]})";

}  // namespace

TEST_CASE("classify renders the type") {
  Workdir w("classify");
  Result r = w.run("classify", R"({"map": {"family": "halfplane_affine", "lambda": 2, "b": 0}})");
  CHECK(r.code == 0);
  CHECK(r.out.find("hyperbolic, c≈0.500000") != std::string::npos);
  const json j = json::parse(slurp(w.out("classify.json")));
  CHECK(j["type"] == "hyperbolic");

  r = w.run("classify", shift_real, "--n-max 20000");
  CHECK(r.code == 0);
  REQUIRE(r.out.rfind("parabolic, c≈", 0) == 0);
  CHECK(std::abs(std::stod(r.out.substr(std::string("parabolic, c≈").size())) - 1.0) < 1e-3);

  r = w.run("classify", R"({"map": {"family": "disk_moebius", "a": 0, "theta": 1.0471975511965976},
                            "starts": [{"coords": [[0.3, 0.1]]}]})");
  CHECK(r.code == 0);
  CHECK(r.out.find("elliptic") != std::string::npos);
}

TEST_CASE("steps on z + i") {
  Workdir w("steps");
  const Result r = w.run("steps", shift_imag, "--n-max 2000");
  CHECK(r.code == 0);
  const std::string csv = slurp(w.out("steps.csv"));
  CHECK(csv.rfind("n,s_n\n", 0) == 0);
  const json rows = hdyn::csv_to_json(csv);
  REQUIRE(rows.size() == 2000);
  for (const json& row : rows) CHECK(std::abs(row["s_n"].get<double>() - 0.4472135955) < 1e-10);
  CHECK(json::parse(slurp(w.out("steps.json")))["verdict"] == "nonzero_step");
}

TEST_CASE("orbit row 0 is the start") {
  Workdir w("orbit");
  const Result r = w.run("orbit", R"({"map": {"family": "siegel_translation", "b": 1},
      "starts": [{"coords": [[0.1, 0.30000000000000004], [0.2, -0.1]]}]})", "--n-max 10");
  CHECK(r.code == 0);
  const std::string csv = slurp(w.out("orbit.csv"));
  CHECK(csv.rfind("n,re,im,w1_re,w1_im\n0,0.10000000000000001,0.30000000000000004,0.20000000000000001,-0.10000000000000001\n",
                  0) == 0);
}

TEST_CASE("structured format keeps rows in one document") {
  Workdir w("structured");
  const Result r = w.run("orbit", shift_real, "--n-max 5 --format structured");
  CHECK(r.code == 0);
  CHECK_FALSE(fs::exists(w.out("orbit.csv")));
  const json j = json::parse(slurp(w.out("orbit.json")));
  REQUIRE(j["rows"].size() == 6);
  CHECK(j["rows"][5]["re"] == 6.0);
}

TEST_CASE("outputs are deterministic") {
  Workdir w("determinism");
  const std::string cfg = R"({"map": {"family": "halfplane_perturbed", "b": [0, 1], "c": 1}, "starts": [{"coords": [1]}]})";
  CHECK(w.run("plot", cfg, "--n-max 3000").code == 0);
  const std::string svg = slurp(w.out("plot.svg"));
  CHECK(w.run("orbit", cfg, "--n-max 3000").code == 0);
  const std::string csv = slurp(w.out("orbit.csv"));
  CHECK(w.run("plot", cfg, "--n-max 3000").code == 0);
  CHECK(w.run("orbit", cfg, "--n-max 3000").code == 0);
  CHECK(slurp(w.out("plot.svg")) == svg);
  CHECK(slurp(w.out("orbit.csv")) == csv);
  CHECK(svg.find("<svg") != std::string::npos);
}

TEST_CASE("plot with an empty orbit") {
  Workdir w("plot_empty");
  CHECK(w.run("plot", shift_imag, "--n-max 0").code == 0);
  const std::string svg = slurp(w.out("plot.svg"));
  CHECK(svg.find("class=\"boundary\"") != std::string::npos);
  CHECK(svg.find("class=\"start\"") != std::string::npos);
  CHECK(svg.find("<polyline") == std::string::npos);
}

TEST_CASE("approach, conjugate and probe") {
  Workdir w("modules");
  Result r = w.run("approach", shift_real, "--n-max 5000");
  CHECK(r.code == 0);
  CHECK(slurp(w.out("approach.csv")).rfind("n,koranyi_q,special_ratio,nt_q,stolz_q,tangency_angle,radial_q_re,radial_q_im\n", 0) == 0);
  CHECK(json::parse(slurp(w.out("approach.json")))["flags"]["is_restricted"] == true);

  r = w.run("conjugate", R"({"map": {"family": "halfplane_affine", "lambda": 1, "b": [0, 1]},
                             "conjugation": {"checkpoints": [10, 100]}, "classify": {"n_max": 5000}})");
  CHECK(r.code == 0);
  CHECK(r.out.find("kind: pommerenke") != std::string::npos);
  CHECK(slurp(w.out("conjugation.csv")).rfind("n,re,im,psi_re,psi_im,psi_f_re,psi_f_im,residual\n", 0) == 0);

  r = w.run("probe", shift_real, "--n-max 5000");
  CHECK(r.code == 0);
  CHECK(r.out.find("CONSISTENT") != std::string::npos);
  CHECK(hdyn::csv_to_json(slurp(w.out("probe.csv"))).size() == 5);
}

TEST_CASE("harness exit status") {
  Workdir w("harness");
  Result r = w.run("harness", "{}");
  CHECK(r.code == 0);
  const json summary = json::parse(slurp(w.out("harness.json")));
  CHECK(summary["ok"] == true);
  CHECK(summary["rows"].get<int>() >= 35);

  r = w.run("harness", R"({"n_max": 2000, "classify": {"n_max": 2000}, "harness": {"cases": [
      {"label": "rotation", "map": {"family": "disk_moebius", "a": 0, "theta": 1}, "start": {"coords": [0.4]}}]}})");
  CHECK(r.code == 4);
}

TEST_CASE("error exit codes") {
  Workdir w("errors");
  CHECK(w.run("bogus").code == 1);
  CHECK(w.run("orbit --format xml").code == 1);
  CHECK(w.run("orbit --config " + w.path("missing.json").string()).code == 1);
  CHECK(w.run("orbit", "{ not json").code == 1);
  CHECK(w.run("orbit", "{}").code == 1);
  CHECK(w.run("orbit", R"({"step": {"tol_step": -1}})").code == 1);
  // a fixed point in the interior: no boundary Denjoy-Wolff point
  CHECK(w.run("approach", R"({"map": {"family": "disk_moebius", "a": 0, "theta": 1}, "starts": [{"coords": [0.4]}]})",
              "--n-max 2000")
            .code == 2);
  CHECK(w.run("conjugate", R"({"map": {"family": "halfplane_affine", "lambda": 1, "b": [0, 1]},
                               "conjugation": {"kind": "baker_pommerenke", "checkpoints": [10]},
                               "classify": {"n_max": 5000}})")
            .code == 2);
  // z - 1 leaves the half-plane
  const Result r = w.run("orbit", R"({"map": {"family": "halfplane_affine", "lambda": 1, "b": -1},
                                      "starts": [{"coords": [0.5]}]})");
  CHECK(r.code == 3);
  CHECK(r.err.find("numeric failure") != std::string::npos);
}
