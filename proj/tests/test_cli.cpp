#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "bodefrac/cli.hpp"
#include "bodefrac/modelio.hpp"
#include "doctest.h"

using namespace bodefrac;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("bodefrac_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream(p) << content;
    return p.string();
  }
};

const char* kClassical = R"({
  "plant": {"num": [[3, 0]], "den": [[-1, 0], [1, 0]]},
  "pid": {"k1": 0, "k0": 1, "km1": 0, "alpha": 1, "beta": 1}
})";

}  // namespace

TEST_CASE("analyze reconciles the classical loop and exits 0") {
  TempDir tmp;
  const std::string cfg = tmp.file("m.json", kClassical);
  CHECK(run_cli({"analyze", "--config", cfg}) == 0);
}

TEST_CASE("analyze writes integrand CSV with the pinned header") {
  TempDir tmp;
  const std::string cfg = tmp.file("m.json", kClassical);
  CHECK(run_cli({"analyze", "--config", cfg, "--csv", "--out", tmp.path.string()}) == 0);
  std::ifstream csv(tmp.path / "integrand.csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "omega,ln_abs_S_sq,panel_id");
  std::string first;
  std::getline(csv, first);
  CHECK(first.find(',') != std::string::npos);
  CHECK(first.find(';') == std::string::npos);
}

TEST_CASE("invariant violations exit 1 and name the constraint") {
  TempDir tmp;
  const std::string cfg = tmp.file("bad.json", R"({
    "plant": {"num": [[3, 0]], "den": [[-1, 0], [1, 0]]},
    "pid": {"k1": 0, "k0": 1, "km1": 0, "alpha": 1, "beta": 2.5}
  })");
  CHECK(run_cli({"analyze", "--config", cfg}) == 1);

  const std::string broken = tmp.file("broken.json", "{\"plant\": {");
  CHECK(run_cli({"analyze", "--config", broken}) == 1);
  CHECK(run_cli({"analyze", "--config", (tmp.path / "missing.json").string()}) == 1);
}

TEST_CASE("dump-config round trips") {
  TempDir tmp;
  const std::string cfg = tmp.file("m.json", kClassical);
  CHECK(run_cli({"analyze", "--config", cfg, "--dump-config"}) == 0);
  // the canonical dump parses back to an identical model
  const LoopModel m = rational_model_from_json(kClassical);
  const std::string canon =
      rational_model_to_json(m.rational_loop().plant, m.rational_loop().pid);
  const LoopModel m2 = rational_model_from_json(canon);
  CHECK(rational_model_to_json(m2.rational_loop().plant, m2.rational_loop().pid) == canon);
}

TEST_CASE("lemmas exits by pass state") {
  TempDir tmp;
  // compliant fractional model: all lemma checks pass
  const std::string good = tmp.file("good.json", R"({
    "plant": {"num": [[1, 0]], "den": [[-20, 0], [8, 0], [11, 0], [1, 0]]},
    "pid": {"k1": 1, "k0": 60, "km1": 5, "alpha": 0.5, "beta": 0.5}
  })");
  CHECK(run_cli({"lemmas", "--config", good}) == 0);
  // q = 1: the arc lemma fails with a limit estimate, exit 2
  const std::string q1 = tmp.file("q1.json", kClassical);
  CHECK(run_cli({"lemmas", "--config", q1}) == 2);
}

TEST_CASE("lemmas on a plant without RHP poles skips corridor checks") {
  TempDir tmp;
  const std::string cfg = tmp.file("stable.json", R"({
    "plant": {"num": [[1, 0]], "den": [[2, 0], [3, 0], [1, 0]]},
    "pid": {"k1": 0, "k0": 1, "km1": 1, "alpha": 1, "beta": 1}
  })");
  CHECK(run_cli({"lemmas", "--config", cfg}) == 0);
}

TEST_CASE("synth command on each family") {
  TempDir tmp;
  const std::string a = tmp.file("a.json", R"({"family": "A", "N": 25})");
  CHECK(run_cli({"synth", "--config", a}) == 0);
  const std::string c = tmp.file("c.json", R"({"family": "C", "N": 12})");
  CHECK(run_cli({"synth", "--config", c}) == 0);  // divergent verdict counts as pass
  // explicit outer reconciles through the arc residual
  const std::string e =
      tmp.file("e.json", R"({"family": "A", "N": 10, "outer": {"a": 2.0, "b": 1.0}})");
  CHECK(run_cli({"synth", "--config", e}) == 0);
}

TEST_CASE("sweep command emits the pinned CSV and is byte-deterministic") {
  TempDir tmp;
  const std::string cfg = tmp.file("sweep.json", R"({
    "plant": {"num": [[1, 0]], "den": [[-20, 0], [8, 0], [11, 0], [1, 0]]},
    "grid": {"k1": [0, 1], "k0": [40], "km1": [1], "alpha": [0.5, 1.0], "beta": [0.5]}
  })");
  CHECK(run_cli({"sweep", "--config", cfg, "--out", tmp.path.string()}) == 0);
  std::ifstream csv(tmp.path / "sweep.csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "k1,k0,km1,alpha,beta,stable,I_numeric,I_theoretical,residual_re,residual_im,"
        "reconciliation");
  std::stringstream first_run;
  first_run << csv.rdbuf();

  CHECK(run_cli({"sweep", "--config", cfg, "--out", tmp.path.string()}) == 0);
  std::ifstream csv2(tmp.path / "sweep.csv");
  std::getline(csv2, header);
  std::stringstream second_run;
  second_run << csv2.rdbuf();
  CHECK(first_run.str() == second_run.str());
}

TEST_CASE("unknown arguments exit 1") {
  CHECK(run_cli({"analyze"}) == 1);              // missing --config
  CHECK(run_cli({"frobnicate"}) == 1);           // no such command
  CHECK(run_cli({}) == 1);                       // a subcommand is required
}

TEST_CASE("config file may set rel_tol; flags still win") {
  TempDir tmp;
  const std::string cfg = tmp.file("m.json", R"({
    "rel_tol": 1e-4,
    "plant": {"num": [[3, 0]], "den": [[-1, 0], [1, 0]]},
    "pid": {"k1": 0, "k0": 1, "km1": 0, "alpha": 1, "beta": 1}
  })");
  CHECK(run_cli({"analyze", "--config", cfg}) == 0);
  CHECK(run_cli({"analyze", "--config", cfg, "--rel-tol", "1e-8"}) == 0);
  CHECK(document_rel_tol(read_text_file(cfg)).value() == 1e-4);

  const std::string bad = tmp.file("bad.json", R"({
    "rel_tol": -1,
    "plant": {"num": [[3, 0]], "den": [[-1, 0], [1, 0]]},
    "pid": {"k1": 0, "k0": 1, "km1": 0, "alpha": 1, "beta": 1}
  })");
  CHECK(run_cli({"analyze", "--config", bad}) == 1);
}
