#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "sphx/experiments.hpp"

using namespace sphx;

TEST_CASE("circle experiment pattern") {
  CircleConfig cfg;
  const auto rows = exp_circle(cfg);
  auto count_of = [&](Precision p, double dR) -> std::uint64_t {
    for (const auto& r : rows) {
      if (r.precision == p && r.dR == dR) return r.incorrect_count;
    }
    FAIL("row missing");
    return 0;
  };
  // FP16 is clean for coarse disturbances and breaks down by 1e-4
  CHECK(count_of(Precision::fp16, 1e-1) == 0);
  CHECK(count_of(Precision::fp16, 1e-2) == 0);
  CHECK(count_of(Precision::fp16, 1e-4) > 0);
  CHECK(count_of(Precision::fp16, 1e-6) > 0);
  // FP32 holds through 1e-6 and errs at 1e-8
  CHECK(count_of(Precision::fp32, 1e-4) == 0);
  CHECK(count_of(Precision::fp32, 1e-6) == 0);
  CHECK(count_of(Precision::fp32, 1e-8) > 0);
  // FP64 is exact on this layout everywhere
  for (const auto& r : rows) {
    if (r.precision == Precision::fp64) CHECK(r.incorrect_count == 0);
  }
}

TEST_CASE("square experiment smoke on coarse rungs") {
  SquareConfig cfg;
  cfg.ds_ladder = {0.05, 0.02};
  cfg.seed = 9;
  const auto rows = exp_square(cfg);
  REQUIRE(rows.size() == 6);  // 3 backends x 2 rungs
  for (const auto& r : rows) {
    if (r.backend == "rcll") {
      CHECK(r.incorrect_count == 0);
    }
    CHECK(r.incorrect_percent >= 0.0);
  }
  // determinism: the same seed reproduces the same counts
  const auto again = exp_square(cfg);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].incorrect_count == again[i].incorrect_count);
  }
}

TEST_CASE("gradient experiment smoke") {
  GradientConfig cfg;
  cfg.ds_ladder = {0.02, 0.01};
  const auto rows = exp_gradient(cfg);
  REQUIRE(rows.size() == 10);  // 5 backend/precision combos x 2 rungs
  // fp64 all equals fp64 cell bit for bit; fp16 rcll equals both
  for (std::size_t r = 0; r < 2; ++r) {
    const auto base = rows[r * 5 + 0].rmse;  // all fp64
    CHECK(rows[r * 5 + 2].rmse == base);     // cell fp64
    CHECK(rows[r * 5 + 4].rmse == base);     // rcll fp16
    CHECK(base > 0.0);
  }
}

TEST_CASE("scaling experiment smoke") {
  ScalingConfig cfg;
  cfg.n_ladder = {500, 2000};
  cfg.repeats = 1;
  cfg.precisions = {Precision::fp64};
  const auto rows = exp_scaling(cfg);
  CHECK(rows.size() == 8);  // all, cell, rcll, rcll_sorted per rung
  for (const auto& r : rows) CHECK(r.median_seconds >= 0.0);
}

TEST_CASE("poiseuille experiment smoke at a truncated horizon") {
  PoiseuilleExpConfig cfg;
  cfg.ds_ladder = {0.05};
  cfg.base.t_end = 20.0 * [&] {
    PoiseuilleConfig c = cfg.base;
    c.ds = 0.05;
    return c.dt();
  }();
  const auto rows = exp_poiseuille(cfg);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].approach == "I");
  CHECK(rows[1].approach == "III");
  CHECK(rows[1].tables_identical_with_I);
  CHECK(rows[2].approach == "II");
  for (const auto& r : rows) CHECK(std::isfinite(r.max_discrepancy_ds));
}

TEST_CASE("csv schemas and manifest") {
  const std::string dir = "/tmp/sphx_harness_test";
  std::filesystem::create_directories(dir);

  CircleConfig ccfg;
  ccfg.dR_ladder = {1e-2};
  write_circle_csv(exp_circle(ccfg), dir + "/circle.csv");
  {
    std::ifstream in(dir + "/circle.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "precision,dR,incorrect_count");
  }

  write_manifest(dir + "/run.json", "circle", 42, {{"n_ring", "64"}},
                 {dir + "/circle.csv"});
  {
    std::ifstream in(dir + "/run.json");
    nlohmann::json j;
    in >> j;
    CHECK(j["experiment"] == "circle");
    CHECK(j["seed"] == 42);
    CHECK(j["version"] == std::string(kVersion));
    CHECK(j["config"]["n_ring"] == "64");
    CHECK(j["outputs"].size() == 1);
  }
  std::filesystem::remove_all(dir);
}
