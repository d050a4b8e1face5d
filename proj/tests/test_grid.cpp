#include <doctest.h>

#include <cmath>

#include "sphx/cell_grid.hpp"
#include "sphx/rng.hpp"

using namespace sphx;

TEST_CASE("domain normalization examples") {
  const Domain unit = Domain::unit(2);
  auto n1 = normalize_domain({0.5, 0.5, 0.0}, unit);
  CHECK(n1[0] == 0.0);
  CHECK(n1[1] == 0.0);
  auto n2 = normalize_domain({1.0, 0.0, 0.0}, unit);
  CHECK(n2[0] == 1.0);
  CHECK(n2[1] == -1.0);

  const Domain rect = Domain::box(2, {0.0, 0.0, 0.0}, {2.0, 1.0, 0.0});
  auto n3 = normalize_domain({2.0, 1.0, 0.0}, rect);  // h_d = 2
  CHECK(n3[0] == 1.0);
  CHECK(n3[1] == 0.5);
}

TEST_CASE("normalization round trip") {
  const Domain dom = Domain::box(3, {-0.3, 0.1, 2.0}, {0.9, 4.0, 2.5});
  Rng rng(5);
  for (int it = 0; it < 200; ++it) {
    std::array<double, 3> x{rng.uniform(-0.3, 0.9), rng.uniform(0.1, 4.0),
                            rng.uniform(2.0, 2.5)};
    const auto back = denormalize_domain(normalize_domain(x, dom), dom);
    for (int k = 0; k < 3; ++k) CHECK(back[k] == doctest::Approx(x[k]).epsilon(1e-14));
  }
}

TEST_CASE("to_relative tie break and round trip") {
  ParticleSystem ps = build_lattice(Domain::unit(2), 0.1, 0.0, 1);
  CellGrid grid = make_grid_for(ps);

  // exact cell center maps to rel = 0
  std::array<std::int32_t, 3> cell{};
  std::array<double, 3> rel{};
  const double cx = grid.center_norm(0, 1);
  const double cy = grid.center_norm(1, 2);
  grid.locate({cx, cy, 0.0}, cell, rel);
  CHECK(cell[0] == 1);
  CHECK(cell[1] == 2);
  CHECK(rel[0] == 0.0);
  CHECK(rel[1] == 0.0);

  // a shared face belongs to the lower cell with rel = +1
  const double face = grid.origin_norm(0) + 2.0 * grid.hc(0);
  grid.locate({face, cy, 0.0}, cell, rel);
  CHECK(cell[0] == 1);
  CHECK(rel[0] == 1.0);

  // random round trip through (cell, rel)
  Rng rng(11);
  CellGrid g2 = make_grid_for(ps);
  g2.rebin(ps);
  RelCoords rc = build_rel_coords(ps, g2);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto xn = normalize_domain(ps.position(i), g2.domain());
    const auto rec = reconstruct_norm(rc, i, g2);
    for (int k = 0; k < 2; ++k) {
      CHECK(rec[k] == doctest::Approx(xn[k]).epsilon(1e-13));
      CHECK(rc.rel[k][i] >= -1.0);
      CHECK(rc.rel[k][i] <= 1.0);
    }
  }
}

TEST_CASE("rel_distance against the absolute oracle") {
  ParticleSystem ps = build_random_uniform(Domain::unit(2), 100, 17);
  CellGrid grid = make_grid_for(ps);
  grid.rebin(ps);
  RelCoords rc = build_rel_coords(ps, grid);

  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const auto ni = normalize_domain(ps.position(i), grid.domain());
      const auto nj = normalize_domain(ps.position(j), grid.domain());
      const double dx = ni[0] - nj[0];
      const double dy = ni[1] - nj[1];
      const double want = std::sqrt(dx * dx + dy * dy);
      const double got = rel_distance(rc, i, j, grid, Precision::fp64);
      if (want == 0.0) {
        CHECK(got == 0.0);
      } else {
        CHECK(std::abs(got - want) / want < 1e-12);
      }
    }
  }
}

TEST_CASE("rel_distance of adjacent cell centers is h_c") {
  // two synthetic particles sitting exactly on neighboring cell centers
  ParticleSystem ps = build_lattice(Domain::unit(2), 0.1, 0.0, 1);
  CellGrid grid = make_grid_for(ps);
  RelCoords rc;
  for (int k = 0; k < 2; ++k) {
    rc.rel[k] = {0.0, 0.0};
    rc.cell[k] = {1, 1};
  }
  rc.cell[0] = {1, 2};  // one cell apart on x
  const double d = rel_distance(rc, 0, 1, grid, Precision::fp64);
  CHECK(d == doctest::Approx(grid.hc(0)).epsilon(1e-15));
  CHECK(rel_distance(rc, 0, 0, grid, Precision::fp64) == 0.0);
}

TEST_CASE("update_relative migration") {
  ParticleSystem ps = build_lattice(Domain::unit(1), 0.1, 0.0, 1);
  CellGrid grid = make_grid_for(ps);
  grid.rebin(ps);
  RelCoords rc = build_rel_coords(ps, grid);

  // craft rel = 0.9 in cell 1 and push by +0.3 (in rel units)
  rc.rel[0][0] = 0.9;
  rc.cell[0][0] = 1;
  const double edge = grid.edge_phys(0);
  update_relative(rc, 0, {0.15 * edge, 0.0, 0.0}, grid, Precision::fp64);
  CHECK(rc.rel[0][0] == doctest::Approx(-0.8).epsilon(1e-12));
  CHECK(rc.cell[0][0] == 2);

  // zero displacement is a no-op
  const double before = rc.rel[0][0];
  update_relative(rc, 0, {0.0, 0.0, 0.0}, grid, Precision::fp64);
  CHECK(rc.rel[0][0] == before);

  // skipping a cell violates the precondition
  CHECK_THROWS(update_relative(rc, 0, {1.5 * edge, 0.0, 0.0}, grid, Precision::fp64));
}

TEST_CASE("update_relative keeps components in range over random walks") {
  ParticleSystem ps = build_lattice(Domain::unit(2), 0.2, 0.0, 1);
  CellGrid grid = make_grid_for(ps);
  grid.rebin(ps);
  RelCoords rc = build_rel_coords(ps, grid);
  Rng rng(23);
  const double edge = grid.edge_phys(0);

  // mirror positions in doubles as the drift oracle
  std::array<std::vector<double>, 2> truth{ps.x(0), ps.x(1)};
  for (int step = 0; step < 1000; ++step) {
    for (std::size_t i = 0; i < ps.size(); ++i) {
      std::array<double, 3> dx{0.0, 0.0, 0.0};
      for (int k = 0; k < 2; ++k) {
        // keep the walk inside the domain
        const double span = 0.2 * edge;
        double step_k = rng.uniform(-span, span);
        const double next = truth[k][i] + step_k;
        if (next < 0.02 || next > 0.98) step_k = -step_k;
        dx[k] = step_k;
        truth[k][i] += step_k;
      }
      update_relative(rc, i, dx, grid, Precision::fp64);
      for (int k = 0; k < 2; ++k) {
        CHECK(rc.rel[k][i] >= -1.0);
        CHECK(rc.rel[k][i] <= 1.0);
        CHECK(rc.cell[k][i] >= 0);
        CHECK(rc.cell[k][i] < grid.count(k));
      }
    }
  }
  // drift against the absolute-coordinate oracle stays at rounding level
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto rec = reconstruct_norm(rc, i, grid);
    const auto want = normalize_domain({truth[0][i], truth[1][i], 0.0}, grid.domain());
    for (int k = 0; k < 2; ++k) CHECK(std::abs(rec[k] - want[k]) < 1e-10);
  }
}

TEST_CASE("rebin membership invariants") {
  ParticleSystem ps = build_random_uniform(Domain::unit(2), 500, 31);
  CellGrid grid = make_grid_for(ps);
  grid.rebin(ps);
  // every particle appears exactly once, in the cell that contains it
  std::size_t total = 0;
  for (std::int64_t c = 0; c < grid.cell_total(); ++c) {
    for (const std::int32_t i : grid.members(c)) {
      CHECK(grid.cell_of(static_cast<std::size_t>(i)) == c);
      ++total;
    }
  }
  CHECK(total == ps.size());

  // a particle outside the domain is reported by index
  ps.x(0)[17] = 2.5;
  CHECK_THROWS_WITH_AS(grid.rebin(ps), doctest::Contains("17"), std::out_of_range);
}

TEST_CASE("empty system rebin") {
  ParticleSystem ps(Domain::unit(2), 0.1, 0, 1.0);
  CellGrid grid(ps.domain(), 0.24);
  grid.rebin(ps);
  for (std::int64_t c = 0; c < grid.cell_total(); ++c) CHECK(grid.members(c).empty());
}

TEST_CASE("fp16 migration adjustment is exact") {
  // rel' = rel - 2 must be exact in binary16 arithmetic
  ParticleSystem ps = build_lattice(Domain::unit(1), 0.1, 0.0, 1);
  CellGrid grid = make_grid_for(ps);
  grid.rebin(ps);
  RelCoords rc = build_rel_coords(ps, grid);
  rc.rel[0][0] = round16(0.9);
  rc.cell[0][0] = 3;
  const double edge = grid.edge_phys(0);
  update_relative(rc, 0, {0.2 * edge, 0.0, 0.0}, grid, Precision::fp16);
  // 0.9 + 0.4 at binary16, then the exact -2 shift
  const double expect = round16(round16(0.9) + round16(0.4)) - 2.0;
  CHECK(rc.rel[0][0] == expect);
  CHECK(rc.cell[0][0] == 4);
  CHECK(rc.rel[0][0] >= -1.0);
}
