#include "sphx/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include <nlohmann/json.hpp>

#include "sphx/cell_grid.hpp"
#include "sphx/gradient.hpp"
#include "sphx/nnps.hpp"
#include "sphx/particle_system.hpp"

namespace sphx {

namespace {

using Rational = boost::multiprecision::cpp_rational;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// Distance < cutoff at a given precision, absolute 2-D coordinates, matching
// the all_list pipeline (coordinates rounded first, every operation rounded).
bool inside_at(double x, double y, double cutoff, Precision prec) {
  switch (prec) {
    case Precision::fp64: {
      return std::sqrt(x * x + y * y) < cutoff;
    }
    case Precision::fp32: {
      const float xf = static_cast<float>(x);
      const float yf = static_cast<float>(y);
      const float r = std::sqrt(xf * xf + yf * yf);
      return r < static_cast<float>(cutoff);
    }
    default: {
      const double xr = round16(x);
      const double yr = round16(y);
      const double sx = round16(xr * xr);
      const double sy = round16(yr * yr);
      const double acc = round16(sx + sy);
      return round16(std::sqrt(acc)) < round16(cutoff);
    }
  }
}

// Random positions with a hard guard annulus: no pair distance falls within
// +-width of the cutoff. Dart throwing with rejection: each particle redraws
// until it clears the annulus of everything placed so far. The acceptance
// probability has a scale-free lower bound (~exp(-2 pi (c/ds)^2 2w/c)), so the
// construction terminates at every rung.
ParticleSystem build_gapped_random(const Domain& dom, std::size_t n, double cutoff,
                                   double width, std::uint64_t seed) {
  ParticleSystem ps(dom, std::pow(dom.volume() / static_cast<double>(n), 0.5), n, 1.0);
  Rng rng(seed);
  const double lo2 = (cutoff - width) * (cutoff - width);
  const double hi2 = (cutoff + width) * (cutoff + width);

  const double bucket = cutoff + width;
  const int bx = std::max(1, static_cast<int>(dom.span(0) / bucket));
  const int by = std::max(1, static_cast<int>(dom.span(1) / bucket));
  std::vector<std::vector<std::int32_t>> cells(static_cast<std::size_t>(bx) * by);
  auto cell_of = [&](double x, double y) {
    int cx = static_cast<int>((x - dom.lo[0]) / dom.span(0) * bx);
    int cy = static_cast<int>((y - dom.lo[1]) / dom.span(1) * by);
    cx = std::min(std::max(cx, 0), bx - 1);
    cy = std::min(std::max(cy, 0), by - 1);
    return std::pair<int, int>(cx, cy);
  };

  for (std::size_t i = 0; i < n; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > 4000) {
        throw std::runtime_error("guard-annulus sampling stalled; widen the budget");
      }
      const double x = rng.uniform(dom.lo[0], dom.hi[0]);
      const double y = rng.uniform(dom.lo[1], dom.hi[1]);
      const auto [cx, cy] = cell_of(x, y);
      bool ok = true;
      for (int oy = -1; oy <= 1 && ok; ++oy) {
        for (int ox = -1; ox <= 1 && ok; ++ox) {
          const int qx = cx + ox, qy = cy + oy;
          if (qx < 0 || qy < 0 || qx >= bx || qy >= by) continue;
          for (const std::int32_t j : cells[static_cast<std::size_t>(qy) * bx + qx]) {
            const double dx = x - ps.x(0)[static_cast<std::size_t>(j)];
            const double dy = y - ps.x(1)[static_cast<std::size_t>(j)];
            const double d2 = dx * dx + dy * dy;
            if (d2 > lo2 && d2 < hi2) {
              ok = false;
              break;
            }
          }
        }
      }
      if (ok) {
        ps.x(0)[i] = x;
        ps.x(1)[i] = y;
        cells[static_cast<std::size_t>(cy) * bx + cx].push_back(static_cast<std::int32_t>(i));
        break;
      }
    }
  }
  return ps;
}

}  // namespace

std::vector<CircleRow> exp_circle(const CircleConfig& cfg) {
  std::vector<CircleRow> rows;
  const double two_pi = 2.0 * std::numbers::pi;
  for (const double dR : cfg.dR_ladder) {
    std::vector<double> xs(cfg.n_ring), ys(cfg.n_ring);
    for (int k = 0; k < cfg.n_ring; ++k) {
      const double r = 1.0 + ((k % 2 == 0) ? dR : -dR);
      const double th = two_pi * static_cast<double>(k) / cfg.n_ring;
      xs[k] = r * std::cos(th);
      ys[k] = r * std::sin(th);
    }
    for (const Precision prec : {Precision::fp64, Precision::fp32, Precision::fp16}) {
      std::uint64_t bad = 0;
      for (int k = 0; k < cfg.n_ring; ++k) {
        // Exact classification of the stored doubles.
        const Rational rx(xs[k]);
        const Rational ry(ys[k]);
        const bool truth = rx * rx + ry * ry < Rational(1);
        if (inside_at(xs[k], ys[k], 1.0, prec) != truth) ++bad;
      }
      rows.push_back({prec, dR, bad});
    }
  }
  return rows;
}

std::vector<SquareRow> exp_square(const SquareConfig& cfg) {
  std::vector<SquareRow> rows;
  const Domain dom = Domain::unit(2);
  std::uint64_t rung = 0;
  for (const double ds : cfg.ds_ladder) {
    ++rung;
    const auto per_axis = static_cast<std::size_t>(std::floor(1.0 / ds + 0.5));
    const std::size_t n = per_axis * per_axis;
    // SoA state + two CSR tables, roughly.
    const double est_gb = static_cast<double>(n) * 300.0 / 1e9;
    if (est_gb > cfg.memory_budget_gb) {
      std::fprintf(stderr, "square: skipping ds=%g (est %.1f GB > budget %.1f GB)\n", ds,
                   est_gb, cfg.memory_budget_gb);
      continue;
    }
    const double cutoff = 2.0 * 1.2 * ds;
    ParticleSystem ps =
        build_gapped_random(dom, n, cutoff, cfg.gap_rel * cutoff, cfg.seed + rung);
    CellGrid grid = make_grid_for(ps);
    grid.rebin(ps);
    RelCoords rel = build_rel_coords(ps, grid);

    const bool with_all = n <= cfg.allist_max_n;
    const NeighborTable oracle = with_all ? all_list(ps, Precision::fp64)
                                          : cell_link_list(ps, grid, Precision::fp64);
    auto push = [&](const char* backend, const NeighborTable& t) {
      const auto rep = mismatch_report(t, oracle);
      rows.push_back({backend, Precision::fp16, ds, ps.size(), rep.incorrect_count,
                      rep.incorrect_percent});
    };
    if (with_all) push("all", all_list(ps, Precision::fp16));
    push("cell", cell_link_list(ps, grid, Precision::fp16));
    push("rcll", rcll(rel, grid, Precision::fp16));
  }
  return rows;
}

std::vector<GradientRow> exp_gradient(const GradientConfig& cfg) {
  std::vector<GradientRow> rows;
  const Domain dom = Domain::unit(1);
  std::uint64_t rung = 0;
  for (const double ds : cfg.ds_ladder) {
    ++rung;
    ParticleSystem ps = build_lattice(dom, ds, cfg.jitter, cfg.seed + rung);
    CellGrid grid = make_grid_for(ps);
    grid.rebin(ps);
    RelCoords rel = build_rel_coords(ps, grid);
    const std::size_t n = ps.size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = ps.x(0)[i];
      f[i] = x * x * x;
    }
    const KernelParams kp = make_kernel(ps.h(), 1);
    auto rmse_of = [&](const NeighborTable& t) {
      const GradField g = grad_normalized(f, ps, t, kp);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = ps.x(0)[i];
        const double err = g.g[0][i] - 3.0 * x * x;
        acc += err * err;
      }
      return std::sqrt(acc / static_cast<double>(n));
    };
    rows.push_back({"all", Precision::fp64, ds, rmse_of(all_list(ps, Precision::fp64))});
    rows.push_back({"all", Precision::fp16, ds, rmse_of(all_list(ps, Precision::fp16))});
    rows.push_back(
        {"cell", Precision::fp64, ds, rmse_of(cell_link_list(ps, grid, Precision::fp64))});
    rows.push_back(
        {"cell", Precision::fp16, ds, rmse_of(cell_link_list(ps, grid, Precision::fp16))});
    rows.push_back({"rcll", Precision::fp16, ds, rmse_of(rcll(rel, grid, Precision::fp16))});
  }
  return rows;
}

std::vector<PoiseuilleRow> exp_poiseuille(const PoiseuilleExpConfig& cfg) {
  std::vector<PoiseuilleRow> rows;
  for (const double ds : cfg.ds_ladder) {
    PoiseuilleConfig pc = cfg.base;
    pc.ds = ds;

    // Approaches I and III advance in lockstep; their tables must agree at
    // every step for the run to count as identical.
    const double t0 = now_seconds();
    PoiseuilleSim sim_i(pc, Approach::I);
    PoiseuilleSim sim_iii(pc, Approach::III);
    bool identical = true;
    while (!sim_i.done()) {
      sim_i.step();
      sim_iii.step();
      if (identical && !tables_equal(sim_i.table(), sim_iii.table())) identical = false;
      if (sim_i.has_nan() || sim_iii.has_nan()) {
        throw std::runtime_error("poiseuille rung went unstable (NaN)");
      }
    }
    const double t1 = now_seconds();
    rows.push_back({"I", ds, sim_i.max_location_discrepancy_ds(), true, t1 - t0});
    rows.push_back({"III", ds, sim_iii.max_location_discrepancy_ds(), identical, t1 - t0});

    PoiseuilleSim sim_ii(pc, Approach::II);
    const double t2 = now_seconds();
    while (!sim_ii.done()) {
      sim_ii.step();
      if (sim_ii.has_nan()) throw std::runtime_error("approach II rung went unstable");
    }
    rows.push_back({"II", ds, sim_ii.max_location_discrepancy_ds(), false,
                    now_seconds() - t2});

    if (!cfg.profile_dir.empty()) {
      const std::string path = cfg.profile_dir + "/profile_ds" + std::to_string(ds) + ".csv";
      std::FILE* f = std::fopen(path.c_str(), "w");
      if (f) {
        std::fprintf(f, "y,v_sim,v_theory\n");
        for (const auto& r : sim_i.velocity_profile()) {
          std::fprintf(f, "%.17g,%.17g,%.17g\n", r[0], r[1], r[2]);
        }
        std::fclose(f);
      }
    }
  }
  return rows;
}

std::vector<ScalingRow> exp_scaling(const ScalingConfig& cfg) {
  std::vector<ScalingRow> rows;
  const Domain dom = Domain::unit(2);
  auto median_time = [&](auto&& fn) {
    fn();  // warmup discarded
    std::vector<double> t;
    for (int r = 0; r < cfg.repeats; ++r) {
      const double a = now_seconds();
      fn();
      t.push_back(now_seconds() - a);
    }
    std::sort(t.begin(), t.end());
    return t[t.size() / 2];
  };

  for (const std::size_t n : cfg.n_ladder) {
    ParticleSystem ps = build_random_uniform(dom, n, cfg.seed + n);
    CellGrid grid = make_grid_for(ps);
    grid.rebin(ps);
    RelCoords rel = build_rel_coords(ps, grid);

    ParticleSystem sorted = ps;
    apply_permutation(sorted, spatial_sort_permutation(ps));
    CellGrid grid_s = make_grid_for(sorted);
    grid_s.rebin(sorted);
    RelCoords rel_s = build_rel_coords(sorted, grid_s);

    for (const Precision prec : cfg.precisions) {
      if (n <= cfg.allist_max_n) {
        rows.push_back({"all", prec, n, median_time([&] { all_list(ps, prec); })});
      }
      rows.push_back(
          {"cell", prec, n, median_time([&] { cell_link_list(ps, grid, prec); })});
      rows.push_back({"rcll", prec, n, median_time([&] { rcll(rel, grid, prec); })});
      rows.push_back(
          {"rcll_sorted", prec, n, median_time([&] { rcll(rel_s, grid_s, prec); })});
    }
  }
  return rows;
}

namespace {

std::FILE* open_or_throw(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  return f;
}

}  // namespace

void write_circle_csv(const std::vector<CircleRow>& rows, const std::string& path) {
  std::FILE* f = open_or_throw(path);
  std::fprintf(f, "precision,dR,incorrect_count\n");
  for (const auto& r : rows) {
    std::fprintf(f, "%s,%.17g,%llu\n", to_string(r.precision), r.dR,
                 static_cast<unsigned long long>(r.incorrect_count));
  }
  std::fclose(f);
}

void write_square_csv(const std::vector<SquareRow>& rows, const std::string& path) {
  std::FILE* f = open_or_throw(path);
  std::fprintf(f, "ds,backend,precision,incorrect_count,incorrect_percent\n");
  for (const auto& r : rows) {
    std::fprintf(f, "%.17g,%s,%s,%llu,%.17g\n", r.ds, r.backend.c_str(),
                 to_string(r.precision), static_cast<unsigned long long>(r.incorrect_count),
                 r.incorrect_percent);
  }
  std::fclose(f);
}

void write_gradient_csv(const std::vector<GradientRow>& rows, const std::string& path) {
  std::FILE* f = open_or_throw(path);
  std::fprintf(f, "backend,precision,ds,rmse\n");
  for (const auto& r : rows) {
    std::fprintf(f, "%s,%s,%.17g,%.17g\n", r.backend.c_str(), to_string(r.precision), r.ds,
                 r.rmse);
  }
  std::fclose(f);
}

void write_poiseuille_csv(const std::vector<PoiseuilleRow>& rows, const std::string& path) {
  std::FILE* f = open_or_throw(path);
  std::fprintf(f, "approach,ds,max_discrepancy_over_ds,tables_identical_with_I,runtime_s\n");
  for (const auto& r : rows) {
    std::fprintf(f, "%s,%.17g,%.17g,%d,%.3f\n", r.approach.c_str(), r.ds,
                 r.max_discrepancy_ds, r.tables_identical_with_I ? 1 : 0, r.runtime_seconds);
  }
  std::fclose(f);
}

void write_scaling_csv(const std::vector<ScalingRow>& rows, const std::string& path) {
  std::FILE* f = open_or_throw(path);
  std::fprintf(f, "backend,precision,n,median_runtime_s\n");
  for (const auto& r : rows) {
    std::fprintf(f, "%s,%s,%zu,%.9f\n", r.backend.c_str(), to_string(r.precision), r.n,
                 r.median_seconds);
  }
  std::fclose(f);
}

void write_manifest(const std::string& path, const std::string& experiment,
                    std::uint64_t seed, const std::map<std::string, std::string>& config,
                    const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["config"] = config;
  j["outputs"] = outputs;
  std::FILE* f = open_or_throw(path);
  const std::string s = j.dump(2);
  std::fwrite(s.data(), 1, s.size(), f);
  std::fputc('\n', f);
  std::fclose(f);
}

}  // namespace sphx
