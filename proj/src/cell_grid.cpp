#include "sphx/cell_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sphx {

CellGrid::CellGrid(const Domain& dom, double radius, std::array<bool, 3> periodic)
    : domain_(dom), dim_(dom.dim), radius_(radius), periodic_(periodic) {
  if (!(radius > 0.0)) throw std::invalid_argument("search radius must be positive");
  const double hd = dom.h_d();
  cutoff_norm_ = 2.0 * radius / hd;
  total_ = 1;
  for (int k = 0; k < dim_; ++k) {
    const double span = dom.span(k);
    if (periodic_[k]) {
      const int c = static_cast<int>(std::floor(span / radius + 1e-12));
      counts_[k] = c > 0 ? c : 1;
      edge_[k] = span / counts_[k];
      if (counts_[k] < 3) {
        throw std::invalid_argument("periodic axis needs at least 3 cells");
      }
    } else {
      counts_[k] = static_cast<int>(std::ceil(span / radius - 1e-12));
      if (counts_[k] < 1) counts_[k] = 1;
      edge_[k] = radius;
    }
    hc_[k] = 2.0 * edge_[k] / hd;
    total_ *= counts_[k];
    origin_[k] = (2.0 * dom.lo[k] - (dom.hi[k] + dom.lo[k])) / hd;
  }
  start_.assign(static_cast<std::size_t>(total_) + 1, 0);
}

void CellGrid::locate(const std::array<double, 3>& xn, std::array<std::int32_t, 3>& cell,
                      std::array<double, 3>& rel) const {
  for (int k = 0; k < dim_; ++k) {
    const double off = xn[k] - origin_[k];
    auto c = static_cast<std::int32_t>(std::floor(off / hc_[k]));
    if (c < 0) c = 0;
    if (c >= counts_[k]) c = counts_[k] - 1;
    double r = 2.0 * (xn[k] - center_norm(k, c)) / hc_[k];
    // Guard against the floor division landing one cell off, then apply the
    // shared-face tie break (lower cell keeps the particle at rel = +1).
    if (r < -1.0 && c > 0) {
      --c;
      r = 2.0 * (xn[k] - center_norm(k, c)) / hc_[k];
    } else if (r > 1.0 && c + 1 < counts_[k]) {
      ++c;
      r = 2.0 * (xn[k] - center_norm(k, c)) / hc_[k];
    }
    if (r == -1.0 && c > 0) {
      --c;
      r = 1.0;
    }
    cell[k] = c;
    rel[k] = r;
  }
  for (int k = dim_; k < 3; ++k) {
    cell[k] = 0;
    rel[k] = 0.0;
  }
}

void CellGrid::rebin(const ParticleSystem& ps) {
  const std::size_t n = ps.size();
  cell_of_.assign(n, 0);
  std::array<std::int32_t, 3> c{};
  std::array<double, 3> r{};
  for (std::size_t i = 0; i < n; ++i) {
    const auto xn = normalize_domain(ps.position(i), domain_);
    for (int k = 0; k < dim_; ++k) {
      const double off = xn[k] - origin_[k];
      const double top = counts_[k] * hc_[k];
      if (off < -1e-9 * hc_[k] || off > top + 1e-9 * hc_[k]) {
        throw std::out_of_range("particle " + std::to_string(i) + " lies outside the grid");
      }
    }
    locate(xn, c, r);
    cell_of_[i] = static_cast<std::int32_t>(linear_cell(c));
  }
  build_csr(n);
}

void CellGrid::rebuild_members(const RelCoords& rc) {
  const std::size_t n = rc.size();
  cell_of_.assign(n, 0);
  std::array<std::int32_t, 3> c{};
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < dim_; ++k) c[k] = rc.cell[k][i];
    cell_of_[i] = static_cast<std::int32_t>(linear_cell(c));
  }
  build_csr(n);
}

void CellGrid::build_csr(std::size_t n) {
  start_.assign(static_cast<std::size_t>(total_) + 1, 0);
  for (std::size_t i = 0; i < n; ++i) ++start_[static_cast<std::size_t>(cell_of_[i]) + 1];
  for (std::size_t cidx = 0; cidx < static_cast<std::size_t>(total_); ++cidx) {
    start_[cidx + 1] += start_[cidx];
  }
  items_.assign(n, 0);
  std::vector<std::int32_t> cursor(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    items_[cursor[cell_of_[i]]++] = static_cast<std::int32_t>(i);
  }
}

CellGrid make_grid_for(const ParticleSystem& ps, std::array<bool, 3> periodic) {
  return CellGrid(ps.domain(), 2.0 * ps.h(), periodic);
}

RelCoords build_rel_coords(const ParticleSystem& ps, CellGrid& grid) {
  RelCoords rc;
  const std::size_t n = ps.size();
  for (int k = 0; k < grid.dim(); ++k) {
    rc.rel[k].assign(n, 0.0);
    rc.cell[k].assign(n, 0);
  }
  std::array<std::int32_t, 3> c{};
  std::array<double, 3> r{};
  for (std::size_t i = 0; i < n; ++i) {
    const auto xn = normalize_domain(ps.position(i), grid.domain());
    grid.locate(xn, c, r);
    for (int k = 0; k < grid.dim(); ++k) {
      rc.rel[k][i] = r[k];
      rc.cell[k][i] = c[k];
    }
  }
  grid.rebuild_members(rc);
  return rc;
}

double rel_distance(const RelCoords& rc, std::size_t i, std::size_t j,
                    const CellGrid& grid, Precision prec) {
  switch (prec) {
    case Precision::fp64: {
      double acc = 0.0;
      for (int k = 0; k < grid.dim(); ++k) {
        const double hc = grid.hc(k);
        const double cc = static_cast<double>(rc.cell[k][i] - rc.cell[k][j]) * hc;
        const double d = (rc.rel[k][i] - rc.rel[k][j]) * (0.5 * hc) + cc;
        acc += d * d;
      }
      return std::sqrt(acc);
    }
    case Precision::fp32: {
      float acc = 0.0f;
      for (int k = 0; k < grid.dim(); ++k) {
        const double hc = grid.hc(k);
        const auto ri = static_cast<float>(static_cast<float>(rc.rel[k][i]));
        const auto rj = static_cast<float>(static_cast<float>(rc.rel[k][j]));
        const auto half_hc = static_cast<float>(0.5 * hc);
        const auto cc =
            static_cast<float>(static_cast<double>(rc.cell[k][i] - rc.cell[k][j]) * hc);
        const float d = (ri - rj) * half_hc + cc;
        acc += d * d;
      }
      return static_cast<double>(std::sqrt(acc));
    }
    default: {
      double acc = 0.0;
      for (int k = 0; k < grid.dim(); ++k) {
        const double hc = grid.hc(k);
        const double ri = round16(rc.rel[k][i]);
        const double rj = round16(rc.rel[k][j]);
        const double half_hc = round16(0.5 * hc);
        const double cc = round16(static_cast<double>(rc.cell[k][i] - rc.cell[k][j]) * hc);
        const double s = round16(ri - rj);
        const double t = round16(s * half_hc);
        const double d = round16(t + cc);
        acc = round16(acc + round16(d * d));
      }
      return round16(std::sqrt(acc));
    }
  }
}

void update_relative(RelCoords& rc, std::size_t i, const std::array<double, 3>& dx_phys,
                     const CellGrid& grid, Precision prec) {
  for (int k = 0; k < grid.dim(); ++k) {
    const double edge = grid.edge_phys(k);
    if (!(std::abs(dx_phys[k]) < edge)) {
      throw std::runtime_error("displacement skips a cell on axis " + std::to_string(k));
    }
    const double inc = round_to(prec, 2.0 * dx_phys[k] / edge);
    double r = round_to(prec, rc.rel[k][i] + inc);
    std::int32_t c = rc.cell[k][i];
    if (r > 1.0) {
      r -= 2.0;  // exact in every precision
      ++c;
      if (c >= grid.count(k)) {
        if (grid.periodic(k)) {
          c = 0;
        } else {
          throw std::runtime_error("particle leaves the grid on axis " + std::to_string(k));
        }
      }
    } else if (r < -1.0) {
      r += 2.0;
      --c;
      if (c < 0) {
        if (grid.periodic(k)) {
          c = grid.count(k) - 1;
        } else {
          throw std::runtime_error("particle leaves the grid on axis " + std::to_string(k));
        }
      }
    }
    rc.rel[k][i] = r;
    rc.cell[k][i] = c;
  }
}

std::array<double, 3> reconstruct_norm(const RelCoords& rc, std::size_t i,
                                       const CellGrid& grid) {
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int k = 0; k < grid.dim(); ++k) {
    out[k] = grid.center_norm(k, rc.cell[k][i]) + rc.rel[k][i] * (0.5 * grid.hc(k));
  }
  return out;
}

}  // namespace sphx
