#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sphx/binary16.hpp"
#include "sphx/domain.hpp"
#include "sphx/particle_system.hpp"

namespace sphx {

// Eq.-5 style domain normalization: every axis is scaled by the single global
// h_d, so the longest axis maps onto [-1,1] and aspect ratio is preserved.
inline std::array<double, 3> normalize_domain(const std::array<double, 3>& x0,
                                              const Domain& dom) {
  const double hd = dom.h_d();
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int k = 0; k < dom.dim; ++k) {
    out[k] = (2.0 * x0[k] - (dom.hi[k] + dom.lo[k])) / hd;
  }
  return out;
}

inline std::array<double, 3> denormalize_domain(const std::array<double, 3>& xn,
                                                const Domain& dom) {
  const double hd = dom.h_d();
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int k = 0; k < dom.dim; ++k) {
    out[k] = 0.5 * (xn[k] * hd + (dom.hi[k] + dom.lo[k]));
  }
  return out;
}

// Per-particle cell-relative coordinates in [-1,1]^d plus the owning cell,
// kept per axis. Values are held in doubles; a reduced storage precision
// means every component equals its own rounding at that precision.
struct RelCoords {
  std::array<std::vector<double>, 3> rel;
  std::array<std::vector<std::int32_t>, 3> cell;
  std::size_t size() const { return rel[0].size(); }
};

// Uniform background grid sized to the search radius. Non-periodic axes use
// cell edge = radius with ceil() counts (the last cell may extend past the
// domain edge); periodic axes tile the span exactly with edge >= radius so the
// wrapped neighborhood stays geometrically correct. Membership is CSR.
class CellGrid {
 public:
  CellGrid() = default;
  CellGrid(const Domain& dom, double radius,
           std::array<bool, 3> periodic = {false, false, false});

  int dim() const { return dim_; }
  const Domain& domain() const { return domain_; }
  int count(int axis) const { return counts_[axis]; }
  std::int64_t cell_total() const { return total_; }
  bool periodic(int axis) const { return periodic_[axis]; }

  // Physical search radius (2h) and its normalized image 2*radius/h_d.
  double radius_phys() const { return radius_; }
  double cutoff_norm() const { return cutoff_norm_; }

  double edge_phys(int axis) const { return edge_[axis]; }
  // Cell edge in normalized coordinates: 2 * edge_phys / h_d.
  double hc(int axis) const { return hc_[axis]; }

  double origin_norm(int axis) const { return origin_[axis]; }
  double center_norm(int axis, std::int32_t c) const {
    return origin_[axis] + (static_cast<double>(c) + 0.5) * hc_[axis];
  }

  std::int64_t linear_cell(const std::array<std::int32_t, 3>& c) const {
    std::int64_t idx = c[dim_ - 1];
    for (int k = dim_ - 2; k >= 0; --k) idx = idx * counts_[k] + c[k];
    return idx;
  }

  // Cell choice by floor division of the normalized offset; a position exactly
  // on a shared face belongs to the lower-index cell (rel component +1).
  void locate(const std::array<double, 3>& xn, std::array<std::int32_t, 3>& cell,
              std::array<double, 3>& rel) const;

  // Rebuild membership from absolute FP64 positions.
  void rebin(const ParticleSystem& ps);
  // Rebuild the CSR lists from an externally maintained cell assignment
  // (used after migration updates; no coordinate transform involved).
  void rebuild_members(const RelCoords& rc);

  std::int32_t cell_of(std::size_t i) const { return cell_of_[i]; }
  std::span<const std::int32_t> members(std::int64_t cell) const {
    return {items_.data() + start_[cell], items_.data() + start_[cell + 1]};
  }
  std::span<const std::int32_t> items() const { return items_; }
  std::span<const std::int32_t> cell_start() const { return start_; }

 private:
  void build_csr(std::size_t n);

  Domain domain_;
  int dim_ = 0;
  std::array<int, 3> counts_{1, 1, 1};
  std::int64_t total_ = 0;
  double radius_ = 0.0;
  double cutoff_norm_ = 0.0;
  std::array<double, 3> edge_{0.0, 0.0, 0.0};
  std::array<double, 3> hc_{0.0, 0.0, 0.0};
  std::array<double, 3> origin_{0.0, 0.0, 0.0};
  std::array<bool, 3> periodic_{false, false, false};
  std::vector<std::int32_t> cell_of_;
  std::vector<std::int32_t> start_;
  std::vector<std::int32_t> items_;
};

CellGrid make_grid_for(const ParticleSystem& ps,
                       std::array<bool, 3> periodic = {false, false, false});

// to_relative over a whole system; grid membership is rebuilt to match.
RelCoords build_rel_coords(const ParticleSystem& ps, CellGrid& grid);

// Eq.-6-consistent relative-coordinate distance. Per axis
//   d = (rel_i - rel_j) * h_c/2 + (cell_i - cell_j) * h_c
// with the rel arithmetic executed at `prec`; center differences are exact
// grid multiples formed at FP64 and rounded into `prec` before combination.
// (Using h_c/2 instead of the literal h_c keeps the inverse of Eq. 6 exact;
// the brute-force oracle test pins this choice.)
double rel_distance(const RelCoords& rc, std::size_t i, std::size_t j,
                    const CellGrid& grid, Precision prec);

// Incremental update: rel += 2*dx_phys/edge at `prec`; a component leaving
// [-1,1] migrates one cell on that axis and is adjusted by exactly -+2.
// Displacements must not skip a cell; leaving a non-periodic grid throws.
void update_relative(RelCoords& rc, std::size_t i, const std::array<double, 3>& dx_phys,
                     const CellGrid& grid, Precision prec);

// Absolute normalized position reconstructed from (cell, rel).
std::array<double, 3> reconstruct_norm(const RelCoords& rc, std::size_t i,
                                       const CellGrid& grid);

}  // namespace sphx
