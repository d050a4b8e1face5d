#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sphx/binary16.hpp"
#include "sphx/cell_grid.hpp"
#include "sphx/particle_system.hpp"

namespace sphx {

// Shared output contract of the three search backends. Rows are CSR and kept
// ascending, which makes set comparisons trivial and downstream FP64
// accumulations independent of the backend that produced the table.
struct NeighborTable {
  std::vector<std::int64_t> offsets;  // size n+1
  std::vector<std::int32_t> items;
  double radius = 0.0;                // physical cutoff 2h

  std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::span<const std::int32_t> row(std::size_t i) const {
    return {items.data() + offsets[i], items.data() + offsets[i + 1]};
  }
  std::int64_t total() const { return offsets.empty() ? 0 : offsets.back(); }
};

// O(N^2) reference backend. In reduced precision the absolute coordinates are
// rounded into the storage precision first; distance arithmetic and the
// comparison against the rounded cutoff run at that precision.
NeighborTable all_list(const ParticleSystem& ps, Precision prec);

// Cell link-list backend: candidates come from the particle's cell and the
// 3^d - 1 adjacent cells; the distance test matches all_list at equal
// precision. Periodic axes wrap the neighborhood and use minimum image.
NeighborTable cell_link_list(const ParticleSystem& ps, const CellGrid& grid, Precision prec);

// Relative-coordinate link list: candidate enumeration as cell_link_list but
// distances go through rel_distance; the cutoff is the normalized 2h*(2/h_d)
// rounded into the precision.
NeighborTable rcll(const RelCoords& rc, const CellGrid& grid, Precision prec);
// rcll needs the physical cutoff to record table radius; pulled from grid.

struct MismatchReport {
  std::uint64_t incorrect_count = 0;
  double incorrect_percent = 0.0;
};

// Directed symmetric difference per particle, normalized by the oracle's
// total neighbor count.
MismatchReport mismatch_report(const NeighborTable& candidate, const NeighborTable& oracle);

// Lexicographic (x, then y, then z) ordering permutation: perm[k] is the old
// index of the particle placed at new position k.
std::vector<std::uint32_t> spatial_sort_permutation(const ParticleSystem& ps);
void apply_permutation(ParticleSystem& ps, const std::vector<std::uint32_t>& perm);
NeighborTable remap_table(const NeighborTable& t, const std::vector<std::uint32_t>& perm);

bool tables_equal(const NeighborTable& a, const NeighborTable& b);

}  // namespace sphx
