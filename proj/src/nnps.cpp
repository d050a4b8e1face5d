#include "sphx/nnps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sphx/detail/nnps_batch.hpp"

namespace sphx {

namespace {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// One pass per row into per-thread buffers, stitched in row order afterwards.
// Output is independent of the thread count; rows are sorted ascending.
template <typename RowFn>
NeighborTable build_table(std::size_t n, double radius, RowFn&& row) {
  NeighborTable t;
  t.radius = radius;
  t.offsets.assign(n + 1, 0);
  const int nt = max_threads();
  std::vector<std::vector<std::int32_t>> bufs(static_cast<std::size_t>(nt));
  std::vector<std::int32_t> counts(n, 0);

#ifdef _OPENMP
#pragma omp parallel num_threads(nt)
#endif
  {
#ifdef _OPENMP
    const int tid = omp_get_thread_num();
#else
    const int tid = 0;
#endif
    const std::size_t lo = n * static_cast<std::size_t>(tid) / static_cast<std::size_t>(nt);
    const std::size_t hi = n * static_cast<std::size_t>(tid + 1) / static_cast<std::size_t>(nt);
    auto& buf = bufs[static_cast<std::size_t>(tid)];
    for (std::size_t i = lo; i < hi; ++i) {
      const std::size_t before = buf.size();
      row(i, buf);
      const std::size_t len = buf.size() - before;
      counts[i] = static_cast<std::int32_t>(len);
      std::sort(buf.begin() + before, buf.end());
    }
  }

  for (std::size_t i = 0; i < n; ++i) t.offsets[i + 1] = t.offsets[i] + counts[i];
  t.items.resize(static_cast<std::size_t>(t.offsets[n]));
  std::size_t pos = 0;
  for (auto& buf : bufs) {
    std::copy(buf.begin(), buf.end(), t.items.begin() + static_cast<std::ptrdiff_t>(pos));
    pos += buf.size();
  }
  return t;
}

struct PrecCoords {
  // Rounded coordinate values kept as doubles (exact binary16/binary32
  // values in fp16/fp32 mode) plus float mirrors for the batch kernels.
  std::array<std::vector<double>, 3> xd;
  std::array<std::vector<float>, 3> xf;
};

PrecCoords round_coords(const ParticleSystem& ps, Precision prec) {
  PrecCoords pc;
  const std::size_t n = ps.size();
  for (int k = 0; k < ps.dim(); ++k) {
    pc.xd[k].resize(n);
    pc.xf[k].resize(n);
    const auto& src = ps.x(k);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = round_to(prec, src[i]);
      pc.xd[k][i] = r;
      pc.xf[k][i] = static_cast<float>(r);
    }
  }
  return pc;
}

double dist_prec(const PrecCoords& pc, int dim, std::size_t i, std::size_t j,
                 const std::array<double, 3>& shift, Precision prec) {
  switch (prec) {
    case Precision::fp64: {
      double acc = 0.0;
      for (int k = 0; k < dim; ++k) {
        const double d = pc.xd[k][i] - (pc.xd[k][j] + shift[k]);
        acc += d * d;
      }
      return std::sqrt(acc);
    }
    case Precision::fp32: {
      float acc = 0.0f;
      for (int k = 0; k < dim; ++k) {
        float xj = static_cast<float>(pc.xd[k][j]);
        if (shift[k] != 0.0) xj += static_cast<float>(shift[k]);
        const float d = static_cast<float>(pc.xd[k][i]) - xj;
        acc += d * d;
      }
      return std::sqrt(acc);
    }
    default: {
      double acc16 = 0.0;
      for (int k = 0; k < dim; ++k) {
        double xj = pc.xd[k][j];
        if (shift[k] != 0.0) xj = round16(xj + shift[k]);
        const double d = round16(pc.xd[k][i] - xj);
        const double sq = round16(d * d);
        acc16 = round16(acc16 + sq);
      }
      return round16(std::sqrt(acc16));
    }
  }
}

}  // namespace

NeighborTable all_list(const ParticleSystem& ps, Precision prec) {
  const std::size_t n = ps.size();
  if (n == 0) throw std::invalid_argument("all_list needs at least one particle");
  const int dim = ps.dim();
  const double cutoff_phys = 2.0 * ps.h();
  const double cutoff = round_to(prec, cutoff_phys);
  const PrecCoords pc = round_coords(ps, prec);
  const std::array<double, 3> noshift{0.0, 0.0, 0.0};

  const bool batch = detail::batch_kernels_available() && dim == 2;
  if (batch && prec == Precision::fp16) {
    const float cutoff16 = static_cast<float>(cutoff);
    const float* xs = pc.xf[0].data();
    const float* ys = pc.xf[1].data();
    return build_table(n, cutoff_phys, [&](std::size_t i, std::vector<std::int32_t>& buf) {
      const std::size_t before = buf.size();
      buf.resize(before + n);
      const int c = detail::allist_row_f16_2d(xs, ys, static_cast<std::int64_t>(n),
                                              static_cast<std::int64_t>(i), cutoff16,
                                              buf.data() + before);
      buf.resize(before + static_cast<std::size_t>(c));
    });
  }
  if (batch && prec == Precision::fp64) {
    const double* xs = pc.xd[0].data();
    const double* ys = pc.xd[1].data();
    return build_table(n, cutoff_phys, [&](std::size_t i, std::vector<std::int32_t>& buf) {
      const std::size_t before = buf.size();
      buf.resize(before + n);
      const int c = detail::allist_row_f64_2d(xs, ys, static_cast<std::int64_t>(n),
                                              static_cast<std::int64_t>(i), cutoff,
                                              buf.data() + before);
      buf.resize(before + static_cast<std::size_t>(c));
    });
  }

  return build_table(n, cutoff_phys, [&](std::size_t i, std::vector<std::int32_t>& buf) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (dist_prec(pc, dim, i, j, noshift, prec) < cutoff) {
        buf.push_back(static_cast<std::int32_t>(j));
      }
    }
  });
}

NeighborTable cell_link_list(const ParticleSystem& ps, const CellGrid& grid, Precision prec) {
  const std::size_t n = ps.size();
  const int dim = ps.dim();
  const double cutoff_phys = 2.0 * ps.h();
  const double cutoff = round_to(prec, cutoff_phys);
  const PrecCoords pc = round_coords(ps, prec);

  // Pack coordinates in cell (CSR) order so candidate scans are contiguous.
  const auto items = grid.items();
  const std::size_t m = items.size();
  if (m != n) throw std::invalid_argument("grid membership is stale; rebin first");
  std::array<std::vector<double>, 3> pxd;
  std::array<std::vector<float>, 3> pxf;
  for (int k = 0; k < dim; ++k) {
    pxd[k].resize(m);
    pxf[k].resize(m);
    for (std::size_t s = 0; s < m; ++s) {
      pxd[k][s] = pc.xd[k][items[s]];
      pxf[k][s] = pc.xf[k][items[s]];
    }
  }

  std::array<double, 3> span_prec{0.0, 0.0, 0.0};
  for (int k = 0; k < dim; ++k) span_prec[k] = round_to(prec, grid.domain().span(k));

  const auto start = grid.cell_start();
  const bool batch = detail::batch_kernels_available() && dim == 2;
  const std::int32_t* pid = items.data();

  return build_table(n, cutoff_phys, [&](std::size_t i, std::vector<std::int32_t>& buf) {
    std::array<std::int32_t, 3> ci{0, 0, 0};
    std::int32_t lin = grid.cell_of(i);
    for (int k = 0; k < dim; ++k) {
      ci[k] = lin % grid.count(k);
      lin /= grid.count(k);
    }
    std::array<std::int32_t, 3> c{0, 0, 0};
    std::array<double, 3> shift{0.0, 0.0, 0.0};
    const int oy_lo = dim > 1 ? -1 : 0, oy_hi = dim > 1 ? 1 : 0;
    const int oz_lo = dim > 2 ? -1 : 0, oz_hi = dim > 2 ? 1 : 0;
    for (int oz = oz_lo; oz <= oz_hi; ++oz) {
      for (int oy = oy_lo; oy <= oy_hi; ++oy) {
        for (int ox = -1; ox <= 1; ++ox) {
          const std::array<int, 3> off{ox, oy, oz};
          bool skip = false;
          for (int k = 0; k < dim; ++k) {
            std::int32_t ck = ci[k] + off[k];
            shift[k] = 0.0;
            if (ck < 0) {
              if (grid.periodic(k) && grid.count(k) > 2) {
                ck += grid.count(k);
                shift[k] = -span_prec[k];  // candidate is one period below
              } else {
                skip = true;
                break;
              }
            } else if (ck >= grid.count(k)) {
              if (grid.periodic(k) && grid.count(k) > 2) {
                ck -= grid.count(k);
                shift[k] = span_prec[k];
              } else {
                skip = true;
                break;
              }
            }
            c[k] = ck;
          }
          if (skip) continue;
          const std::int64_t cell = grid.linear_cell(c);
          const std::int64_t b = start[cell];
          const std::int64_t e = start[cell + 1];
          if (b == e) continue;
          if (batch && prec == Precision::fp16) {
            std::int32_t tmp[512];
            for (std::int64_t q = b; q < e; q += 384) {
              const std::int64_t qe = std::min<std::int64_t>(e, q + 384);
              const int cnt = detail::range_f16_abs_2d(
                  pxf[0].data(), pxf[1].data(), pid, q, qe,
                  static_cast<float>(pc.xd[0][i]), static_cast<float>(pc.xd[1][i]),
                  static_cast<float>(round16(shift[0])), static_cast<float>(round16(shift[1])),
                  static_cast<float>(cutoff), static_cast<std::int32_t>(i), tmp);
              buf.insert(buf.end(), tmp, tmp + cnt);
            }
          } else if (batch && prec == Precision::fp64) {
            std::int32_t tmp[512];
            for (std::int64_t q = b; q < e; q += 384) {
              const std::int64_t qe = std::min<std::int64_t>(e, q + 384);
              const int cnt = detail::range_f64_abs_2d(
                  pxd[0].data(), pxd[1].data(), pid, q, qe, pc.xd[0][i], pc.xd[1][i],
                  shift[0], shift[1], cutoff, static_cast<std::int32_t>(i), tmp);
              buf.insert(buf.end(), tmp, tmp + cnt);
            }
          } else {
            std::array<double, 3> sh{0.0, 0.0, 0.0};
            for (int k = 0; k < dim; ++k) sh[k] = shift[k];
            for (std::int64_t s = b; s < e; ++s) {
              const std::int32_t j = pid[s];
              if (static_cast<std::size_t>(j) == i) continue;
              if (dist_prec(pc, dim, i, static_cast<std::size_t>(j), sh, prec) < cutoff) {
                buf.push_back(j);
              }
            }
          }
        }
      }
    }
  });
}

NeighborTable rcll(const RelCoords& rc, const CellGrid& grid, Precision prec) {
  const std::size_t n = rc.size();
  const int dim = grid.dim();
  const double cutoff_phys = grid.radius_phys();
  // Normalized cutoff 2h * 2/h_d; equals the normalized cell edge when the
  // grid tiles at exactly the search radius.
  const double cutoff = round_to(prec, grid.cutoff_norm());
  std::array<double, 3> hc{0.0, 0.0, 0.0};
  std::array<double, 3> half_hc{0.0, 0.0, 0.0};
  for (int k = 0; k < dim; ++k) {
    hc[k] = grid.hc(k);
    half_hc[k] = round_to(prec, 0.5 * hc[k]);
  }

  const auto items = grid.items();
  if (items.size() != n) throw std::invalid_argument("grid membership is stale");
  // Packed rel coords at storage precision, in cell order.
  std::array<std::vector<double>, 3> prd;
  std::array<std::vector<float>, 3> prf;
  std::array<std::vector<std::int32_t>, 3> pcell;
  std::array<std::vector<double>, 3> rel_prec;
  for (int k = 0; k < dim; ++k) {
    rel_prec[k].resize(n);
    for (std::size_t i = 0; i < n; ++i) rel_prec[k][i] = round_to(prec, rc.rel[k][i]);
    prd[k].resize(n);
    prf[k].resize(n);
    pcell[k].resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      prd[k][s] = rel_prec[k][items[s]];
      prf[k][s] = static_cast<float>(prd[k][s]);
      pcell[k][s] = rc.cell[k][items[s]];
    }
  }

  const auto start = grid.cell_start();
  const std::int32_t* pid = items.data();
  const bool batch = detail::batch_kernels_available() && dim == 2 && prec == Precision::fp16;

  auto axis_term = [&](int k, double reli, double relj, int dc) {
    // d = (rel_i - rel_j) * h_c/2 + (cell_i - cell_j) * h_c, all at prec.
    switch (prec) {
      case Precision::fp64:
        return (reli - relj) * (0.5 * hc[k]) + static_cast<double>(dc) * hc[k];
      case Precision::fp32: {
        const float s = static_cast<float>(reli) - static_cast<float>(relj);
        const float t = s * static_cast<float>(half_hc[k]);
        const float cc = static_cast<float>(round_to(prec, dc * hc[k]));
        return static_cast<double>(t + cc);
      }
      default: {
        const double s = round16(reli - relj);
        const double t = round16(s * half_hc[k]);
        const double cc = round16(static_cast<double>(dc) * hc[k]);
        return round16(t + cc);
      }
    }
  };
  auto finish = [&](double accx) {
    switch (prec) {
      case Precision::fp64: return std::sqrt(accx);
      case Precision::fp32: return static_cast<double>(std::sqrt(static_cast<float>(accx)));
      default: return round16(std::sqrt(accx));
    }
  };

  return build_table(n, cutoff_phys, [&](std::size_t i, std::vector<std::int32_t>& buf) {
    std::array<std::int32_t, 3> ci{0, 0, 0};
    for (int k = 0; k < dim; ++k) ci[k] = rc.cell[k][i];
    std::array<std::int32_t, 3> c{0, 0, 0};
    const int oy_lo = dim > 1 ? -1 : 0, oy_hi = dim > 1 ? 1 : 0;
    const int oz_lo = dim > 2 ? -1 : 0, oz_hi = dim > 2 ? 1 : 0;
    for (int oz = oz_lo; oz <= oz_hi; ++oz) {
      for (int oy = oy_lo; oy <= oy_hi; ++oy) {
        for (int ox = -1; ox <= 1; ++ox) {
          const std::array<int, 3> off{ox, oy, oz};
          bool skip = false;
          std::array<int, 3> dc{0, 0, 0};  // cell_i - cell_j under minimum image
          for (int k = 0; k < dim; ++k) {
            std::int32_t ck = ci[k] + off[k];
            dc[k] = -off[k];
            if (ck < 0 || ck >= grid.count(k)) {
              if (grid.periodic(k) && grid.count(k) > 2) {
                ck = (ck + grid.count(k)) % grid.count(k);
              } else {
                skip = true;
                break;
              }
            }
            c[k] = ck;
          }
          if (skip) continue;
          const std::int64_t cell = grid.linear_cell(c);
          const std::int64_t b = start[cell];
          const std::int64_t e = start[cell + 1];
          if (b == e) continue;
          if (batch) {
            const bool wrapped_x = (ci[0] + ox < 0) || (ci[0] + ox >= grid.count(0));
            const float ccy = static_cast<float>(round16(static_cast<double>(dc[1]) * hc[1]));
            std::int32_t tmp[512];
            for (std::int64_t q = b; q < e; q += 384) {
              const std::int64_t qe = std::min<std::int64_t>(e, q + 384);
              const int cnt = detail::range_f16_rel_2d(
                  prf[0].data(), prf[1].data(), pcell[0].data(), pid, q, qe,
                  static_cast<float>(rel_prec[0][i]), static_cast<float>(rel_prec[1][i]),
                  ci[0], static_cast<float>(half_hc[0]), static_cast<float>(half_hc[1]),
                  static_cast<float>(round16(hc[0])), ccy, static_cast<float>(cutoff),
                  static_cast<std::int32_t>(i), wrapped_x,
                  static_cast<float>(round16(static_cast<double>(dc[0]) * hc[0])), tmp);
              buf.insert(buf.end(), tmp, tmp + cnt);
            }
          } else {
            for (std::int64_t s = b; s < e; ++s) {
              const std::int32_t j = pid[s];
              if (static_cast<std::size_t>(j) == i) continue;
              double acc = 0.0;
              for (int k = 0; k < dim; ++k) {
                const double d = axis_term(k, rel_prec[k][i], prd[k][s], dc[k]);
                switch (prec) {
                  case Precision::fp64: acc += d * d; break;
                  case Precision::fp32:
                    acc = static_cast<double>(static_cast<float>(acc) +
                                              static_cast<float>(d) * static_cast<float>(d));
                    break;
                  default: acc = round16(acc + round16(d * d)); break;
                }
              }
              if (finish(acc) < cutoff) buf.push_back(j);
            }
          }
        }
      }
    }
  });
}

MismatchReport mismatch_report(const NeighborTable& candidate, const NeighborTable& oracle) {
  if (candidate.size() != oracle.size()) {
    throw std::invalid_argument("tables cover different particle counts");
  }
  MismatchReport rep;
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    const auto a = candidate.row(i);
    const auto b = oracle.row(i);
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
      if (a[ia] == b[ib]) {
        ++ia;
        ++ib;
      } else if (a[ia] < b[ib]) {
        ++rep.incorrect_count;
        ++ia;
      } else {
        ++rep.incorrect_count;
        ++ib;
      }
    }
    rep.incorrect_count += (a.size() - ia) + (b.size() - ib);
  }
  const auto denom = static_cast<double>(oracle.total());
  rep.incorrect_percent =
      denom > 0.0 ? 100.0 * static_cast<double>(rep.incorrect_count) / denom : 0.0;
  return rep;
}

std::vector<std::uint32_t> spatial_sort_permutation(const ParticleSystem& ps) {
  std::vector<std::uint32_t> perm(ps.size());
  std::iota(perm.begin(), perm.end(), 0u);
  const int dim = ps.dim();
  std::stable_sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
    for (int k = 0; k < dim; ++k) {
      if (ps.x(k)[a] != ps.x(k)[b]) return ps.x(k)[a] < ps.x(k)[b];
    }
    return a < b;
  });
  return perm;
}

void apply_permutation(ParticleSystem& ps, const std::vector<std::uint32_t>& perm) {
  const std::size_t n = ps.size();
  if (perm.size() != n) throw std::invalid_argument("permutation size mismatch");
  auto reorder = [&](std::vector<double>& a) {
    std::vector<double> tmp(n);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = a[perm[k]];
    a.swap(tmp);
  };
  for (int k = 0; k < ps.dim(); ++k) {
    reorder(ps.x_[k]);
    reorder(ps.v_[k]);
  }
  reorder(ps.rho_);
  reorder(ps.p_);
  reorder(ps.e_);
  reorder(ps.m_);
}

NeighborTable remap_table(const NeighborTable& t, const std::vector<std::uint32_t>& perm) {
  const std::size_t n = t.size();
  std::vector<std::uint32_t> inv(n);
  for (std::size_t k = 0; k < n; ++k) inv[perm[k]] = static_cast<std::uint32_t>(k);
  NeighborTable out;
  out.radius = t.radius;
  out.offsets.assign(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) {
    out.offsets[k + 1] = out.offsets[k] + static_cast<std::int64_t>(t.row(perm[k]).size());
  }
  out.items.resize(static_cast<std::size_t>(out.offsets[n]));
  for (std::size_t k = 0; k < n; ++k) {
    auto src = t.row(perm[k]);
    auto* dst = out.items.data() + out.offsets[k];
    for (std::size_t q = 0; q < src.size(); ++q) dst[q] = static_cast<std::int32_t>(inv[src[q]]);
    std::sort(dst, dst + src.size());
  }
  return out;
}

bool tables_equal(const NeighborTable& a, const NeighborTable& b) {
  return a.size() == b.size() && a.offsets == b.offsets && a.items == b.items;
}

}  // namespace sphx
