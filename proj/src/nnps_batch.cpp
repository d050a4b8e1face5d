#include "sphx/detail/nnps_batch.hpp"

#if defined(SPHX_HAVE_F16C_BUILD)
#include <immintrin.h>
#endif

namespace sphx::detail {

#if defined(SPHX_HAVE_F16C_BUILD)

bool batch_kernels_available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("f16c");
}

namespace {

// Round each float lane to binary16 and back; lanes become exact binary16
// values.
inline __m256 round16x8(__m256 v) {
  return _mm256_cvtph_ps(_mm256_cvtps_ph(v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
}

inline int emit_hits(__m256 r, __m256 cutoff, const std::int32_t* ids, std::int64_t lanes,
                     std::int32_t self, std::int32_t* out) {
  const __m256 lt = _mm256_cmp_ps(r, cutoff, _CMP_LT_OQ);
  int mask = _mm256_movemask_ps(lt);
  if (lanes < 8) mask &= (1 << lanes) - 1;
  int n = 0;
  while (mask) {
    const int lane = __builtin_ctz(mask);
    mask &= mask - 1;
    const std::int32_t id = ids[lane];
    if (id != self) out[n++] = id;
  }
  return n;
}

}  // namespace

int allist_row_f64_2d(const double* xs, const double* ys, std::int64_t n,
                      std::int64_t i, double cutoff, std::int32_t* out) {
  const __m256d xi = _mm256_set1_pd(xs[i]);
  const __m256d yi = _mm256_set1_pd(ys[i]);
  const __m256d cut = _mm256_set1_pd(cutoff);
  int count = 0;
  std::int64_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(xs + j));
    const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(ys + j));
    const __m256d acc = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d r = _mm256_sqrt_pd(acc);
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(r, cut, _CMP_LT_OQ));
    while (mask) {
      const int lane = __builtin_ctz(mask);
      mask &= mask - 1;
      const std::int64_t id = j + lane;
      if (id != i) out[count++] = static_cast<std::int32_t>(id);
    }
  }
  for (; j < n; ++j) {
    if (j == i) continue;
    const double dx = xs[i] - xs[j];
    const double dy = ys[i] - ys[j];
    if (__builtin_sqrt(dx * dx + dy * dy) < cutoff) out[count++] = static_cast<std::int32_t>(j);
  }
  return count;
}

int allist_row_f16_2d(const float* xs, const float* ys, std::int64_t n,
                      std::int64_t i, float cutoff16, std::int32_t* out) {
  const __m256 xi = _mm256_set1_ps(xs[i]);
  const __m256 yi = _mm256_set1_ps(ys[i]);
  const __m256 cut = _mm256_set1_ps(cutoff16);
  int count = 0;
  std::int64_t j = 0;
  alignas(32) std::int32_t idbuf[8];
  for (; j + 8 <= n; j += 8) {
    const __m256 dx = round16x8(_mm256_sub_ps(xi, _mm256_loadu_ps(xs + j)));
    const __m256 dy = round16x8(_mm256_sub_ps(yi, _mm256_loadu_ps(ys + j)));
    const __m256 sx = round16x8(_mm256_mul_ps(dx, dx));
    const __m256 sy = round16x8(_mm256_mul_ps(dy, dy));
    const __m256 acc = round16x8(_mm256_add_ps(sx, sy));
    const __m256 r = round16x8(_mm256_sqrt_ps(acc));
    const int mask = _mm256_movemask_ps(_mm256_cmp_ps(r, cut, _CMP_LT_OQ));
    if (!mask) continue;
    int m = mask;
    while (m) {
      const int lane = __builtin_ctz(m);
      m &= m - 1;
      const std::int64_t id = j + lane;
      if (id != i) out[count++] = static_cast<std::int32_t>(id);
    }
  }
  if (j < n) {
    alignas(32) float xbuf[8];
    alignas(32) float ybuf[8];
    const std::int64_t lanes = n - j;
    for (std::int64_t k = 0; k < lanes; ++k) {
      xbuf[k] = xs[j + k];
      ybuf[k] = ys[j + k];
      idbuf[k] = static_cast<std::int32_t>(j + k);
    }
    for (std::int64_t k = lanes; k < 8; ++k) {
      xbuf[k] = 0.0f;
      ybuf[k] = 0.0f;
      idbuf[k] = -1;
    }
    const __m256 dx = round16x8(_mm256_sub_ps(xi, _mm256_load_ps(xbuf)));
    const __m256 dy = round16x8(_mm256_sub_ps(yi, _mm256_load_ps(ybuf)));
    const __m256 sx = round16x8(_mm256_mul_ps(dx, dx));
    const __m256 sy = round16x8(_mm256_mul_ps(dy, dy));
    const __m256 acc = round16x8(_mm256_add_ps(sx, sy));
    const __m256 r = round16x8(_mm256_sqrt_ps(acc));
    count += emit_hits(r, cut, idbuf, lanes, static_cast<std::int32_t>(i), out + count);
  }
  return count;
}

int range_f16_abs_2d(const float* px, const float* py, const std::int32_t* pid,
                     std::int64_t b, std::int64_t e, float xi, float yi,
                     float shiftx, float shifty, float cutoff16, std::int32_t self,
                     std::int32_t* out) {
  const __m256 vxi = _mm256_set1_ps(xi);
  const __m256 vyi = _mm256_set1_ps(yi);
  const __m256 vsx = _mm256_set1_ps(shiftx);
  const __m256 vsy = _mm256_set1_ps(shifty);
  const __m256 cut = _mm256_set1_ps(cutoff16);
  const bool shift = (shiftx != 0.0f) || (shifty != 0.0f);
  int count = 0;
  for (std::int64_t j = b; j < e; j += 8) {
    const std::int64_t lanes = (e - j < 8) ? (e - j) : 8;
    alignas(32) float xbuf[8];
    alignas(32) float ybuf[8];
    alignas(32) std::int32_t idbuf[8];
    for (std::int64_t k = 0; k < lanes; ++k) {
      xbuf[k] = px[j + k];
      ybuf[k] = py[j + k];
      idbuf[k] = pid[j + k];
    }
    for (std::int64_t k = lanes; k < 8; ++k) {
      xbuf[k] = 0.0f;
      ybuf[k] = 0.0f;
      idbuf[k] = self;  // masked out below anyway
    }
    __m256 xj = _mm256_load_ps(xbuf);
    __m256 yj = _mm256_load_ps(ybuf);
    if (shift) {
      xj = round16x8(_mm256_add_ps(xj, vsx));
      yj = round16x8(_mm256_add_ps(yj, vsy));
    }
    const __m256 dx = round16x8(_mm256_sub_ps(vxi, xj));
    const __m256 dy = round16x8(_mm256_sub_ps(vyi, yj));
    const __m256 sx = round16x8(_mm256_mul_ps(dx, dx));
    const __m256 sy = round16x8(_mm256_mul_ps(dy, dy));
    const __m256 acc = round16x8(_mm256_add_ps(sx, sy));
    const __m256 r = round16x8(_mm256_sqrt_ps(acc));
    count += emit_hits(r, cut, idbuf, lanes, self, out + count);
  }
  return count;
}

int range_f64_abs_2d(const double* px, const double* py, const std::int32_t* pid,
                     std::int64_t b, std::int64_t e, double xi, double yi,
                     double shiftx, double shifty, double cutoff, std::int32_t self,
                     std::int32_t* out) {
  int count = 0;
  const __m256d vxi = _mm256_set1_pd(xi);
  const __m256d vyi = _mm256_set1_pd(yi);
  const __m256d vsx = _mm256_set1_pd(shiftx);
  const __m256d vsy = _mm256_set1_pd(shifty);
  const __m256d cut = _mm256_set1_pd(cutoff);
  for (std::int64_t j = b; j < e; j += 4) {
    const std::int64_t lanes = (e - j < 4) ? (e - j) : 4;
    alignas(32) double xbuf[4];
    alignas(32) double ybuf[4];
    std::int32_t idbuf[4];
    for (std::int64_t k = 0; k < lanes; ++k) {
      xbuf[k] = px[j + k];
      ybuf[k] = py[j + k];
      idbuf[k] = pid[j + k];
    }
    for (std::int64_t k = lanes; k < 4; ++k) {
      xbuf[k] = 0.0;
      ybuf[k] = 0.0;
      idbuf[k] = self;
    }
    const __m256d xj = _mm256_add_pd(_mm256_load_pd(xbuf), vsx);
    const __m256d yj = _mm256_add_pd(_mm256_load_pd(ybuf), vsy);
    const __m256d dx = _mm256_sub_pd(vxi, xj);
    const __m256d dy = _mm256_sub_pd(vyi, yj);
    const __m256d r = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(r, cut, _CMP_LT_OQ));
    if (lanes < 4) mask &= (1 << lanes) - 1;
    while (mask) {
      const int lane = __builtin_ctz(mask);
      mask &= mask - 1;
      if (idbuf[lane] != self) out[count++] = idbuf[lane];
    }
  }
  return count;
}

int range_f16_rel_2d(const float* prx, const float* pry, const std::int32_t* pcx,
                     const std::int32_t* pid, std::int64_t b, std::int64_t e,
                     float rix, float riy, std::int32_t cxi, float half_hcx16,
                     float half_hcy16, float hcx16, float ccy16, float cutoff16,
                     std::int32_t self, bool use_cc_override, float cc_override,
                     std::int32_t* out) {
  const __m256 vrix = _mm256_set1_ps(rix);
  const __m256 vriy = _mm256_set1_ps(riy);
  const __m256 vhalfx = _mm256_set1_ps(half_hcx16);
  const __m256 vhalfy = _mm256_set1_ps(half_hcy16);
  const __m256 vhc = _mm256_set1_ps(hcx16);
  const __m256 vccy = _mm256_set1_ps(ccy16);
  const __m256 cut = _mm256_set1_ps(cutoff16);
  const __m256i vcxi = _mm256_set1_epi32(cxi);
  const __m256 vzero = _mm256_setzero_ps();
  const __m256 vcco = _mm256_set1_ps(cc_override);
  int count = 0;
  for (std::int64_t j = b; j < e; j += 8) {
    const std::int64_t lanes = (e - j < 8) ? (e - j) : 8;
    alignas(32) float rxbuf[8];
    alignas(32) float rybuf[8];
    alignas(32) std::int32_t cxbuf[8];
    alignas(32) std::int32_t idbuf[8];
    for (std::int64_t k = 0; k < lanes; ++k) {
      rxbuf[k] = prx[j + k];
      rybuf[k] = pry[j + k];
      cxbuf[k] = pcx[j + k];
      idbuf[k] = pid[j + k];
    }
    for (std::int64_t k = lanes; k < 8; ++k) {
      rxbuf[k] = 0.0f;
      rybuf[k] = 0.0f;
      cxbuf[k] = cxi;
      idbuf[k] = self;
    }
    __m256 ccx;
    if (use_cc_override) {
      ccx = vcco;
    } else {
      const __m256i cxj = _mm256_load_si256(reinterpret_cast<const __m256i*>(cxbuf));
      const __m256i dgt = _mm256_cmpgt_epi32(vcxi, cxj);   // cxi > cxj -> +hc
      const __m256i dlt = _mm256_cmpgt_epi32(cxj, vcxi);   // cxi < cxj -> -hc
      ccx = _mm256_blendv_ps(vzero, vhc, _mm256_castsi256_ps(dgt));
      ccx = _mm256_blendv_ps(ccx, _mm256_sub_ps(vzero, vhc), _mm256_castsi256_ps(dlt));
    }
    const __m256 sx = round16x8(_mm256_sub_ps(vrix, _mm256_load_ps(rxbuf)));
    const __m256 sy = round16x8(_mm256_sub_ps(vriy, _mm256_load_ps(rybuf)));
    const __m256 tx = round16x8(_mm256_mul_ps(sx, vhalfx));
    const __m256 ty = round16x8(_mm256_mul_ps(sy, vhalfy));
    const __m256 dx = round16x8(_mm256_add_ps(tx, ccx));
    const __m256 dy = round16x8(_mm256_add_ps(ty, vccy));
    const __m256 qx = round16x8(_mm256_mul_ps(dx, dx));
    const __m256 qy = round16x8(_mm256_mul_ps(dy, dy));
    const __m256 acc = round16x8(_mm256_add_ps(qx, qy));
    const __m256 r = round16x8(_mm256_sqrt_ps(acc));
    count += emit_hits(r, cut, idbuf, lanes, self, out + count);
  }
  return count;
}

#else  // !SPHX_HAVE_F16C_BUILD

bool batch_kernels_available() { return false; }

int allist_row_f64_2d(const double*, const double*, std::int64_t, std::int64_t, double,
                      std::int32_t*) { return -1; }
int allist_row_f16_2d(const float*, const float*, std::int64_t, std::int64_t, float,
                      std::int32_t*) { return -1; }
int range_f16_abs_2d(const float*, const float*, const std::int32_t*, std::int64_t,
                     std::int64_t, float, float, float, float, float, std::int32_t,
                     std::int32_t*) { return -1; }
int range_f64_abs_2d(const double*, const double*, const std::int32_t*, std::int64_t,
                     std::int64_t, double, double, double, double, double, std::int32_t,
                     std::int32_t*) { return -1; }
int range_f16_rel_2d(const float*, const float*, const std::int32_t*, const std::int32_t*,
                     std::int64_t, std::int64_t, float, float, std::int32_t, float, float,
                     float, float, float, std::int32_t, bool, float, std::int32_t*) {
  return -1;
}

#endif

}  // namespace sphx::detail
