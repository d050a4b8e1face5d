#pragma once

#include <cstdint>

namespace sphx::detail {

// AVX2+F16C kernels, compiled in their own TU. The FP16 pipeline evaluates the
// binary16 operations through float with hardware round-to-half, which is
// bit-identical to the soft-float reference: sums/differences of binary16
// values double-round innocuously through float (24 >= 2*11+2), products of
// binary16 are exact in float, and float sqrt re-rounded to binary16 matches
// the directly rounded square root.
bool batch_kernels_available();

int allist_row_f64_2d(const double* xs, const double* ys, std::int64_t n,
                      std::int64_t i, double cutoff, std::int32_t* out);

int allist_row_f16_2d(const float* xs, const float* ys, std::int64_t n,
                      std::int64_t i, float cutoff16, std::int32_t* out);

// Candidate-range kernel over packed absolute coordinates (cell backend).
// shiftx/shifty are minimum-image shifts already rounded into binary16.
int range_f16_abs_2d(const float* px, const float* py, const std::int32_t* pid,
                     std::int64_t b, std::int64_t e, float xi, float yi,
                     float shiftx, float shifty, float cutoff16, std::int32_t self,
                     std::int32_t* out);

int range_f64_abs_2d(const double* px, const double* py, const std::int32_t* pid,
                     std::int64_t b, std::int64_t e, double xi, double yi,
                     double shiftx, double shifty, double cutoff, std::int32_t self,
                     std::int32_t* out);

// Candidate-range kernel over packed relative coordinates. The x cell-center
// difference is selected per lane from the candidate's cell column unless
// cc_override is set (periodic wrap rows); the y difference is constant.
int range_f16_rel_2d(const float* prx, const float* pry, const std::int32_t* pcx,
                     const std::int32_t* pid, std::int64_t b, std::int64_t e,
                     float rix, float riy, std::int32_t cxi, float half_hcx16,
                     float half_hcy16, float hcx16, float ccy16, float cutoff16,
                     std::int32_t self, bool use_cc_override, float cc_override,
                     std::int32_t* out);

}  // namespace sphx::detail
