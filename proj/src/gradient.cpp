#include "sphx/gradient.hpp"

#include <cmath>
#include <stdexcept>

namespace sphx {

namespace {

void check_sizes(const std::vector<double>& f, const ParticleSystem& ps,
                 const NeighborTable& nt) {
  if (f.size() != ps.size() || nt.size() != ps.size()) {
    throw std::invalid_argument("field/table size mismatch");
  }
}

}  // namespace

GradField grad_standard(const std::vector<double>& f, const ParticleSystem& ps,
                        const NeighborTable& nt, const KernelParams& kp) {
  check_sizes(f, ps, nt);
  const int dim = ps.dim();
  const std::size_t n = ps.size();
  GradField out;
  for (int k = 0; k < dim; ++k) out.g[k].assign(n, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    std::array<double, 3> dx{0.0, 0.0, 0.0};
    for (const std::int32_t j : nt.row(i)) {
      for (int k = 0; k < dim; ++k) dx[k] = ps.x(k)[i] - ps.x(k)[j];
      const auto gw = kernel_grad(dx, kp);
      const double vj = ps.m()[j] / ps.rho()[j];
      for (int k = 0; k < dim; ++k) acc[k] += vj * f[j] * gw[k];
    }
    for (int k = 0; k < dim; ++k) out.g[k][i] = acc[k];
  }
  return out;
}

GradField grad_normalized(const std::vector<double>& f, const ParticleSystem& ps,
                          const NeighborTable& nt, const KernelParams& kp) {
  check_sizes(f, ps, nt);
  const int dim = ps.dim();
  const std::size_t n = ps.size();
  GradField out;
  for (int k = 0; k < dim; ++k) out.g[k].assign(n, 0.0);
  std::int64_t degenerate = 0;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : degenerate)
#endif
  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, 3> num{0.0, 0.0, 0.0};
    std::array<double, 3> den{0.0, 0.0, 0.0};
    std::array<double, 3> scale{0.0, 0.0, 0.0};
    std::array<double, 3> dx{0.0, 0.0, 0.0};
    for (const std::int32_t j : nt.row(i)) {
      for (int k = 0; k < dim; ++k) dx[k] = ps.x(k)[i] - ps.x(k)[j];
      const auto gw = kernel_grad(dx, kp);
      const double df = f[j] - f[i];
      for (int k = 0; k < dim; ++k) {
        num[k] += df * gw[k];
        den[k] += -dx[k] * gw[k];  // (x_j - x_i) dW/dx
        scale[k] += std::abs(dx[k] * gw[k]);
      }
    }
    for (int k = 0; k < dim; ++k) {
      if (std::abs(den[k]) < 1e-14 * (scale[k] > 0.0 ? scale[k] : 1.0)) {
        out.g[k][i] = 0.0;
        ++degenerate;
      } else {
        out.g[k][i] = num[k] / den[k];
      }
    }
  }
  out.degenerate_count = degenerate;
  return out;
}

}  // namespace sphx
