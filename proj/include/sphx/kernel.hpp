#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sphx {

// Cubic B-spline kernel with support radius 2h.
struct KernelParams {
  double h = 0.0;
  int dim = 0;
  double alpha = 0.0;  // 1/h, 15/(7 pi h^2), 3/(2 pi h^3)
};

inline KernelParams make_kernel(double h, int dim) {
  if (!(h > 0.0)) throw std::invalid_argument("smoothing length must be positive");
  KernelParams kp;
  kp.h = h;
  kp.dim = dim;
  switch (dim) {
    case 1: kp.alpha = 1.0 / h; break;
    case 2: kp.alpha = 15.0 / (7.0 * std::numbers::pi * h * h); break;
    case 3: kp.alpha = 3.0 / (2.0 * std::numbers::pi * h * h * h); break;
    default: throw std::invalid_argument("kernel dimension must be 1, 2 or 3");
  }
  return kp;
}

inline double kernel_w(double r, const KernelParams& kp) {
  const double R = r / kp.h;
  if (R < 1.0) return kp.alpha * (2.0 / 3.0 - R * R + 0.5 * R * R * R);
  if (R < 2.0) {
    const double t = 2.0 - R;
    return kp.alpha * (t * t * t / 6.0);
  }
  return 0.0;
}

// dW/dR, the radial derivative in units of R = r/h.
inline double kernel_dwdr(double R, const KernelParams& kp) {
  if (R < 1.0) return kp.alpha * (-2.0 * R + 1.5 * R * R);
  if (R < 2.0) {
    const double t = 2.0 - R;
    return -kp.alpha * (0.5 * t * t);
  }
  return 0.0;
}

// Gradient with respect to the first argument's position: dx = x_i - x_j.
// Zero vector at coincident points (dW/dR vanishes at R = 0).
inline std::array<double, 3> kernel_grad(const std::array<double, 3>& dx,
                                         const KernelParams& kp) {
  double r2 = 0.0;
  for (int k = 0; k < kp.dim; ++k) r2 += dx[k] * dx[k];
  const double r = std::sqrt(r2);
  std::array<double, 3> g{0.0, 0.0, 0.0};
  if (r == 0.0) return g;
  const double R = r / kp.h;
  const double scale = kernel_dwdr(R, kp) / (kp.h * r);
  for (int k = 0; k < kp.dim; ++k) g[k] = scale * dx[k];
  return g;
}

}  // namespace sphx
