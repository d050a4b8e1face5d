#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sphx/kernel.hpp"
#include "sphx/rng.hpp"

using namespace sphx;

TEST_CASE("kernel values") {
  const KernelParams kp = make_kernel(1.0, 2);
  CHECK(kernel_w(2.0, kp) == 0.0);
  CHECK(kernel_w(2.5, kp) == 0.0);
  // W(0) = alpha_2 * 2/3 = 10/(7 pi)
  CHECK(kernel_w(0.0, kp) == doctest::Approx(10.0 / (7.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(kernel_w(0.5, kp) > 0.0);
}

TEST_CASE("junction continuity at R = 1 and R = 2") {
  for (const int dim : {1, 2, 3}) {
    const KernelParams kp = make_kernel(0.37, dim);
    const double eps = 1e-9;
    // value continuity, checked analytically at the junction itself
    const double left1 = kp.alpha * (2.0 / 3.0 - 1.0 + 0.5);
    const double right1 = kp.alpha * (1.0 / 6.0);
    CHECK(std::abs(left1 - right1) < 1e-15 * kp.alpha);
    const double dleft1 = kp.alpha * (-2.0 + 1.5);
    const double dright1 = -kp.alpha * 0.5;
    CHECK(std::abs(dleft1 - dright1) < 1e-15 * kp.alpha);
    // and numerically across the junctions
    CHECK(kernel_w(kp.h * (1.0 - eps), kp) ==
          doctest::Approx(kernel_w(kp.h * (1.0 + eps), kp)).epsilon(1e-7));
    CHECK(kernel_w(kp.h * (2.0 - eps), kp) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(kernel_dwdr(2.0, kp) == 0.0);
  }
}

TEST_CASE("unit integral by quadrature") {
  // 1-D: 2 * int_0^{2h} W dr;  2-D: int W 2 pi r dr;  3-D: int W 4 pi r^2 dr
  const double h = 0.23;
  const int steps = 20000;
  for (const int dim : {1, 2, 3}) {
    const KernelParams kp = make_kernel(h, dim);
    const double top = 2.0 * h;
    const double dr = top / steps;
    double acc = 0.0;
    for (int s = 0; s < steps; ++s) {
      const double r = (s + 0.5) * dr;
      const double w = kernel_w(r, kp);
      if (dim == 1) {
        acc += 2.0 * w * dr;
      } else if (dim == 2) {
        acc += w * 2.0 * std::numbers::pi * r * dr;
      } else {
        acc += w * 4.0 * std::numbers::pi * r * r * dr;
      }
    }
    CHECK(std::abs(acc - 1.0) < 1e-6);
  }
}

TEST_CASE("kernel is nonnegative on its support") {
  const KernelParams kp = make_kernel(0.5, 3);
  for (int s = 0; s <= 1000; ++s) {
    const double r = s * 0.001 * 2.0 * kp.h;
    CHECK(kernel_w(r, kp) >= 0.0);
  }
}

TEST_CASE("gradient antisymmetry and zero at the origin") {
  const KernelParams kp = make_kernel(0.77, 3);
  CHECK(kernel_grad({0.0, 0.0, 0.0}, kp) == std::array<double, 3>{0.0, 0.0, 0.0});
  Rng rng(3);
  for (int it = 0; it < 100; ++it) {
    std::array<double, 3> dx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                             rng.uniform(-1.0, 1.0)};
    const auto g = kernel_grad(dx, kp);
    const auto gm = kernel_grad({-dx[0], -dx[1], -dx[2]}, kp);
    for (int k = 0; k < 3; ++k) CHECK(g[k] == doctest::Approx(-gm[k]).epsilon(1e-14));
  }
}

TEST_CASE("gradient matches central finite differences") {
  const KernelParams kp = make_kernel(0.31, 2);
  Rng rng(9);
  for (int it = 0; it < 200; ++it) {
    // stay away from the support edge and the origin where W' is tiny
    const double r = rng.uniform(0.15, 1.8) * kp.h;
    const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const std::array<double, 3> dx{r * std::cos(th), r * std::sin(th), 0.0};
    const auto g = kernel_grad(dx, kp);
    const double eps = 1e-7 * kp.h;
    for (int k = 0; k < 2; ++k) {
      auto at = [&](double shift) {
        std::array<double, 3> q = dx;
        q[k] += shift;
        const double rr = std::sqrt(q[0] * q[0] + q[1] * q[1]);
        return kernel_w(rr, kp);
      };
      const double fd = (at(eps) - at(-eps)) / (2.0 * eps);
      const double scale = std::max(std::abs(fd), kp.alpha * 1e-4);
      CHECK(std::abs(g[k] - fd) / scale < 1e-5);
    }
  }
}
