#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>

namespace sphx {

struct Domain {
  int dim = 2;
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{1.0, 1.0, 1.0};

  static Domain unit(int dim) {
    Domain d;
    d.dim = dim;
    return d;
  }

  static Domain box(int dim, std::array<double, 3> lo, std::array<double, 3> hi) {
    Domain d;
    d.dim = dim;
    d.lo = lo;
    d.hi = hi;
    d.validate();
    return d;
  }

  void validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("domain dimension must be 1, 2 or 3");
    for (int k = 0; k < dim; ++k) {
      if (!(lo[k] < hi[k])) throw std::invalid_argument("domain bounds must satisfy lo < hi");
    }
  }

  double span(int k) const { return hi[k] - lo[k]; }

  // Longest axis span; the global normalization length of the coordinate maps.
  double h_d() const {
    double m = 0.0;
    for (int k = 0; k < dim; ++k) m = std::max(m, span(k));
    return m;
  }

  double volume() const {
    double v = 1.0;
    for (int k = 0; k < dim; ++k) v *= span(k);
    return v;
  }

  bool contains(const std::array<double, 3>& x) const {
    for (int k = 0; k < dim; ++k) {
      if (x[k] < lo[k] || x[k] > hi[k]) return false;
    }
    return true;
  }
};

}  // namespace sphx
