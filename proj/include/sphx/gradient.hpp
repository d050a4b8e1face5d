#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sphx/kernel.hpp"
#include "sphx/nnps.hpp"
#include "sphx/particle_system.hpp"

namespace sphx {

struct GradField {
  std::array<std::vector<double>, 3> g;
  std::int64_t degenerate_count = 0;  // grad_normalized only
};

// Standard SPH gradient: sum_j V_j f_j dW_ij/dx with V_j = m_j / rho_j.
GradField grad_standard(const std::vector<double>& f, const ParticleSystem& ps,
                        const NeighborTable& nt, const KernelParams& kp);

// Volume-free first-order gradient: per axis
//   <f_i^x> = sum_j (f_j - f_i) dW/dx / sum_j (x_j - x_i) dW/dx.
// Exact on linear fields for any neighbor arrangement. A vanishing
// denominator flags the particle as degenerate and reports zero there.
GradField grad_normalized(const std::vector<double>& f, const ParticleSystem& ps,
                          const NeighborTable& nt, const KernelParams& kp);

}  // namespace sphx
