#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "sphx/cell_grid.hpp"
#include "sphx/gradient.hpp"
#include "sphx/kernel.hpp"
#include "sphx/nnps.hpp"
#include "sphx/particle_system.hpp"

namespace sphx {

// The three mixed-precision configurations: backend plus NNPS precision.
// Everything outside the neighbor search runs at FP64.
enum class Approach { I, II, III };

inline const char* to_string(Approach a) {
  switch (a) {
    case Approach::I: return "I";
    case Approach::II: return "II";
    default: return "III";
  }
}

inline Precision nnps_precision(Approach a) {
  return a == Approach::I ? Precision::fp64 : Precision::fp16;
}

// Symmetric rank-2 tensors per particle: xx, yy, zz, xy, xz, yz.
struct StressState {
  std::array<std::vector<double>, 6> sigma;
  std::array<std::vector<double>, 6> tau;
  std::array<std::vector<double>, 6> eps;
};

constexpr int sym_index(int a, int b) {
  if (a == b) return a;
  const int lo = a < b ? a : b;
  const int hi = a < b ? b : a;
  if (lo == 0) return hi == 1 ? 3 : 4;
  return 5;  // (1,2)
}

// Newtonian closure: eps = (grad v + grad v^T)/2 via the normalized gradient,
// tau = mu (grad v + grad v^T), sigma = -p I + tau.
StressState assemble_newtonian_stress(const ParticleSystem& ps, const NeighborTable& nt,
                                      const KernelParams& kp, double mu);

// Continuity: D rho_i / Dt = sum_j m_j (v_i - v_j) . dW_ij/dx.
std::vector<double> rhs_density(const ParticleSystem& ps, const NeighborTable& nt,
                                const KernelParams& kp);

// Momentum: Dv_i/Dt = sum_j m_j (sigma_i/rho_i^2 + sigma_j/rho_j^2) . dW_ij + f.
std::array<std::vector<double>, 3> rhs_momentum(const ParticleSystem& ps,
                                                const StressState& stress,
                                                const std::array<double, 3>& body_force,
                                                const NeighborTable& nt,
                                                const KernelParams& kp);

// Energy: De_i/Dt = 1/2 sum_j m_j (p_i/rho_i^2 + p_j/rho_j^2)(v_i - v_j) . dW_ij
//                   + (1/rho_i) tau_i : eps_i.
std::vector<double> rhs_energy(const ParticleSystem& ps, const StressState& stress,
                               const NeighborTable& nt, const KernelParams& kp);

// Weakly compressible equation of state p = c^2 (rho - rho0).
void apply_eos(ParticleSystem& ps, double c_sound, double rho0);

struct MixedState {
  ParticleSystem ps;
  CellGrid grid;
  RelCoords rel;
  Approach approach = Approach::I;

  MixedState(ParticleSystem system, std::array<bool, 3> periodic, Approach a)
      : ps(std::move(system)), grid(make_grid_for(ps, periodic)), approach(a) {
    grid.rebin(ps);
    rel = build_rel_coords(ps, grid);
  }
};

struct StepConfig {
  double dt = 0.0;
  double c_sound = 0.0;
  double rho0 = 1.0;
  double mu = 0.0;                       // dynamic viscosity
  std::array<double, 3> body_force{0.0, 0.0, 0.0};
  std::size_t n_moving = 0;              // particles beyond this index stay fixed
  bool evolve_density = true;
  bool compute_energy = false;
  // Runs after NNPS and before the rates; the Poiseuille driver refreshes its
  // wall dummies here.
  std::function<void(ParticleSystem&)> pre_force;
};

struct StepResult {
  NeighborTable table;
  double max_dx = 0.0;  // largest per-axis displacement, for CFL diagnostics
};

// One mixed-precision time step: NNPS per approach, FP64 rates, symplectic
// Euler kick-drift, then coordinate maintenance (approach III updates relative
// coordinates incrementally with migration; I/II rebin from absolute FP64).
StepResult step_mixed(MixedState& st, const StepConfig& cfg);

}  // namespace sphx
